package shop.inventory;

import org.springframework.data.annotation.Id;
import org.springframework.data.mongodb.core.mapping.Document;

@Document(collection = "stock")
public class StockItem {
    @Id
    private String id;
    private String productId;
    private int quantity;
    private Warehouse warehouse;
}
