package shop.order;

import java.util.UUID;
import javax.persistence.*;

@Entity
public class OrderLine {
    @Id
    private UUID id;
    private String sku;
    private int quantity;
    @ManyToOne
    private Order order;

    public String getSku() { return sku; }
    public int getQuantity() { return quantity; }
}
