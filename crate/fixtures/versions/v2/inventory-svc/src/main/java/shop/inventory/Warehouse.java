package shop.inventory;

import org.springframework.data.mongodb.core.mapping.Document;

@Document
public class Warehouse {
    private String id;
    private String name;
    private String location;
}
