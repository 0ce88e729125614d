package shop.catalog;

import java.util.UUID;
import javax.persistence.*;

@Entity
@Table(name = "products")
public class Product {
    @Id
    private UUID id;
    private String name;
    private double price;
    @ManyToOne
    private Category category;

    public UUID getId() { return id; }
    public String getName() { return name; }
}
