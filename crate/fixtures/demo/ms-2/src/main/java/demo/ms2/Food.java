package demo.ms2;

import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Food {
    private UUID id;
    private String name;
    private double price;
    private int stock;
}
