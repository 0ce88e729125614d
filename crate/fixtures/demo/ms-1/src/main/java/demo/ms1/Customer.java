package demo.ms1;

import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Customer {
    private UUID id;
    private String name;
    private Address address;
    private Food favoriteFood;
}
