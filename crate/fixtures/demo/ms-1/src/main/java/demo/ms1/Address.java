package demo.ms1;

import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Address {
    private UUID id;
    private String street;
    private String city;
}
