package demo.ms4;

import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Train {
    private UUID id;
    private String type;
}
