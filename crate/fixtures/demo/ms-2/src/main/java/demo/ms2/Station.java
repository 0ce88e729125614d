package demo.ms2;

import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Station {
    private UUID id;
    private String name;
    private int stayTime;
}
