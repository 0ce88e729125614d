package demo.ms2;

import java.util.List;
import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Train {
    private UUID id;
    private String type;
    private int capacity;
    private List<Station> stops;
}
