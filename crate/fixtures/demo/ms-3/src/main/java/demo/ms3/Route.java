package demo.ms3;

import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Route {
    private UUID id;
    private int distance;
    private Schedule schedule;
}
