package demo.ms4;

import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Seat {
    private UUID id;
    private int number;
    private Train train;
}
