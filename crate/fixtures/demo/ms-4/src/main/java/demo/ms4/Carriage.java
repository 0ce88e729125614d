package demo.ms4;

import java.util.List;
import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Carriage {
    private UUID id;
    private int number;
    private List<Seat> seats;
}
