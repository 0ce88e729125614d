package demo.ms3;

import java.util.Date;
import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Schedule {
    private UUID id;
    private Date departure;
}
