package demo.ms4;

import java.util.Date;
import lombok.Data;

@Data
public class SeatRequest {
    private Seat seat;
    private Date date;
}
