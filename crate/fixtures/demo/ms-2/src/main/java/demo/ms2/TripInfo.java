package demo.ms2;

import java.util.UUID;
import lombok.Data;

@Data
public class TripInfo {
    private UUID tripId;
    private Train train;
    private Station departure;
}
