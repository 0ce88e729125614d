package demo.ms3;

import java.util.UUID;
import lombok.Data;

@Data
public class StationDto {
    private UUID id;
    private String name;
    private int stayTime;
    private Route route;
}
