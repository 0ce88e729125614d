package demo.ms1;

import java.util.UUID;
import lombok.Data;

@Data
public class FoodOrderDto {
    private UUID orderId;
    private Food food;
    private int quantity;
}
