package demo.ms2;

import java.util.UUID;
import lombok.Data;

@Data
public class FoodOrder {
    private UUID orderId;
    private Food food;
    private int quantity;
    private String note;
}
