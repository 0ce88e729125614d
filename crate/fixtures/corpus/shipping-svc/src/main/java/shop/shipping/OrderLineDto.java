package shop.shipping;

import java.util.UUID;
import lombok.Data;

@Data
public class OrderLineDto {
    private UUID id;
    private String sku;
    private Integer quantity;
}
