package shop.shipping;

import java.util.Date;
import java.util.List;
import java.util.UUID;
import lombok.Data;

@Data
public class OrderDto {
    private UUID id;
    private String customer;
    private Date createdAt;
    private List<OrderLineDto> lines;
}
