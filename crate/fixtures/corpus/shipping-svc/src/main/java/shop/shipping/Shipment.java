package shop.shipping;

import java.util.UUID;
import javax.persistence.*;

@Entity
public class Shipment {
    @Id
    private UUID id;
    private String carrier;
    @Embedded
    private OrderDto order;
}
