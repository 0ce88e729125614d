package shop.shipping;

import java.util.List;
import java.util.UUID;
import org.springframework.web.bind.annotation.*;
import org.springframework.web.client.RestTemplate;

@RestController
@RequestMapping("/api/v1/shipments")
public class ShippingController {

    private final RestTemplate rest = new RestTemplate();

    @PostMapping
    public Shipment create(@RequestBody OrderDto order) {
        /* the order service has no history endpoint: this call stays unresolved */
        Object history = rest.getForObject("http://order-svc/api/v1/orders/" + order.getId() + "/history", Object.class);
        return new Shipment();
    }

    @GetMapping("/{id}/lines")
    public List<OrderLineDto> lines(@PathVariable("id") UUID shipmentId) {
        return null;
    }
}
