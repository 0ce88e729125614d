package shop.order;

import java.util.UUID;
import org.springframework.http.HttpEntity;
import org.springframework.http.HttpMethod;
import org.springframework.web.bind.annotation.*;
import org.springframework.web.client.RestTemplate;

@RestController
@RequestMapping("/api/v1/orders")
public class OrderController {

    private RestTemplate restTemplate;

    @GetMapping("/{id}")
    public Order get(@PathVariable UUID id) {
        return null;
    }

    @PostMapping
    public Order place(@RequestBody Order order) {
        for (OrderLine line : order.getLines()) {
            String sku = line.getSku();
            Integer stock = restTemplate.getForObject("http://inventory-svc/api/v1/inventory/" + sku, Integer.class);
            restTemplate.put("http://inventory-svc/api/v1/inventory/" + sku + "/reserve?qty=" + line.getQuantity(), null);
        }
        String shipUrl = "http://shipping-svc/api/v1/shipments";
        Object shipment = restTemplate.postForObject(shipUrl, order, Object.class);
        return order;
    }

    @DeleteMapping("/{id}/product/{productId}")
    public void dropProduct(@PathVariable UUID id, @PathVariable UUID productId) {
        restTemplate.exchange("http://catalog-svc/api/v1/catalog/products/{pid}", HttpMethod.DELETE,
                new HttpEntity<>(null), Void.class, productId);
    }
}
