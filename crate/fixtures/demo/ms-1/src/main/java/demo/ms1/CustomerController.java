package demo.ms1;

import java.util.List;
import java.util.UUID;
import org.springframework.web.bind.annotation.*;
import org.springframework.web.client.RestTemplate;

@RestController
public class CustomerController {
    private RestTemplate restTemplate;

    @GetMapping("/customers/{id}/orders")
    public List<FoodOrderDto> orders(@PathVariable UUID id) {
        return null;
    }

    @PostMapping("/customers/{id}/orders")
    public FoodOrderDto order(@PathVariable UUID id, @RequestBody FoodOrderDto dto) {
        return restTemplate.postForObject("http://ms-2/orders", dto, FoodOrderDto.class);
    }
}
