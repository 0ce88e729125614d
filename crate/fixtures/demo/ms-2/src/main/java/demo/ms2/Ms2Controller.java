package demo.ms2;

import java.util.UUID;
import org.springframework.web.bind.annotation.*;

@RestController
public class Ms2Controller {

    @PostMapping("/orders")
    public FoodOrder order(@RequestBody FoodOrder order) {
        return order;
    }

    @GetMapping("/stations/{id}")
    public Station station(@PathVariable UUID id) {
        return null;
    }

    @GetMapping("/trains/{id}")
    public Train train(@PathVariable UUID id) {
        return null;
    }

    @GetMapping("/trips/{id}")
    public TripInfo trip(@PathVariable UUID id) {
        return null;
    }
}
