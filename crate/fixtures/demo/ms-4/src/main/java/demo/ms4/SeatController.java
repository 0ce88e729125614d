package demo.ms4;

import java.util.UUID;
import org.springframework.web.bind.annotation.*;
import org.springframework.web.client.RestTemplate;

@RestController
@RequestMapping("/seats")
public class SeatController {
    private RestTemplate restTemplate;

    @PostMapping("/reserve")
    public Seat reserve(@RequestBody SeatRequest request) {
        Train train = restTemplate.getForObject("http://ms-2/trains/{id}", Train.class, request.getSeat());
        return null;
    }
}
