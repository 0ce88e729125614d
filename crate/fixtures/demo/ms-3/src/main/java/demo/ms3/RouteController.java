package demo.ms3;

import java.util.List;
import java.util.UUID;
import org.springframework.web.bind.annotation.*;
import org.springframework.web.client.RestTemplate;

@RestController
@RequestMapping("/routes")
public class RouteController {
    private RestTemplate restTemplate;

    @GetMapping("/{id}/stations")
    public List<StationDto> stations(@PathVariable UUID id) {
        StationDto first = restTemplate.getForObject("http://ms-2/stations/" + id, StationDto.class);
        return List.of(first);
    }
}
