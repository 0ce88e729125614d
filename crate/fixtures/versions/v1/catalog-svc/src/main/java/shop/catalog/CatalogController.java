package shop.catalog;

import java.util.List;
import java.util.UUID;
import org.springframework.web.bind.annotation.*;

/**
 * Product catalogue. {@code /api/v1/catalog} is the base path.
 */
@RestController
@RequestMapping("/api/v1/catalog")
public class CatalogController {

    private final CatalogService service;

    public CatalogController(CatalogService service) {
        this.service = service;
    }

    @GetMapping("/products")
    public List<ProductDto> list() {
        return service.all();
    }

    @GetMapping(value = "/products/{id}")
    public ProductDto get(@PathVariable("id") UUID id) {
        return service.find(id);
    }

    @RequestMapping(path = "/products", method = RequestMethod.POST)
    public ProductDto create(@RequestBody ProductDto dto) {
        return service.save(dto);
    }

    @PutMapping("/products/{id}")
    public ProductDto update(@PathVariable UUID id, @RequestBody ProductDto dto) {
        return service.save(dto);
    }

    // "/products/{id}" removal
    @DeleteMapping(path = {"/products/{id}"})
    public void delete(@PathVariable UUID id) {
        service.remove(id);
    }
}
