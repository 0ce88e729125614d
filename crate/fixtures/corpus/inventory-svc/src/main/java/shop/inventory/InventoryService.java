package shop.inventory;

import org.springframework.stereotype.Service;
import org.springframework.web.client.RestTemplate;

@Service
public class InventoryService {

    private static final String CATALOG = "http://catalog-svc";

    private final RestTemplate restTemplate = new RestTemplate();
    private final StockRepository repository;

    public InventoryService(StockRepository repository) {
        this.repository = repository;
    }

    public StockItem lookup(String sku) {
        Object product = restTemplate.getForObject("http://catalog-svc:8080/api/v1/catalog/products/" + sku, Object.class);
        return repository.findById(sku).orElse(null);
    }

    public boolean reserve(String sku, int quantity) {
        Object[] all = restTemplate.getForObject("http://catalog-svc/api/v1/catalog/products", Object[].class);
        return all != null && quantity > 0;
    }
}
