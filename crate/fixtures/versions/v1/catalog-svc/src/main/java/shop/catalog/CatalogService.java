package shop.catalog;

import java.util.List;
import java.util.UUID;

public interface CatalogService {
    List<ProductDto> all();
    ProductDto find(UUID id);
    ProductDto save(ProductDto dto);
    void remove(UUID id);
}
