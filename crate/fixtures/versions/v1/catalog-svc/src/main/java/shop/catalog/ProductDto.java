package shop.catalog;

import java.util.UUID;
import lombok.Data;

@Data
public class ProductDto {
    private UUID id;
    private String name;
    private Double price;
}
