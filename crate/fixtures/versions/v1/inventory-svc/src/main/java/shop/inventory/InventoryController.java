package shop.inventory;

import org.springframework.web.bind.annotation.*;

@RestController
@RequestMapping(value = "/api/v1/inventory/")
public class InventoryController {

    private final InventoryService inventory;

    public InventoryController(InventoryService inventory) {
        this.inventory = inventory;
    }

    @GetMapping("{sku}")
    public StockItem stock(@PathVariable String sku) {
        return inventory.lookup(sku);
    }

    @PutMapping("/{sku}/reserve")
    public boolean reserve(@PathVariable String sku, @RequestParam("qty") int quantity) {
        return inventory.reserve(sku, quantity);
    }
}
