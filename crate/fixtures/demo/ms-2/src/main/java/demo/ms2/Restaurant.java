package demo.ms2;

import java.util.List;
import java.util.UUID;
import javax.persistence.Entity;

@Entity
public class Restaurant {
    private UUID id;
    private String title;
    private List<Food> menu;
    private Station station;
}
