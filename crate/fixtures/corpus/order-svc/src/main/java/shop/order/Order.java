package shop.order;

import java.util.Date;
import java.util.List;
import java.util.UUID;
import javax.persistence.*;

@Entity
@Table(name = "orders")
public class Order {
    @Id
    private UUID id;
    private String customer;
    private Date createdAt;
    @OneToMany(mappedBy = "order")
    private List<OrderLine> lines;

    public List<OrderLine> getLines() { return lines; }
}
