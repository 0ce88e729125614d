//! A small four-service system used as a worked example throughout the docs
//! and tests.
//!
//! MS-1 through MS-4 hold 3, 4, 2 and 3 persistent entities and 1, 2, 1 and 1
//! transient entities, with 3, 6, 2 and 3 intra-service relationships. MS-1,
//! MS-3 and MS-4 each call one endpoint of MS-2. Four entity pairs across
//! services describe the same concept. The same system exists as Java
//! sources under `fixtures/demo`.

use crate::model::{
    CallSite, DataEntity, Endpoint, EntityId, Field, HttpMethod, Microservice, Parameter,
    Persistence, Relationship, ResolvedTarget, SystemModel,
};

/// Short labels (`P-2.3`, `T-1.1`, ...) for the entities of
/// [`demonstrating_system`].
pub const DEMONSTRATING_LABELS: [(&str, &str, &str); 17] = [
    ("P-1.1", "ms-1", "demo.ms1.Customer"),
    ("P-1.2", "ms-1", "demo.ms1.Address"),
    ("P-1.3", "ms-1", "demo.ms1.Food"),
    ("T-1.1", "ms-1", "demo.ms1.FoodOrderDto"),
    ("P-2.1", "ms-2", "demo.ms2.Food"),
    ("P-2.2", "ms-2", "demo.ms2.Restaurant"),
    ("P-2.3", "ms-2", "demo.ms2.Station"),
    ("P-2.4", "ms-2", "demo.ms2.Train"),
    ("T-2.1", "ms-2", "demo.ms2.FoodOrder"),
    ("T-2.2", "ms-2", "demo.ms2.TripInfo"),
    ("P-3.1", "ms-3", "demo.ms3.Route"),
    ("P-3.2", "ms-3", "demo.ms3.Schedule"),
    ("T-3.2", "ms-3", "demo.ms3.StationDto"),
    ("P-4.1", "ms-4", "demo.ms4.Train"),
    ("P-4.2", "ms-4", "demo.ms4.Seat"),
    ("P-4.3", "ms-4", "demo.ms4.Carriage"),
    ("T-4.1", "ms-4", "demo.ms4.SeatRequest"),
];

/// Label of an entity of the demonstrating example, if it has one.
pub fn demonstrating_label(id: &EntityId) -> Option<&'static str> {
    DEMONSTRATING_LABELS
        .iter()
        .find(|(_, owner, qn)| id.owner == *owner && id.qualified_name == *qn)
        .map(|(label, _, _)| *label)
}

struct EntitySpec<'a> {
    name: &'a str,
    persistence: Persistence,
    fields: &'a [(&'a str, &'a str, bool)],
}

fn entity(owner: &str, package: &str, spec: &EntitySpec<'_>, all: &[EntitySpec<'_>]) -> DataEntity {
    let mut e = DataEntity::new(owner, format!("{package}.{}", spec.name), spec.persistence)
        .with_fields(spec.fields.iter().map(|(ty, name, coll)| Field {
            type_name: ty.to_string(),
            name: name.to_string(),
            is_collection: *coll,
        }));
    let id = e.id();
    for (ty, name, _) in spec.fields {
        if all.iter().any(|other| other.name == *ty) {
            e.relationships.push(Relationship::new(
                id.clone(),
                EntityId::new(owner, format!("{package}.{ty}")),
                *name,
            ));
        }
    }
    e
}

fn service(name: &str, package: &str, specs: &[EntitySpec<'_>]) -> Microservice {
    let mut ms = Microservice::new(name);
    for spec in specs {
        let e = entity(name, package, spec, specs);
        if spec.persistence.is_persistent() {
            ms.persistent_entities.push(e);
        } else {
            ms.transient_entities.push(e);
        }
    }
    ms
}

fn endpoint(method: HttpMethod, path: &str, ret: &str, params: &[(&str, &str)], unit: &str) -> Endpoint {
    Endpoint {
        url_path: path.into(),
        http_method: method,
        return_type: ret.into(),
        parameters: params.iter().map(|(t, n)| Parameter::new(*t, *n)).collect(),
        declaring_unit: unit.into(),
    }
}

fn call(method: HttpMethod, path: &str, endpoint_path: &str, ret: &str, origin: &str) -> CallSite {
    CallSite {
        target_hint: Some("ms-2".into()),
        url_path: path.into(),
        http_method: method,
        return_type: ret.into(),
        parameters: vec![],
        resolved_target: Some(ResolvedTarget {
            microservice: "ms-2".into(),
            http_method: method,
            endpoint_path: endpoint_path.into(),
        }),
        origin: origin.into(),
    }
}

/// The demonstrating example, fully resolved.
pub fn demonstrating_system() -> SystemModel {
    use HttpMethod::*;
    use Persistence::*;

    let mut ms1 = service(
        "ms-1",
        "demo.ms1",
        &[
            EntitySpec {
                name: "Customer",
                persistence: Relational,
                fields: &[
                    ("UUID", "id", false),
                    ("String", "name", false),
                    ("Address", "address", false),
                    ("Food", "favoriteFood", false),
                ],
            },
            EntitySpec {
                name: "Address",
                persistence: Relational,
                fields: &[("UUID", "id", false), ("String", "street", false), ("String", "city", false)],
            },
            EntitySpec {
                name: "Food",
                persistence: Relational,
                fields: &[("UUID", "id", false), ("String", "name", false), ("double", "price", false)],
            },
            EntitySpec {
                name: "FoodOrderDto",
                persistence: Transient,
                fields: &[("UUID", "orderId", false), ("Food", "food", false), ("int", "quantity", false)],
            },
        ],
    );
    let ctl1 = "src/main/java/demo/ms1/CustomerController.java";
    ms1.endpoints = vec![
        endpoint(Get, "/customers/{id}/orders", "List<FoodOrderDto>", &[("UUID", "id")], &format!("{ctl1}:12")),
        endpoint(Post, "/customers/{id}/orders", "FoodOrderDto", &[("UUID", "id")], &format!("{ctl1}:17")),
    ];
    ms1.calls = vec![call(Post, "/orders", "/orders", "FoodOrderDto", &format!("{ctl1}:19"))];

    let mut ms2 = service(
        "ms-2",
        "demo.ms2",
        &[
            EntitySpec {
                name: "Food",
                persistence: Relational,
                fields: &[
                    ("UUID", "id", false),
                    ("String", "name", false),
                    ("double", "price", false),
                    ("int", "stock", false),
                ],
            },
            EntitySpec {
                name: "Restaurant",
                persistence: Relational,
                fields: &[
                    ("UUID", "id", false),
                    ("String", "title", false),
                    ("Food", "menu", true),
                    ("Station", "station", false),
                ],
            },
            EntitySpec {
                name: "Station",
                persistence: Relational,
                fields: &[("UUID", "id", false), ("String", "name", false), ("int", "stayTime", false)],
            },
            EntitySpec {
                name: "Train",
                persistence: Relational,
                fields: &[
                    ("UUID", "id", false),
                    ("String", "type", false),
                    ("int", "capacity", false),
                    ("Station", "stops", true),
                ],
            },
            EntitySpec {
                name: "FoodOrder",
                persistence: Transient,
                fields: &[
                    ("UUID", "orderId", false),
                    ("Food", "food", false),
                    ("int", "quantity", false),
                    ("String", "note", false),
                ],
            },
            EntitySpec {
                name: "TripInfo",
                persistence: Transient,
                fields: &[("UUID", "tripId", false), ("Train", "train", false), ("Station", "departure", false)],
            },
        ],
    );
    let ctl2 = "src/main/java/demo/ms2/Ms2Controller.java";
    ms2.endpoints = vec![
        endpoint(Post, "/orders", "FoodOrder", &[], &format!("{ctl2}:9")),
        endpoint(Get, "/stations/{id}", "Station", &[("UUID", "id")], &format!("{ctl2}:14")),
        endpoint(Get, "/trains/{id}", "Train", &[("UUID", "id")], &format!("{ctl2}:19")),
        endpoint(Get, "/trips/{id}", "TripInfo", &[("UUID", "id")], &format!("{ctl2}:24")),
    ];

    let mut ms3 = service(
        "ms-3",
        "demo.ms3",
        &[
            EntitySpec {
                name: "Route",
                persistence: Relational,
                fields: &[("UUID", "id", false), ("int", "distance", false), ("Schedule", "schedule", false)],
            },
            EntitySpec {
                name: "Schedule",
                persistence: Relational,
                fields: &[("UUID", "id", false), ("Date", "departure", false)],
            },
            EntitySpec {
                name: "StationDto",
                persistence: Transient,
                fields: &[
                    ("UUID", "id", false),
                    ("String", "name", false),
                    ("int", "stayTime", false),
                    ("Route", "route", false),
                ],
            },
        ],
    );
    let ctl3 = "src/main/java/demo/ms3/RouteController.java";
    ms3.endpoints = vec![endpoint(
        Get,
        "/routes/{id}/stations",
        "List<StationDto>",
        &[("UUID", "id")],
        &format!("{ctl3}:14"),
    )];
    ms3.calls = vec![call(Get, "/stations/*", "/stations/{id}", "StationDto", &format!("{ctl3}:16"))];

    let mut ms4 = service(
        "ms-4",
        "demo.ms4",
        &[
            EntitySpec {
                name: "Train",
                persistence: Relational,
                fields: &[("UUID", "id", false), ("String", "type", false)],
            },
            EntitySpec {
                name: "Seat",
                persistence: Relational,
                fields: &[("UUID", "id", false), ("int", "number", false), ("Train", "train", false)],
            },
            EntitySpec {
                name: "Carriage",
                persistence: Relational,
                fields: &[("UUID", "id", false), ("int", "number", false), ("Seat", "seats", true)],
            },
            EntitySpec {
                name: "SeatRequest",
                persistence: Transient,
                fields: &[("Seat", "seat", false), ("Date", "date", false)],
            },
        ],
    );
    let ctl4 = "src/main/java/demo/ms4/SeatController.java";
    ms4.endpoints = vec![endpoint(Post, "/seats/reserve", "Seat", &[], &format!("{ctl4}:13"))];
    ms4.calls = vec![call(Get, "/trains/*", "/trains/{id}", "Train", &format!("{ctl4}:15"))];

    SystemModel {
        version_label: "demonstrating-example".into(),
        microservices: vec![ms1, ms2, ms3, ms4],
    }
    .canonicalized()
}
