//! Synthetic inputs for the benchmarks.

use archlens_core::{
    CallSite, DataEntity, Endpoint, Field, HttpMethod, Microservice, Parameter, Persistence, Relationship,
    SystemModel,
};

const CONCEPTS: [&str; 12] = [
    "Order", "Payment", "Food", "Train", "Station", "Route", "Seat", "Ticket", "User", "Contact", "Price",
    "Config",
];
const SUFFIXES: [&str; 3] = ["", "Dto", "Info"];

/// `services` microservices, each with `entities` entities drawn from a
/// small shared vocabulary (so merges happen), one endpoint per entity and
/// one call to the next service.
pub fn synthetic_system(services: usize, entities: usize) -> SystemModel {
    let mut system = SystemModel::new("synthetic");
    for s in 0..services {
        let name = format!("svc-{s:03}");
        let mut ms = Microservice::new(name.clone());
        for e in 0..entities {
            let concept = CONCEPTS[(s + e) % CONCEPTS.len()];
            let suffix = SUFFIXES[(s * 7 + e) % SUFFIXES.len()];
            let persistence = if e % 3 == 0 { Persistence::Transient } else { Persistence::NonRelational };
            let fields = [
                Field::new("String", "id"),
                Field::new("String", "name"),
                Field::new("double", format!("f{}", e % 4)),
            ];
            let entity = DataEntity::new(name.clone(), format!("syn.s{s}.{concept}{suffix}"), persistence)
                .with_fields(fields);
            ms.endpoints.push(Endpoint {
                url_path: format!("/api/{}/{{id}}", concept.to_lowercase()),
                http_method: HttpMethod::Get,
                return_type: entity.simple_name.clone(),
                parameters: vec![Parameter::new("String", "id")],
                declaring_unit: format!("Gen{s}.java:{e}"),
            });
            if persistence.is_persistent() {
                ms.persistent_entities.push(entity);
            } else {
                ms.transient_entities.push(entity);
            }
        }
        let ids: Vec<_> = ms.entities().map(|e| (e.id(), e.simple_name.clone())).collect();
        for (i, pair) in ids.windows(2).enumerate() {
            let ((src, _), (dst, dst_name)) = (&pair[0], &pair[1]);
            let via = format!("next{i}");
            let owner = ms
                .persistent_entities
                .iter_mut()
                .chain(ms.transient_entities.iter_mut())
                .find(|e| e.id() == *src)
                .expect("entity exists");
            owner.fields.push(Field::new(dst_name.clone(), via.clone()));
            owner.relationships.push(Relationship::new(src.clone(), dst.clone(), via));
        }
        let target = format!("svc-{:03}", (s + 1) % services.max(1));
        ms.calls.push(CallSite {
            target_hint: Some(target.clone()),
            url_path: format!("http://{target}/api/{}/{{*}}", CONCEPTS[(s + 1) % CONCEPTS.len()].to_lowercase()),
            http_method: HttpMethod::Get,
            return_type: "Object".into(),
            parameters: vec![Parameter::new("Object", "id")],
            resolved_target: None,
            origin: format!("Gen{s}.java:0"),
        });
        system.microservices.push(ms);
    }
    system.canonicalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use archlens_core::model::validate_system;

    #[test]
    fn synthetic_is_valid() {
        let s = synthetic_system(5, 6);
        assert_eq!(s.microservices.len(), 5);
        assert_eq!(s.entities().count(), 30);
        assert!(validate_system(&s).is_empty(), "{:?}", validate_system(&s));
    }
}
