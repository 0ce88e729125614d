use std::collections::{BTreeMap, BTreeSet};

use super::endpoints::EndpointDecl;
use super::sketch::{ClassSketch, TypeKind};
use crate::model::{DataEntity, Persistence, Relationship};
use crate::profile::LanguageProfile;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Classification {
    pub persistent: Vec<DataEntity>,
    pub transient: Vec<DataEntity>,
}

fn has_accessors(class: &ClassSketch) -> bool {
    class.kind == TypeKind::Record
        || class.methods.iter().any(|m| {
            ["get", "set", "is"].iter().any(|prefix| {
                m.name
                    .strip_prefix(prefix)
                    .is_some_and(|rest| rest.starts_with(|c: char| c.is_uppercase()))
            })
        })
}

/// Splits the sketches of one microservice into persistent and transient
/// entities.
///
/// A persistence marker makes a persistent entity. Otherwise a data class (by
/// marker or accessors) becomes transient when its simple name appears in an
/// endpoint's response type, or in its parameter types unless
/// `strict_response_only` is set.
pub fn classify_entities(
    owner: &str,
    sketches: &[ClassSketch],
    endpoints: &[EndpointDecl],
    profile: &LanguageProfile,
    strict_response_only: bool,
) -> Classification {
    let mut exchanged: BTreeSet<&str> = BTreeSet::new();
    for decl in endpoints {
        exchanged.extend(decl.response_types.iter().map(String::as_str));
        if !strict_response_only {
            exchanged.extend(decl.request_types.iter().map(String::as_str));
        }
    }

    let mut seen = BTreeSet::new();
    let mut out = Classification::default();
    for class in sketches {
        if !matches!(class.kind, TypeKind::Class | TypeKind::Record)
            || !seen.insert(class.qualified_name.as_str())
        {
            continue;
        }
        let persistence = class
            .annotations
            .iter()
            .find_map(|a| profile.persistence_of(&a.name));
        let entity = |p| DataEntity::new(owner, &class.qualified_name, p).with_fields(class.fields.iter().cloned());
        match persistence {
            Some(p) => out.persistent.push(entity(p)),
            None => {
                let data_class = class.has_any_annotation(&profile.data_class_markers) || has_accessors(class);
                if data_class && exchanged.contains(class.simple_name.as_str()) {
                    out.transient.push(entity(Persistence::Transient));
                }
            }
        }
    }
    out
}

/// Relationships between entities of one microservice: one per field whose
/// (element) type is the simple or qualified name of another entity in the
/// slice.
pub fn extract_relationships(entities: &[DataEntity]) -> Vec<Relationship> {
    let mut by_name: BTreeMap<&str, Vec<&DataEntity>> = BTreeMap::new();
    for e in entities {
        by_name.entry(e.simple_name.as_str()).or_default().push(e);
        by_name.entry(e.qualified_name.as_str()).or_default().push(e);
    }
    let mut out = BTreeSet::new();
    for source in entities {
        for field in &source.fields {
            // An ambiguous simple name (two same-named types in different
            // packages) links nowhere.
            if let Some([target]) = by_name.get(field.type_name.as_str()).map(Vec::as_slice) {
                out.insert(Relationship::new(source.id(), target.id(), &field.name));
            }
        }
    }
    out.into_iter().collect()
}

/// Stores each entity's outgoing relationships on it.
pub fn attach_relationships(classification: &mut Classification) {
    let all: Vec<DataEntity> = classification
        .persistent
        .iter()
        .chain(&classification.transient)
        .cloned()
        .collect();
    let rels = extract_relationships(&all);
    for e in classification
        .persistent
        .iter_mut()
        .chain(classification.transient.iter_mut())
    {
        let id = e.id();
        e.relationships = rels.iter().filter(|r| r.source == id).cloned().collect();
    }
}

#[cfg(test)]
mod tests {
    use std::path::PathBuf;

    use super::super::endpoints::extract_endpoints;
    use super::super::lexer::tokenize;
    use super::super::sketch::parse_compilation_unit;
    use super::*;
    use crate::model::{EntityId, Field};

    fn run(src: &str, strict: bool) -> Classification {
        let profile = LanguageProfile::spring_java();
        let toks = tokenize(src).unwrap();
        let sketches = parse_compilation_unit(&toks, PathBuf::from("A.java"), &|_: &str| false).unwrap();
        let endpoints = extract_endpoints(&sketches, &profile).unwrap();
        let mut c = classify_entities("ms", &sketches, &endpoints, &profile, strict);
        attach_relationships(&mut c);
        c
    }

    const SRC: &str = r#"package p;
        @Document class Doc { String id; }
        @Entity class Order { UUID id; List<OrderItem> items; }
        @Entity class OrderItem { int qty; Order order; }
        @Data class OrderView { String id; }
        @Data class Unused { String id; }
        class Plain { String x; public String getX() { return x; } }
        class Request { String q; }
        @RestController class C {
          @GetMapping("/v") ResponseEntity<List<OrderView>> v() { return null; }
          @PostMapping("/p") void p(@RequestBody Plain plain, @RequestBody Request r) {}
        }"#;

    #[test]
    fn persistence_flavors_and_transients() {
        let c = run(SRC, false);
        let persistent: Vec<(&str, Persistence)> = c
            .persistent
            .iter()
            .map(|e| (e.simple_name.as_str(), e.persistence))
            .collect();
        assert_eq!(
            persistent,
            [
                ("Doc", Persistence::NonRelational),
                ("Order", Persistence::Relational),
                ("OrderItem", Persistence::Relational),
            ]
        );
        let transient: Vec<&str> = c.transient.iter().map(|e| e.simple_name.as_str()).collect();
        assert_eq!(transient, ["OrderView", "Plain"]);
    }

    #[test]
    fn strict_response_only_drops_request_bodies() {
        let c = run(SRC, true);
        let transient: Vec<&str> = c.transient.iter().map(|e| e.simple_name.as_str()).collect();
        assert_eq!(transient, ["OrderView"]);
    }

    #[test]
    fn relationships_stay_inside_the_slice() {
        let c = run(SRC, false);
        let order = c.persistent.iter().find(|e| e.simple_name == "Order").unwrap();
        assert_eq!(
            order.relationships,
            vec![Relationship::new(
                EntityId::new("ms", "p.Order"),
                EntityId::new("ms", "p.OrderItem"),
                "items"
            )]
        );
        let doc = c.persistent.iter().find(|e| e.simple_name == "Doc").unwrap();
        assert!(doc.relationships.is_empty());
    }

    #[test]
    fn ambiguous_simple_names_do_not_link() {
        let a = DataEntity::new("ms", "x.A", Persistence::Relational).with_fields([Field::new("B", "b")]);
        let b1 = DataEntity::new("ms", "x.B", Persistence::Relational);
        let b2 = DataEntity::new("ms", "y.B", Persistence::Relational);
        assert!(extract_relationships(&[a.clone(), b1.clone(), b2]).is_empty());
        assert_eq!(extract_relationships(&[a, b1]).len(), 1);
    }
}
