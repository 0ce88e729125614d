//! Intermediate representation of a microservice system.
//!
//! A [`SystemModel`] holds the service view (endpoints and calls) and the data
//! view (persistent and transient entities with their fields and
//! relationships) of every microservice. Collections that are sets in the
//! domain are kept as sorted vectors; call [`SystemModel::canonicalize`] after
//! mutation so serialization stays deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::matcher::normalize_path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum HttpMethod {
    Get,
    Post,
    Put,
    Delete,
    Patch,
}

impl HttpMethod {
    pub const ALL: [HttpMethod; 5] = [
        HttpMethod::Get,
        HttpMethod::Post,
        HttpMethod::Put,
        HttpMethod::Delete,
        HttpMethod::Patch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HttpMethod::Get => "GET",
            HttpMethod::Post => "POST",
            HttpMethod::Put => "PUT",
            HttpMethod::Delete => "DELETE",
            HttpMethod::Patch => "PATCH",
        }
    }
}

impl fmt::Display for HttpMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown HTTP method `{0}`")]
pub struct UnknownMethod(pub String);

impl FromStr for HttpMethod {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HttpMethod::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

/// A typed, named parameter of an endpoint or call.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Parameter {
    pub type_name: String,
    pub name: String,
}

impl Parameter {
    pub fn new(type_name: impl Into<String>, name: impl Into<String>) -> Self {
        Parameter {
            type_name: type_name.into(),
            name: name.into(),
        }
    }
}

/// An entity attribute. For collection-typed fields `type_name` holds the
/// element type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Field {
    pub type_name: String,
    pub name: String,
    pub is_collection: bool,
}

impl Field {
    pub fn new(type_name: impl Into<String>, name: impl Into<String>) -> Self {
        Field {
            type_name: type_name.into(),
            name: name.into(),
            is_collection: false,
        }
    }

    pub fn collection(type_name: impl Into<String>, name: impl Into<String>) -> Self {
        Field {
            is_collection: true,
            ..Field::new(type_name, name)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Persistence {
    Relational,
    NonRelational,
    Transient,
}

impl Persistence {
    pub fn as_str(self) -> &'static str {
        match self {
            Persistence::Relational => "RELATIONAL",
            Persistence::NonRelational => "NON_RELATIONAL",
            Persistence::Transient => "TRANSIENT",
        }
    }

    pub fn is_persistent(self) -> bool {
        !matches!(self, Persistence::Transient)
    }
}

impl fmt::Display for Persistence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Persistence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "RELATIONAL" => Ok(Persistence::Relational),
            "NON_RELATIONAL" => Ok(Persistence::NonRelational),
            "TRANSIENT" => Ok(Persistence::Transient),
            other => Err(format!("unknown persistence `{other}`")),
        }
    }
}

/// Entity identity: the owning microservice plus the qualified type name.
///
/// Same-named entities in two microservices are distinct until merged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityId {
    pub owner: String,
    pub qualified_name: String,
}

impl EntityId {
    pub fn new(owner: impl Into<String>, qualified_name: impl Into<String>) -> Self {
        EntityId {
            owner: owner.into(),
            qualified_name: qualified_name.into(),
        }
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.owner, self.qualified_name)
    }
}

impl FromStr for EntityId {
    type Err = String;

    /// Parses the `owner/qualified_name` form produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('/') {
            Some((owner, qn)) if !owner.is_empty() && !qn.is_empty() => {
                Ok(EntityId::new(owner, qn))
            }
            _ => Err(format!("malformed entity reference `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relationship {
    pub source: EntityId,
    pub destination: EntityId,
    pub via_field: String,
}

impl Relationship {
    pub fn new(source: EntityId, destination: EntityId, via_field: impl Into<String>) -> Self {
        Relationship {
            source,
            destination,
            via_field: via_field.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataEntity {
    pub qualified_name: String,
    pub simple_name: String,
    pub fields: Vec<Field>,
    pub relationships: Vec<Relationship>,
    pub persistence: Persistence,
    pub owner: String,
}

impl DataEntity {
    pub fn new(
        owner: impl Into<String>,
        qualified_name: impl Into<String>,
        persistence: Persistence,
    ) -> Self {
        let qualified_name = qualified_name.into();
        let simple_name = simple_name_of(&qualified_name).to_string();
        DataEntity {
            qualified_name,
            simple_name,
            fields: Vec::new(),
            relationships: Vec::new(),
            persistence,
            owner: owner.into(),
        }
    }

    pub fn with_fields(mut self, fields: impl IntoIterator<Item = Field>) -> Self {
        self.fields.extend(fields);
        self
    }

    pub fn id(&self) -> EntityId {
        EntityId::new(self.owner.clone(), self.qualified_name.clone())
    }

    pub fn field(&self, name: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.name == name)
    }
}

/// Last `.`-separated segment of a qualified name.
pub fn simple_name_of(qualified_name: &str) -> &str {
    qualified_name.rsplit('.').next().unwrap_or(qualified_name)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoint {
    /// Path template as declared, e.g. `/api/v1/foods/{id}`.
    pub url_path: String,
    pub http_method: HttpMethod,
    pub return_type: String,
    pub parameters: Vec<Parameter>,
    /// `file:line` of the handler, relative to the microservice root.
    pub declaring_unit: String,
}

/// The endpoint a call was matched to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResolvedTarget {
    pub microservice: String,
    pub http_method: HttpMethod,
    pub endpoint_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallSite {
    pub target_hint: Option<String>,
    /// Normalized path template (see [`normalize_path`]).
    pub url_path: String,
    pub http_method: HttpMethod,
    pub return_type: String,
    pub parameters: Vec<Parameter>,
    pub resolved_target: Option<ResolvedTarget>,
    pub origin: String,
}

impl CallSite {
    pub fn is_resolved(&self) -> bool {
        self.resolved_target.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Microservice {
    pub name: String,
    pub endpoints: Vec<Endpoint>,
    pub calls: Vec<CallSite>,
    pub persistent_entities: Vec<DataEntity>,
    pub transient_entities: Vec<DataEntity>,
    pub source_root: PathBuf,
}

impl Microservice {
    pub fn new(name: impl Into<String>) -> Self {
        Microservice {
            name: name.into(),
            endpoints: Vec::new(),
            calls: Vec::new(),
            persistent_entities: Vec::new(),
            transient_entities: Vec::new(),
            source_root: PathBuf::new(),
        }
    }

    pub fn entities(&self) -> impl Iterator<Item = &DataEntity> {
        self.persistent_entities
            .iter()
            .chain(self.transient_entities.iter())
    }

    fn canonicalize(&mut self) {
        self.endpoints.sort_by(|a, b| {
            (&a.url_path, a.http_method, &a.declaring_unit).cmp(&(
                &b.url_path,
                b.http_method,
                &b.declaring_unit,
            ))
        });
        self.calls.sort_by(|a, b| {
            (&a.origin, a.http_method, &a.url_path).cmp(&(&b.origin, b.http_method, &b.url_path))
        });
        for entities in [&mut self.persistent_entities, &mut self.transient_entities] {
            entities.sort_by(|a, b| a.qualified_name.cmp(&b.qualified_name));
            for entity in entities.iter_mut() {
                entity.fields.sort_by(|a, b| a.name.cmp(&b.name));
                entity.relationships.sort();
                entity.relationships.dedup();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SystemModel {
    pub version_label: String,
    pub microservices: Vec<Microservice>,
}

impl SystemModel {
    pub fn new(version_label: impl Into<String>) -> Self {
        SystemModel {
            version_label: version_label.into(),
            microservices: Vec::new(),
        }
    }

    /// Sorts every set-valued collection by its natural key. Parameter lists
    /// keep their declared order.
    pub fn canonicalize(&mut self) {
        self.microservices.sort_by(|a, b| a.name.cmp(&b.name));
        for ms in &mut self.microservices {
            ms.canonicalize();
        }
    }

    pub fn canonicalized(mut self) -> Self {
        self.canonicalize();
        self
    }

    pub fn microservice(&self, name: &str) -> Option<&Microservice> {
        self.microservices.iter().find(|m| m.name == name)
    }

    pub fn entities(&self) -> impl Iterator<Item = &DataEntity> {
        self.microservices.iter().flat_map(|m| m.entities())
    }

    pub fn entity(&self, id: &EntityId) -> Option<&DataEntity> {
        self.microservice(&id.owner)?
            .entities()
            .find(|e| e.qualified_name == id.qualified_name)
    }

    pub fn relationships(&self) -> impl Iterator<Item = &Relationship> {
        self.entities().flat_map(|e| e.relationships.iter())
    }

    pub fn calls(&self) -> impl Iterator<Item = (&Microservice, &CallSite)> {
        self.microservices
            .iter()
            .flat_map(|m| m.calls.iter().map(move |c| (m, c)))
    }
}

/// One broken invariant found by [`validate_system`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub element: String,
    pub invariant: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.element, self.invariant)
    }
}

/// Checks every structural invariant of the model. An empty result means the
/// model is valid.
pub fn validate_system(model: &SystemModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |element: String, invariant: &str| {
        out.push(Violation {
            element,
            invariant: invariant.to_string(),
        })
    };

    let mut names: BTreeMap<&str, usize> = BTreeMap::new();
    for ms in &model.microservices {
        *names.entry(ms.name.as_str()).or_default() += 1;
    }
    for (name, count) in &names {
        if *count > 1 {
            push(
                format!("microservice `{name}`"),
                "microservice names must be unique",
            );
        }
    }

    let all_entities: BTreeSet<EntityId> = model.entities().map(DataEntity::id).collect();

    for ms in &model.microservices {
        let mut endpoint_keys = BTreeSet::new();
        for ep in &ms.endpoints {
            let element = format!("endpoint {} {} in `{}`", ep.http_method, ep.url_path, ms.name);
            if !ep.url_path.starts_with('/') {
                push(element.clone(), "endpoint path must begin with `/`");
            }
            if !endpoint_keys.insert((ep.http_method, normalize_path(&ep.url_path))) {
                push(element.clone(), "endpoint (method, path) must be unique");
            }
            if ep.parameters.iter().any(|p| p.name.is_empty()) {
                push(element, "parameter names must be non-empty");
            }
        }

        for call in &ms.calls {
            let element = format!("call at {} in `{}`", call.origin, ms.name);
            if call.parameters.iter().any(|p| p.name.is_empty()) {
                push(element.clone(), "parameter names must be non-empty");
            }
            if let Some(target) = &call.resolved_target {
                if target.microservice == ms.name {
                    push(element.clone(), "call must not resolve to its own microservice");
                }
                match model.microservice(&target.microservice) {
                    None => push(element, "resolved target must name a known microservice"),
                    Some(t) => {
                        let exists = t.endpoints.iter().any(|e| {
                            e.http_method == target.http_method
                                && e.url_path == target.endpoint_path
                        });
                        if !exists {
                            push(element, "resolved target must name a declared endpoint");
                        }
                    }
                }
            }
        }

        let mut seen = BTreeSet::new();
        for (entity, expect_persistent) in ms
            .persistent_entities
            .iter()
            .map(|e| (e, true))
            .chain(ms.transient_entities.iter().map(|e| (e, false)))
        {
            let element = format!("entity `{}`", entity.id());
            if !seen.insert(entity.qualified_name.as_str()) {
                push(
                    element.clone(),
                    "entity must appear exactly once among persistent and transient entities",
                );
            }
            if entity.persistence.is_persistent() != expect_persistent {
                push(element.clone(), "persistence flavor must match its entity set");
            }
            if entity.owner != ms.name {
                push(element.clone(), "entity owner must be its microservice");
            }
            if simple_name_of(&entity.qualified_name) != entity.simple_name {
                push(
                    element.clone(),
                    "simple name must be the last segment of the qualified name",
                );
            }
            let mut field_names = BTreeSet::new();
            for field in &entity.fields {
                if field.name.is_empty() {
                    push(element.clone(), "field names must be non-empty");
                } else if !field_names.insert(field.name.as_str()) {
                    push(
                        format!("{element} field `{}`", field.name),
                        "field names must be unique within an entity",
                    );
                }
            }
            for rel in &entity.relationships {
                let rel_element = format!("relationship {} -> {}", rel.source, rel.destination);
                if rel.source != entity.id() {
                    push(rel_element.clone(), "relationship source must be its owning entity");
                }
                if !all_entities.contains(&rel.destination) {
                    push(rel_element.clone(), "relationship destination must exist");
                }
                if entity.field(&rel.via_field).is_none() {
                    push(rel_element, "relationship source must own the via field");
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_model_is_valid() {
        assert!(validate_system(&SystemModel::new("v")).is_empty());
    }

    #[test]
    fn duplicate_microservice_name_reported_once() {
        let mut model = SystemModel::new("v");
        model.microservices.push(Microservice::new("ms-a"));
        model.microservices.push(Microservice::new("ms-a"));
        let violations = validate_system(&model);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].element.contains("ms-a"));
    }

    #[test]
    fn demonstrating_example_is_valid() {
        let model = crate::sample::demonstrating_system();
        assert_eq!(validate_system(&model), vec![]);
    }

    #[test]
    fn entity_in_both_sets_is_reported() {
        let mut ms = Microservice::new("a");
        ms.persistent_entities
            .push(DataEntity::new("a", "x.Food", Persistence::Relational));
        ms.transient_entities
            .push(DataEntity::new("a", "x.Food", Persistence::Transient));
        let mut model = SystemModel::new("v");
        model.microservices.push(ms);
        let violations = validate_system(&model);
        assert!(violations
            .iter()
            .any(|v| v.invariant.contains("exactly once")));
    }

    #[test]
    fn self_resolved_call_and_dangling_relationship_are_reported() {
        let mut ms = Microservice::new("a");
        ms.endpoints.push(Endpoint {
            url_path: "/x".into(),
            http_method: HttpMethod::Get,
            return_type: "void".into(),
            parameters: vec![],
            declaring_unit: "A.java:1".into(),
        });
        ms.calls.push(CallSite {
            target_hint: None,
            url_path: "/x".into(),
            http_method: HttpMethod::Get,
            return_type: "void".into(),
            parameters: vec![],
            resolved_target: Some(ResolvedTarget {
                microservice: "a".into(),
                http_method: HttpMethod::Get,
                endpoint_path: "/x".into(),
            }),
            origin: "A.java:3".into(),
        });
        let mut e = DataEntity::new("a", "x.Order", Persistence::Relational)
            .with_fields([Field::new("Line", "line")]);
        e.relationships.push(Relationship::new(
            e.id(),
            EntityId::new("a", "x.Line"),
            "line",
        ));
        ms.persistent_entities.push(e);
        let mut model = SystemModel::new("v");
        model.microservices.push(ms);
        let v = validate_system(&model);
        assert!(v.iter().any(|v| v.invariant.contains("own microservice")));
        assert!(v.iter().any(|v| v.invariant.contains("destination must exist")));
    }

    #[test]
    fn conflicting_endpoints_after_normalization() {
        let mut ms = Microservice::new("a");
        for path in ["/foods/{id}", "/Foods/{key}/"] {
            ms.endpoints.push(Endpoint {
                url_path: path.into(),
                http_method: HttpMethod::Get,
                return_type: "Food".into(),
                parameters: vec![],
                declaring_unit: "F.java:1".into(),
            });
        }
        let mut model = SystemModel::new("v");
        model.microservices.push(ms);
        assert_eq!(validate_system(&model).len(), 1);
    }

    #[test]
    fn method_and_entity_id_parse() {
        assert_eq!("patch".parse::<HttpMethod>().unwrap(), HttpMethod::Patch);
        assert!("TRACE".parse::<HttpMethod>().is_err());
        let id: EntityId = "ms-1/demo.Food".parse().unwrap();
        assert_eq!(id, EntityId::new("ms-1", "demo.Food"));
        assert_eq!(id.to_string(), "ms-1/demo.Food");
    }
}
