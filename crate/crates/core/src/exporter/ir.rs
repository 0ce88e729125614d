use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{to_pretty_json, ExportError};
use crate::merger::{build_context_map, build_resolution, MergeResolution};
use crate::model::{
    CallSite, DataEntity, Endpoint, EntityId, Field, HttpMethod, Microservice, Parameter,
    Persistence, Relationship, ResolvedTarget, SystemModel,
};

pub const SCHEMA_VERSION: &str = "1";

fn parameter_json(p: &Parameter) -> Value {
    json!({ "name": p.name, "type": p.type_name })
}

fn field_json(f: &Field) -> Value {
    json!({ "name": f.name, "type": f.type_name, "is_collection": f.is_collection })
}

fn relationship_json(r: &Relationship) -> Value {
    json!({
        "source": r.source.to_string(),
        "destination": r.destination.to_string(),
        "via_field": r.via_field,
    })
}

fn entity_json(e: &DataEntity) -> Value {
    json!({
        "name": e.simple_name,
        "qualified_name": e.qualified_name,
        "persistence": e.persistence.as_str(),
        "fields": e.fields.iter().map(field_json).collect::<Vec<_>>(),
        "relationships": e.relationships.iter().map(relationship_json).collect::<Vec<_>>(),
    })
}

fn endpoint_json(e: &Endpoint) -> Value {
    json!({
        "method": e.http_method.as_str(),
        "path": e.url_path,
        "return_type": e.return_type,
        "parameters": e.parameters.iter().map(parameter_json).collect::<Vec<_>>(),
    })
}

fn call_json(c: &CallSite) -> Value {
    let target = c.resolved_target.as_ref();
    json!({
        "method": c.http_method.as_str(),
        "path": c.url_path,
        "target": target.map(|t| t.microservice.clone()),
        "endpoint_path": target.map(|t| t.endpoint_path.clone()),
        "origin": c.origin,
    })
}

/// The IR document of a resolved system and its merge resolution.
pub fn export_ir(system: &SystemModel, resolution: &MergeResolution) -> String {
    let system = system.clone().canonicalized();
    let microservices: Vec<Value> = system
        .microservices
        .iter()
        .map(|ms| {
            json!({
                "name": ms.name,
                "endpoints": ms.endpoints.iter().map(endpoint_json).collect::<Vec<_>>(),
                "calls": ms.calls.iter().map(call_json).collect::<Vec<_>>(),
                "persistent_entities": ms.persistent_entities.iter().map(entity_json).collect::<Vec<_>>(),
                "transient_entities": ms.transient_entities.iter().map(entity_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let map = build_context_map(&system, resolution);
    let context_map = json!({
        "entities": map.entities.iter().map(|ce| {
            let mut v = entity_json(&ce.entity);
            let obj = v.as_object_mut().expect("entities are objects");
            obj.insert("owner".into(), json!(ce.entity.owner));
            obj.insert(
                "provenance".into(),
                json!(ce.provenance.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
            );
            v
        }).collect::<Vec<_>>(),
        "relationships": map.relationships.iter().map(relationship_json).collect::<Vec<_>>(),
    });
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "version_label": system.version_label,
        "microservices": microservices,
        "context_map": context_map,
        "merge_audit": resolution.audit_lines(),
    });
    to_pretty_json(&doc)
}

struct Reader {
    path: Vec<String>,
}

impl Reader {
    fn new() -> Self {
        Reader {
            path: vec!["$".into()],
        }
    }

    fn err(&self, message: &str) -> ExportError {
        ExportError::Malformed(format!("{}: {message}", self.path.join(".")))
    }

    fn object<'v>(&self, v: &'v Value) -> Result<&'v Map<String, Value>, ExportError> {
        v.as_object().ok_or_else(|| self.err("expected an object"))
    }

    fn get<'v>(&self, obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value, ExportError> {
        obj.get(key).ok_or_else(|| self.err(&format!("missing key `{key}`")))
    }

    fn text(&self, obj: &Map<String, Value>, key: &str) -> Result<String, ExportError> {
        self.get(obj, key)?
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| self.err(&format!("`{key}` is not a string")))
    }

    fn opt_text(&self, obj: &Map<String, Value>, key: &str) -> Result<Option<String>, ExportError> {
        match self.get(obj, key)? {
            Value::Null => Ok(None),
            Value::String(s) => Ok(Some(s.clone())),
            _ => Err(self.err(&format!("`{key}` is neither a string nor null"))),
        }
    }

    fn array<'v>(&self, obj: &'v Map<String, Value>, key: &str) -> Result<&'v Vec<Value>, ExportError> {
        self.get(obj, key)?
            .as_array()
            .ok_or_else(|| self.err(&format!("`{key}` is not an array")))
    }

    fn method(&self, obj: &Map<String, Value>) -> Result<HttpMethod, ExportError> {
        self.text(obj, "method")?
            .parse()
            .map_err(|e: crate::model::UnknownMethod| self.err(&e.to_string()))
    }

    fn entity_id(&self, text: &str) -> Result<EntityId, ExportError> {
        text.parse().map_err(|e: String| self.err(&e))
    }

    fn within<T>(&mut self, seg: String, f: impl FnOnce(&mut Self) -> Result<T, ExportError>) -> Result<T, ExportError> {
        self.path.push(seg);
        let out = f(self);
        self.path.pop();
        out
    }

    fn entity(&mut self, owner: &str, v: &Value) -> Result<DataEntity, ExportError> {
        let obj = self.object(v)?;
        let persistence: Persistence = self
            .text(obj, "persistence")?
            .parse()
            .map_err(|e: String| self.err(&e))?;
        let mut entity = DataEntity::new(owner, self.text(obj, "qualified_name")?, persistence);
        entity.simple_name = self.text(obj, "name")?;
        for (i, f) in self.array(obj, "fields")?.iter().enumerate() {
            let field = self.within(format!("fields[{i}]"), |r| {
                let o = r.object(f)?;
                Ok(Field {
                    name: r.text(o, "name")?,
                    type_name: r.text(o, "type")?,
                    is_collection: r
                        .get(o, "is_collection")?
                        .as_bool()
                        .ok_or_else(|| r.err("`is_collection` is not a boolean"))?,
                })
            })?;
            entity.fields.push(field);
        }
        for (i, rv) in self.array(obj, "relationships")?.iter().enumerate() {
            let rel = self.within(format!("relationships[{i}]"), |r| {
                let o = r.object(rv)?;
                Ok(Relationship::new(
                    r.entity_id(&r.text(o, "source")?)?,
                    r.entity_id(&r.text(o, "destination")?)?,
                    r.text(o, "via_field")?,
                ))
            })?;
            entity.relationships.push(rel);
        }
        Ok(entity)
    }

    fn microservice(&mut self, v: &Value) -> Result<Microservice, ExportError> {
        let obj = self.object(v)?;
        let mut ms = Microservice::new(self.text(obj, "name")?);
        for (i, ev) in self.array(obj, "endpoints")?.iter().enumerate() {
            let ep = self.within(format!("endpoints[{i}]"), |r| {
                let o = r.object(ev)?;
                let mut parameters = Vec::new();
                for pv in r.array(o, "parameters")? {
                    let p = r.object(pv)?;
                    parameters.push(Parameter::new(r.text(p, "type")?, r.text(p, "name")?));
                }
                Ok(Endpoint {
                    url_path: r.text(o, "path")?,
                    http_method: r.method(o)?,
                    return_type: r.text(o, "return_type")?,
                    parameters,
                    declaring_unit: String::new(),
                })
            })?;
            ms.endpoints.push(ep);
        }
        for (i, cv) in self.array(obj, "calls")?.iter().enumerate() {
            let call = self.within(format!("calls[{i}]"), |r| {
                let o = r.object(cv)?;
                let method = r.method(o)?;
                let resolved_target = match (r.opt_text(o, "target")?, r.opt_text(o, "endpoint_path")?) {
                    (Some(microservice), Some(endpoint_path)) => Some(ResolvedTarget {
                        microservice,
                        http_method: method,
                        endpoint_path,
                    }),
                    (None, None) => None,
                    _ => return Err(r.err("`target` and `endpoint_path` must both be set or both be null")),
                };
                Ok(CallSite {
                    target_hint: None,
                    url_path: r.text(o, "path")?,
                    http_method: method,
                    return_type: String::new(),
                    parameters: Vec::new(),
                    resolved_target,
                    origin: r.text(o, "origin")?,
                })
            })?;
            ms.calls.push(call);
        }
        let name = ms.name.clone();
        for key in ["persistent_entities", "transient_entities"] {
            for (i, ev) in self.array(obj, key)?.iter().enumerate() {
                let e = self.within(format!("{key}[{i}]"), |r| r.entity(&name, ev))?;
                if key == "persistent_entities" {
                    ms.persistent_entities.push(e);
                } else {
                    ms.transient_entities.push(e);
                }
            }
        }
        Ok(ms)
    }
}

/// Reads an IR document back. Fields the document does not carry (source
/// locations of endpoints, call hints, return types and parameters) come
/// back empty; the merge resolution is rebuilt from the audit.
pub fn import_ir(text: &str) -> Result<(SystemModel, MergeResolution), ExportError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ExportError::Malformed(e.to_string()))?;
    let mut r = Reader::new();
    let top = r.object(&doc)?;
    let version = r.text(top, "schema_version")?;
    if version != SCHEMA_VERSION {
        return Err(r.err(&format!("unsupported schema_version `{version}`")));
    }
    let mut system = SystemModel::new(r.text(top, "version_label")?);
    for (i, mv) in r.array(top, "microservices")?.iter().enumerate() {
        let ms = r.within(format!("microservices[{i}]"), |r| r.microservice(mv))?;
        system.microservices.push(ms);
    }
    r.object(r.get(top, "context_map")?)?;
    let mut pairs = Vec::new();
    for line in r.array(top, "merge_audit")? {
        let line = line.as_str().ok_or_else(|| r.err("merge_audit entries must be strings"))?;
        let (rep, member) = line
            .split_once(" <= ")
            .ok_or_else(|| r.err(&format!("malformed audit line `{line}`")))?;
        pairs.push((r.entity_id(rep)?, r.entity_id(member)?));
    }
    system.canonicalize();
    let resolution = build_resolution(&system, pairs.iter().map(|(a, b)| (a, b)));
    Ok((system, resolution))
}

/// The part of a model the IR document carries, for round-trip comparison.
pub fn ir_projection(system: &SystemModel) -> SystemModel {
    let mut out = system.clone();
    for ms in &mut out.microservices {
        ms.source_root = Default::default();
        for e in &mut ms.endpoints {
            e.declaring_unit.clear();
        }
        for c in &mut ms.calls {
            c.target_hint = None;
            c.return_type.clear();
            c.parameters.clear();
        }
    }
    out.canonicalized()
}

/// Key set of every object in a document, by JSON path with array indexes
/// erased. Used to check the schema.
pub fn key_sets(doc: &Value) -> BTreeMap<String, Vec<String>> {
    fn walk(v: &Value, path: String, out: &mut BTreeMap<String, Vec<String>>) {
        match v {
            Value::Object(m) => {
                out.entry(path.clone())
                    .or_insert_with(|| m.keys().cloned().collect());
                for (k, child) in m {
                    walk(child, format!("{path}.{k}"), out);
                }
            }
            Value::Array(items) => {
                for item in items {
                    walk(item, format!("{path}[]"), out);
                }
            }
            _ => {}
        }
    }
    let mut out = BTreeMap::new();
    walk(doc, "$".into(), &mut out);
    out
}
