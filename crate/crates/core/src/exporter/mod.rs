//! Artifact serialization: the IR document, the service graph, Mermaid class
//! diagrams and the metrics timeline.

mod ir;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

pub use ir::{export_ir, import_ir, ir_projection, key_sets, SCHEMA_VERSION};

use crate::merger::ContextMap;
use crate::metrics::{EvolutionTimeline, METRIC_KEYS};
use crate::model::{DataEntity, Field, Relationship, SystemModel};

pub const IR_FILE: &str = "ir.json";
pub const GRAPH_FILE: &str = "graph.json";
pub const CONTEXT_MAP_FILE: &str = "context-map.mmd";
pub const TIMELINE_FILE: &str = "timeline.csv";
pub const MERGE_AUDIT_FILE: &str = "merge-audit.txt";
pub const SERVICES_DIR: &str = "services";

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("cannot write {path}: {source}")]
    WriteFailure {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Malformed(String),
}

/// Two-space indented JSON with sorted keys and a trailing newline.
pub fn to_pretty_json(value: &Value) -> String {
    // serde_json's default map is ordered by key.
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// Service graph for the viewer. With a threshold, every node carries
/// `coupling_alert` (more distinct dependencies than the threshold).
pub fn export_graph(system: &SystemModel, coupling_threshold: Option<usize>) -> String {
    let mut links: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (ms, call) in system.calls() {
        if let Some(t) = &call.resolved_target {
            *links.entry((ms.name.as_str(), t.microservice.as_str())).or_default() += 1;
        }
    }
    let mut outgoing: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut incoming: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (src, dst) in links.keys() {
        outgoing.entry(src).or_default().insert(dst);
        incoming.entry(dst).or_default().insert(src);
    }
    let mut names: Vec<&str> = system.microservices.iter().map(|m| m.name.as_str()).collect();
    names.sort_unstable();
    let nodes: Vec<Value> = names
        .iter()
        .map(|name| {
            let deps = outgoing.get(name).map_or(0, BTreeSet::len);
            let mut node = json!({
                "id": name,
                "name": name,
                "dependency_count": deps,
                "dependents_count": incoming.get(name).map_or(0, BTreeSet::len),
            });
            if let Some(n) = coupling_threshold {
                node["coupling_alert"] = json!(deps > n);
            }
            node
        })
        .collect();
    let links: Vec<Value> = links
        .iter()
        .map(|((s, t), n)| json!({ "source": s, "target": t, "call_count": n }))
        .collect();
    let mut doc = json!({ "nodes": nodes, "links": links });
    if let Some(n) = coupling_threshold {
        doc["coupling_threshold"] = json!(n);
    }
    to_pretty_json(&doc)
}

fn mermaid_ident(text: &str) -> String {
    text.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

fn mermaid_field(f: &Field) -> String {
    let ty = f.type_name.replace(['<', '>'], "~").replace(' ', "");
    if f.is_collection {
        format!("{ty}[] {}", f.name)
    } else {
        format!("{ty} {}", f.name)
    }
}

/// Class names for a set of entities: the simple name, prefixed by the
/// owner when two entities share it.
fn class_names(entities: &[&DataEntity]) -> BTreeMap<(String, String), String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for e in entities {
        *counts.entry(e.simple_name.as_str()).or_default() += 1;
    }
    entities
        .iter()
        .map(|e| {
            let name = if counts[e.simple_name.as_str()] > 1 {
                format!("{}_{}", mermaid_ident(&e.owner), mermaid_ident(&e.simple_name))
            } else {
                mermaid_ident(&e.simple_name)
            };
            ((e.owner.clone(), e.qualified_name.clone()), name)
        })
        .collect()
}

fn class_diagram(entities: &[&DataEntity], relationships: &[Relationship]) -> String {
    let names = class_names(entities);
    let mut blocks: Vec<(String, &DataEntity)> = entities
        .iter()
        .map(|e| (names[&(e.owner.clone(), e.qualified_name.clone())].clone(), *e))
        .collect();
    blocks.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = String::from("classDiagram\n");
    for (name, entity) in &blocks {
        out.push_str(&format!("class {name} {{\n"));
        let mut fields: Vec<&Field> = entity.fields.iter().collect();
        fields.sort_by(|a, b| a.name.cmp(&b.name));
        for f in fields {
            out.push_str(&format!("  {}\n", mermaid_field(f)));
        }
        out.push_str("}\n");
    }
    let mut lines: Vec<String> = relationships
        .iter()
        .filter_map(|r| {
            let src = names.get(&(r.source.owner.clone(), r.source.qualified_name.clone()))?;
            let dst = names.get(&(r.destination.owner.clone(), r.destination.qualified_name.clone()))?;
            Some(format!("{src} --> {dst} : {}\n", r.via_field))
        })
        .collect();
    lines.sort();
    lines.dedup();
    out.extend(lines);
    out
}

/// Post-merge class diagram of the whole system.
pub fn export_context_map_mermaid(map: &ContextMap) -> String {
    let entities: Vec<&DataEntity> = map.entities.iter().map(|e| &e.entity).collect();
    class_diagram(&entities, &map.relationships)
}

/// Pre-merge class diagram of one microservice's entities.
pub fn export_service_mermaid(system: &SystemModel, microservice: &str) -> Option<String> {
    let ms = system.microservice(microservice)?;
    let rels: Vec<Relationship> = ms.entities().flat_map(|e| e.relationships.iter().cloned()).collect();
    let entities: Vec<&DataEntity> = ms.entities().collect();
    Some(class_diagram(&entities, &rels))
}

pub fn export_timeline_csv(timeline: &EvolutionTimeline) -> String {
    let mut out = format!("version,{}\n", METRIC_KEYS.join(","));
    for r in timeline.reports() {
        let values: Vec<String> = r.values().iter().map(usize::to_string).collect();
        out.push_str(&format!("{},{}\n", csv_field(&r.version_label), values.join(",")));
    }
    out
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<(), ExportError> {
    let fail = |source| ExportError::WriteFailure {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(fail)?;
    }
    fs::write(path, text).map_err(fail)
}
