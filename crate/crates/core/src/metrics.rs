//! The seven system metrics and their evolution across versions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::merger::MergeResolution;
use crate::model::{EntityId, Persistence, Relationship, SystemModel};

pub const METRIC_KEYS: [&str; 7] = ["s1", "s2", "d1", "d2", "d3", "d4", "d5"];

pub const METRIC_LABELS: [&str; 7] = [
    "S1. #μs",
    "S2. #Cμs",
    "D1. #PDEs",
    "D2. #TDEs",
    "D3. #RDEs",
    "D4. #MDEs",
    "D5. #MRDEs",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Supplemental {
    pub relational: usize,
    pub non_relational: usize,
    pub unmatched_calls: usize,
    /// Entities in the context map, |DE|.
    pub context_map_size: usize,
    /// Relationships in the context map under the undirected de-dup, |RDE|.
    pub context_map_relationships: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub version_label: String,
    pub s1_microservices: usize,
    pub s2_connections: usize,
    pub d1_persistent: usize,
    pub d2_transient: usize,
    pub d3_relationships: usize,
    pub d4_merge_entities: usize,
    pub d5_merge_relationships: usize,
    pub supplemental: Supplemental,
}

impl MetricsReport {
    /// `(s1, s2, d1, d2, d3, d4, d5)`
    pub fn values(&self) -> [usize; 7] {
        [
            self.s1_microservices,
            self.s2_connections,
            self.d1_persistent,
            self.d2_transient,
            self.d3_relationships,
            self.d4_merge_entities,
            self.d5_merge_relationships,
        ]
    }

    /// Broken report invariants, if any.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let s = &self.supplemental;
        if self.d4_merge_entities > self.d1_persistent + self.d2_transient {
            out.push("d4 exceeds d1 + d2".to_string());
        }
        if self.d5_merge_relationships > self.d3_relationships {
            out.push("d5 exceeds d3".to_string());
        }
        if s.relational + s.non_relational != self.d1_persistent {
            out.push("relational + non-relational differs from d1".to_string());
        }
        if merged_entity_count(self.d1_persistent, self.d2_transient, self.d4_merge_entities) != Some(s.context_map_size) {
            out.push("d1 + d2 - d4 differs from the context map size".to_string());
        }
        if merged_relationship_count(self.d3_relationships, self.d5_merge_relationships)
            != Some(s.context_map_relationships)
        {
            out.push("d3 - d5 differs from the merged relationship count".to_string());
        }
        out
    }
}

/// |DE| = d1 + d2 − d4.
pub fn merged_entity_count(d1: usize, d2: usize, d4: usize) -> Option<usize> {
    (d1 + d2).checked_sub(d4)
}

/// |RDE| = d3 − d5.
pub fn merged_relationship_count(d3: usize, d5: usize) -> Option<usize> {
    d3.checked_sub(d5)
}

pub fn metric_s1(system: &SystemModel) -> usize {
    system.microservices.len()
}

/// Resolved call sites; several sites calling one endpoint count separately.
pub fn metric_s2(system: &SystemModel) -> usize {
    system.calls().filter(|(_, c)| c.is_resolved()).count()
}

pub fn metric_d1(system: &SystemModel) -> usize {
    system.microservices.iter().map(|m| m.persistent_entities.len()).sum()
}

pub fn metric_d2(system: &SystemModel) -> usize {
    system.microservices.iter().map(|m| m.transient_entities.len()).sum()
}

/// MR: every relationship's `(source, destination)` together with its
/// reverse.
pub fn mirrored_relationships<'a, I>(rels: I) -> BTreeSet<(EntityId, EntityId)>
where
    I: IntoIterator<Item = &'a Relationship>,
{
    let mut mr = BTreeSet::new();
    for r in rels {
        mr.insert((r.source.clone(), r.destination.clone()));
        mr.insert((r.destination.clone(), r.source.clone()));
    }
    mr
}

/// |MR| / 2. A self-relationship is its own reverse, so it is counted once
/// by adding it back before halving.
pub fn undirected_count<'a, I>(rels: I) -> usize
where
    I: IntoIterator<Item = &'a Relationship>,
{
    let mr = mirrored_relationships(rels);
    let loops = mr.iter().filter(|(a, b)| a == b).count();
    (mr.len() + loops) / 2
}

pub fn metric_d3(system: &SystemModel) -> usize {
    undirected_count(system.relationships())
}

pub fn metric_d4(system: &SystemModel, resolution: &MergeResolution) -> usize {
    let total = system.entities().count();
    total - resolution.merged_entities().len().min(total)
}

pub fn metric_d5(system: &SystemModel, resolution: &MergeResolution) -> usize {
    metric_d3(system) - undirected_count(resolution.merged_relationships()).min(metric_d3(system))
}

pub fn compute_report(system: &SystemModel, resolution: &MergeResolution) -> MetricsReport {
    let (relational, non_relational) = system
        .microservices
        .iter()
        .flat_map(|m| &m.persistent_entities)
        .fold((0, 0), |(r, n), e| match e.persistence {
            Persistence::Relational => (r + 1, n),
            Persistence::NonRelational => (r, n + 1),
            Persistence::Transient => (r, n),
        });
    MetricsReport {
        version_label: system.version_label.clone(),
        s1_microservices: metric_s1(system),
        s2_connections: metric_s2(system),
        d1_persistent: metric_d1(system),
        d2_transient: metric_d2(system),
        d3_relationships: metric_d3(system),
        d4_merge_entities: metric_d4(system, resolution),
        d5_merge_relationships: metric_d5(system, resolution),
        supplemental: Supplemental {
            relational,
            non_relational,
            unmatched_calls: system.calls().filter(|(_, c)| !c.is_resolved()).count(),
            context_map_size: resolution.merged_entities().len(),
            context_map_relationships: undirected_count(resolution.merged_relationships()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TimelineError {
    #[error("a timeline needs at least one report")]
    Empty,
    #[error("version label `{0}` appears more than once")]
    DuplicateVersionLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsDelta {
    pub from: String,
    pub to: String,
    /// Signed differences in `(s1, s2, d1, d2, d3, d4, d5)` order.
    pub values: [i64; 7],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutionTimeline {
    reports: Vec<MetricsReport>,
}

impl EvolutionTimeline {
    pub fn reports(&self) -> &[MetricsReport] {
        &self.reports
    }

    /// Differences between consecutive versions.
    pub fn deltas(&self) -> Vec<MetricsDelta> {
        self.reports
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].values(), w[1].values());
                MetricsDelta {
                    from: w[0].version_label.clone(),
                    to: w[1].version_label.clone(),
                    values: std::array::from_fn(|i| b[i] as i64 - a[i] as i64),
                }
            })
            .collect()
    }
}

pub fn build_timeline(reports: Vec<MetricsReport>) -> Result<EvolutionTimeline, TimelineError> {
    if reports.is_empty() {
        return Err(TimelineError::Empty);
    }
    let mut seen = BTreeSet::new();
    for r in &reports {
        if !seen.insert(r.version_label.as_str()) {
            return Err(TimelineError::DuplicateVersionLabel(r.version_label.clone()));
        }
    }
    Ok(EvolutionTimeline { reports })
}

fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = header.iter().map(|h| width(h)).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(width(cell));
        }
    }
    let line = |cells: &[String]| {
        let mut out = String::new();
        for (i, cell) in cells.iter().enumerate() {
            let pad = widths[i] - width(cell);
            if i == 0 {
                out.push_str(cell);
                out.push_str(&" ".repeat(pad));
            } else {
                out.push_str("  ");
                out.push_str(&" ".repeat(pad));
                out.push_str(cell);
            }
        }
        out.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row));
    }
    out
}

/// One row per metric, one column per version.
pub fn format_report_table(reports: &[MetricsReport]) -> String {
    let mut header = vec!["Metric".to_string()];
    header.extend(reports.iter().map(|r| r.version_label.clone()));
    let values: Vec<[usize; 7]> = reports.iter().map(MetricsReport::values).collect();
    let mut rows: Vec<Vec<String>> = METRIC_LABELS
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let mut row = vec![label.to_string()];
            row.extend(values.iter().map(|v| v[i].to_string()));
            row
        })
        .collect();
    type Getter = fn(&Supplemental) -> usize;
    let extra: [(&str, Getter); 4] = [
        ("relational", |s| s.relational),
        ("non-relational", |s| s.non_relational),
        ("unmatched calls", |s| s.unmatched_calls),
        ("context map", |s| s.context_map_size),
    ];
    for (label, get) in extra {
        let mut row = vec![label.to_string()];
        row.extend(reports.iter().map(|r| get(&r.supplemental).to_string()));
        rows.push(row);
    }
    render_table(&header, &rows)
}

/// One row per metric, one column per consecutive version pair.
pub fn format_delta_table(timeline: &EvolutionTimeline) -> String {
    let deltas = timeline.deltas();
    let mut header = vec!["Delta".to_string()];
    header.extend(deltas.iter().map(|d| format!("{} -> {}", d.from, d.to)));
    let rows: Vec<Vec<String>> = METRIC_LABELS
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let mut row = vec![label.to_string()];
            row.extend(deltas.iter().map(|d| format!("{:+}", d.values[i])));
            row
        })
        .collect();
    render_table(&header, &rows)
}

/// Reports keyed by version label, for lookups in tests and tools.
pub fn reports_by_label(timeline: &EvolutionTimeline) -> BTreeMap<&str, &MetricsReport> {
    timeline
        .reports()
        .iter()
        .map(|r| (r.version_label.as_str(), r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::merger::{build_resolution, merge_system};
    use crate::model::{DataEntity, Field, Microservice};
    use crate::profile::LanguageProfile;
    use crate::sample::demonstrating_system;

    fn report(label: &str, values: [usize; 7]) -> MetricsReport {
        MetricsReport {
            version_label: label.into(),
            s1_microservices: values[0],
            s2_connections: values[1],
            d1_persistent: values[2],
            d2_transient: values[3],
            d3_relationships: values[4],
            d4_merge_entities: values[5],
            d5_merge_relationships: values[6],
            supplemental: Supplemental::default(),
        }
    }

    #[test]
    fn demonstrating_example() {
        let system = demonstrating_system();
        let (_, resolution) = merge_system(&system, Default::default(), &LanguageProfile::spring_java().type_canon());
        let r = compute_report(&system, &resolution);
        assert_eq!(r.values(), [4, 3, 12, 5, 14, 4, 1]);
        assert_eq!(r.supplemental.context_map_size, 13);
        assert_eq!(r.supplemental.context_map_relationships, 13);
        assert!(r.violations().is_empty(), "{:?}", r.violations());
    }

    #[test]
    fn empty_system_is_all_zeros() {
        let system = SystemModel::new("empty");
        let r = compute_report(&system, &build_resolution(&system, []));
        assert_eq!(r.values(), [0; 7]);
        assert!(r.violations().is_empty());
    }

    #[test]
    fn mutual_pair_counts_once() {
        let a = EntityId::new("m", "A");
        let b = EntityId::new("m", "B");
        let rels = [
            Relationship::new(a.clone(), b.clone(), "b"),
            Relationship::new(b.clone(), a.clone(), "a"),
        ];
        assert_eq!(mirrored_relationships(&rels).len(), 2);
        assert_eq!(undirected_count(&rels), 1);
        let with_loop = [Relationship::new(a.clone(), a.clone(), "parent"), rels[0].clone()];
        assert_eq!(undirected_count(&with_loop), 2);
    }

    #[test]
    fn metrics_ignore_microservice_order() {
        let system = demonstrating_system();
        let mut reversed = system.clone();
        reversed.microservices.reverse();
        let canon = LanguageProfile::spring_java().type_canon();
        let (_, r1) = merge_system(&system, Default::default(), &canon);
        let (_, r2) = merge_system(&reversed, Default::default(), &canon);
        assert_eq!(compute_report(&system, &r1), compute_report(&reversed, &r2));
    }

    #[test]
    fn persistence_split() {
        let mut system = SystemModel::new("v");
        let mut ms = Microservice::new("m");
        ms.persistent_entities = vec![
            DataEntity::new("m", "A", Persistence::Relational).with_fields([Field::new("int", "x")]),
            DataEntity::new("m", "B", Persistence::NonRelational),
        ];
        system.microservices.push(ms);
        let r = compute_report(&system, &build_resolution(&system, []));
        assert_eq!((r.supplemental.relational, r.supplemental.non_relational), (1, 1));
    }

    #[test]
    fn timeline_deltas() {
        let t = build_timeline(vec![
            report("a", [46, 135, 31, 0, 0, 11, 0]),
            report("b", [40, 91, 27, 182, 41, 139, 17]),
            report("c", [43, 90, 27, 81, 43, 32, 19]),
        ])
        .unwrap();
        let d = t.deltas();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].values, [-6, -44, -4, 182, 41, 128, 17]);
        assert_eq!(d[1].values, [3, -1, 0, -101, 2, -107, 2]);
        assert_eq!(reports_by_label(&t)["b"].s2_connections, 91);
    }

    #[test]
    fn timeline_errors() {
        assert_eq!(build_timeline(vec![]), Err(TimelineError::Empty));
        assert_eq!(
            build_timeline(vec![report("a", [0; 7]), report("a", [0; 7])]),
            Err(TimelineError::DuplicateVersionLabel("a".into()))
        );
        assert!(build_timeline(vec![report("a", [0; 7])]).unwrap().deltas().is_empty());
    }

    #[test]
    fn tables_align() {
        let t = build_timeline(vec![report("v1", [4, 3, 12, 5, 14, 4, 1]), report("v2", [4, 30, 12, 5, 14, 4, 1])]).unwrap();
        let table = format_report_table(t.reports());
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], format!("Metric{}v1  v2", " ".repeat(11)));
        assert_eq!(lines[3], format!("S2. #Cμs{}3  30", " ".repeat(10)));
        assert_eq!(lines.len(), 2 + 7 + 4);
        let deltas = format_delta_table(&t);
        assert!(deltas.lines().nth(3).unwrap().ends_with("+27"), "{deltas}");
        assert!(deltas.lines().nth(2).unwrap().ends_with("+0"));
    }
}
