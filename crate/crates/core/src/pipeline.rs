//! End-to-end analysis of one version: discovery, extraction, matching,
//! merging and metrics.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::discovery::{discover_reporting, DiscoveryError, ProjectManifest};
use crate::exporter::{self, ExportError};
use crate::extractor::{
    attach_relationships, classify_entities, extract_calls_reporting, extract_endpoints_lenient, scan_classes,
};
use crate::matcher::{resolve_system, MatchResult};
use crate::merger::{build_context_map, merge_system, CandidatePair, ContextMap, MergeResolution, MergeThresholds};
use crate::metrics::{build_timeline, compute_report, EvolutionTimeline, MetricsReport};
use crate::model::{Microservice, SystemModel};
use crate::profile::LanguageProfile;
use crate::warning::Warning;

#[derive(Debug, Clone, Default)]
pub struct AnalysisOptions {
    pub profile: LanguageProfile,
    pub thresholds: MergeThresholds,
    pub strict_response_only: bool,
    /// Defaults to the root directory's name.
    pub version_label: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub manifests: Vec<ProjectManifest>,
    /// The resolved model.
    pub system: SystemModel,
    pub match_results: Vec<MatchResult>,
    pub candidates: Vec<CandidatePair>,
    pub resolution: MergeResolution,
    pub context_map: ContextMap,
    pub report: MetricsReport,
    pub warnings: Vec<Warning>,
}

/// Extracts one microservice. Conflicting endpoint mappings keep the first
/// handler and produce a warning.
pub fn extract_microservice(
    manifest: &ProjectManifest,
    profile: &LanguageProfile,
    strict_response_only: bool,
) -> (Microservice, Vec<Warning>) {
    let name = &manifest.microservice_name;
    let scan = scan_classes(&manifest.root_dir, profile);
    let mut warnings = scan.warnings;
    let (endpoints, conflicts) = extract_endpoints_lenient(&scan.sketches, profile);
    for c in conflicts {
        warnings.push(Warning::new(&manifest.root_dir, c.to_string()));
    }
    let (calls, call_warnings) = extract_calls_reporting(&scan.sketches, profile);
    warnings.extend(call_warnings);
    let mut entities = classify_entities(name, &scan.sketches, &endpoints, profile, strict_response_only);
    attach_relationships(&mut entities);

    let mut ms = Microservice::new(name.clone());
    ms.source_root = manifest.root_dir.clone();
    ms.endpoints = endpoints.into_iter().map(|d| d.endpoint).collect();
    ms.calls = calls.into_iter().map(|c| c.into_call_site()).collect();
    ms.persistent_entities = entities.persistent;
    ms.transient_entities = entities.transient;
    (ms, warnings)
}

fn default_label(root: &Path) -> String {
    let named = |p: &Path| p.file_name().map(|n| n.to_string_lossy().into_owned());
    named(root)
        .or_else(|| root.canonicalize().ok().as_deref().and_then(named))
        .unwrap_or_else(|| root.display().to_string())
}

pub fn analyze(root: &Path, options: &AnalysisOptions) -> Result<Analysis, DiscoveryError> {
    let discovery = discover_reporting(root)?;
    let mut warnings = discovery.warnings;
    let extracted: Vec<(Microservice, Vec<Warning>)> = discovery
        .manifests
        .par_iter()
        .map(|m| extract_microservice(m, &options.profile, options.strict_response_only))
        .collect();
    let mut system = SystemModel::new(
        options
            .version_label
            .clone()
            .unwrap_or_else(|| default_label(root)),
    );
    for (ms, w) in extracted {
        system.microservices.push(ms);
        warnings.extend(w);
    }
    system.canonicalize();
    let (system, match_results) = resolve_system(system);
    let (candidates, resolution) = merge_system(&system, options.thresholds, &options.profile.type_canon());
    let context_map = build_context_map(&system, &resolution);
    let report = compute_report(&system, &resolution);
    Ok(Analysis {
        manifests: discovery.manifests,
        system,
        match_results,
        candidates,
        resolution,
        context_map,
        report,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ArtifactOptions {
    pub coupling_threshold: Option<usize>,
    pub per_service: bool,
}

/// Writes the artifacts of one analysis into `out_dir` and returns the paths
/// written. The timeline holds this version alone.
pub fn write_artifacts(
    out_dir: &Path,
    analysis: &Analysis,
    options: ArtifactOptions,
) -> Result<Vec<PathBuf>, ExportError> {
    let timeline = build_timeline(vec![analysis.report.clone()]).expect("one report is a valid timeline");
    let mut files = vec![
        (
            out_dir.join(exporter::IR_FILE),
            exporter::export_ir(&analysis.system, &analysis.resolution),
        ),
        (
            out_dir.join(exporter::GRAPH_FILE),
            exporter::export_graph(&analysis.system, options.coupling_threshold),
        ),
        (
            out_dir.join(exporter::CONTEXT_MAP_FILE),
            exporter::export_context_map_mermaid(&analysis.context_map),
        ),
        (
            out_dir.join(exporter::TIMELINE_FILE),
            exporter::export_timeline_csv(&timeline),
        ),
        (
            out_dir.join(exporter::MERGE_AUDIT_FILE),
            analysis
                .resolution
                .audit_lines()
                .iter()
                .map(|l| format!("{l}\n"))
                .collect(),
        ),
    ];
    if options.per_service {
        for ms in &analysis.system.microservices {
            let text = exporter::export_service_mermaid(&analysis.system, &ms.name).expect("microservice exists");
            files.push((
                out_dir.join(exporter::SERVICES_DIR).join(format!("{}.mmd", ms.name)),
                text,
            ));
        }
    }
    for (path, text) in &files {
        exporter::write_text(path, text)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

/// Writes the multi-version timeline.
pub fn write_timeline(out_dir: &Path, timeline: &EvolutionTimeline) -> Result<PathBuf, ExportError> {
    let path = out_dir.join(exporter::TIMELINE_FILE);
    exporter::write_text(&path, &exporter::export_timeline_csv(timeline))?;
    Ok(path)
}
