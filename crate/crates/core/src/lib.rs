//! Architecture reconstruction for microservice systems.
//!
//! The pipeline discovers the services of a repository, scans their sources
//! for endpoints, outbound HTTP calls and data entities, matches calls to
//! endpoints, merges look-alike entities across services into a context map
//! and computes seven system metrics (S1, S2, D1 to D5) that can be tracked
//! across versions.

pub mod discovery;
pub mod exporter;
pub mod extractor;
pub mod matcher;
pub mod merger;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod profile;
pub mod sample;
pub mod warning;

pub use discovery::{discover, Evidence, ProjectManifest};
pub use matcher::{match_call, normalize_path, resolve_system, Disposition, MatchResult};
pub use merger::{build_context_map, build_resolution, merge_system, ContextMap, MergeResolution, MergeThresholds};
pub use metrics::{build_timeline, compute_report, EvolutionTimeline, MetricsReport};
pub use model::{
    CallSite, DataEntity, Endpoint, EntityId, Field, HttpMethod, Microservice, Parameter, Persistence,
    Relationship, ResolvedTarget, SystemModel,
};
pub use pipeline::{analyze, Analysis, AnalysisOptions, ArtifactOptions};
pub use profile::LanguageProfile;
pub use warning::Warning;
