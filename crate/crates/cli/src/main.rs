use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use archlens_core::discovery::{discover_reporting, DiscoveryError};
use archlens_core::matcher::{unmatched_report, Disposition};
use archlens_core::merger::MergeThresholds;
use archlens_core::metrics::{build_timeline, format_delta_table, format_report_table};
use archlens_core::pipeline::{analyze, write_artifacts, write_timeline, Analysis, AnalysisOptions, ArtifactOptions};
use archlens_core::profile::{LanguageProfile, ProfileError};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "archlens", version, about = "Reconstruct and measure microservice architectures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one checked-out version.
    Analyze {
        path: PathBuf,
        /// Version label; defaults to the directory name.
        #[arg(long)]
        label: Option<String>,
        /// Print discovered projects as `name<TAB>root<TAB>evidence` and stop.
        #[arg(long)]
        discover_only: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Analyze several versions in order and track the metrics.
    Evolve {
        /// `label=path`, in chronological order.
        #[arg(required = true, value_parser = parse_version_spec)]
        versions: Vec<(String, PathBuf)>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "archlens-out")]
    out: PathBuf,
    #[arg(long, default_value = LanguageProfile::DEFAULT_NAME)]
    profile: String,
    /// TOML profile definition; overrides --profile.
    #[arg(long)]
    profile_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.85, value_parser = unit_interval)]
    name_sim: f64,
    #[arg(long, default_value_t = 0.5, value_parser = unit_interval)]
    field_sim: f64,
    /// Flag graph nodes with more than N distinct dependencies.
    #[arg(long, value_name = "N")]
    coupling_threshold: Option<usize>,
    /// Print unresolved calls as `caller<TAB>method<TAB>path`.
    #[arg(long)]
    report_unmatched: bool,
    /// Also write one class diagram per microservice.
    #[arg(long)]
    per_service: bool,
    /// Count only response types as transient entities.
    #[arg(long)]
    strict_response_only: bool,
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_version_spec(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((label, path)) if !label.is_empty() && !path.is_empty() => Ok((label.to_string(), PathBuf::from(path))),
        _ => Err(format!("expected label=path, got `{s}`")),
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(message: impl ToString) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.to_string(),
        }
    }

    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<DiscoveryError> for Failure {
    fn from(e: DiscoveryError) -> Self {
        Failure::io(e)
    }
}

impl Common {
    fn options(&self, label: Option<String>) -> Result<AnalysisOptions, Failure> {
        let profile = match &self.profile_file {
            Some(path) => LanguageProfile::from_file(path),
            None => LanguageProfile::builtin(&self.profile),
        }
        .map_err(|e| match e {
            ProfileError::Read { .. } => Failure::io(e),
            _ => Failure::usage(e),
        })?;
        Ok(AnalysisOptions {
            profile,
            thresholds: MergeThresholds::new(self.name_sim, self.field_sim).map_err(Failure::usage)?,
            strict_response_only: self.strict_response_only,
            version_label: label,
        })
    }

    fn artifacts(&self) -> ArtifactOptions {
        ArtifactOptions {
            coupling_threshold: self.coupling_threshold,
            per_service: self.per_service,
        }
    }
}

fn require_dir(path: &Path) -> Result<(), Failure> {
    if path.is_dir() {
        Ok(())
    } else {
        Err(Failure::io(format!("{} does not exist or is not a directory", path.display())))
    }
}

fn run_one(path: &Path, common: &Common, options: &AnalysisOptions, out: &Path) -> Result<Analysis, Failure> {
    let analysis = analyze(path, options)?;
    for w in &analysis.warnings {
        eprintln!("{w}");
    }
    for m in &analysis.match_results {
        if m.disposition == Disposition::Unresolved {
            eprintln!(
                "warning: {}: unresolved call {} {} ({})",
                m.caller, m.call.http_method, m.call.url_path, m.call.origin
            );
        }
    }
    write_artifacts(out, &analysis, common.artifacts()).map_err(Failure::io)?;
    Ok(analysis)
}

fn cmd_analyze(path: &Path, label: Option<String>, discover_only: bool, common: &Common) -> Result<(), Failure> {
    require_dir(path)?;
    if discover_only {
        let discovery = discover_reporting(path)?;
        for w in &discovery.warnings {
            eprintln!("{w}");
        }
        for m in &discovery.manifests {
            println!("{}", m.line());
        }
        return Ok(());
    }
    let options = common.options(label)?;
    let analysis = run_one(path, common, &options, &common.out)?;
    print!("{}", format_report_table(std::slice::from_ref(&analysis.report)));
    if common.report_unmatched {
        print!("{}", unmatched_report(&analysis.match_results));
    }
    Ok(())
}

fn cmd_evolve(versions: &[(String, PathBuf)], common: &Common) -> Result<(), Failure> {
    let mut seen = BTreeSet::new();
    for (label, _) in versions {
        if !seen.insert(label) {
            return Err(Failure::usage(format!("version label `{label}` appears more than once")));
        }
    }
    for (_, path) in versions {
        require_dir(path)?;
    }
    let mut reports = Vec::new();
    let mut unmatched = String::new();
    for (label, path) in versions {
        let options = common.options(Some(label.clone()))?;
        let analysis = run_one(path, common, &options, &common.out.join(label))?;
        for line in unmatched_report(&analysis.match_results).lines() {
            unmatched.push_str(&format!("{label}\t{line}\n"));
        }
        reports.push(analysis.report);
    }
    let timeline = build_timeline(reports).map_err(Failure::usage)?;
    write_timeline(&common.out, &timeline).map_err(Failure::io)?;
    print!("{}", format_report_table(timeline.reports()));
    if timeline.reports().len() > 1 {
        println!();
        print!("{}", format_delta_table(&timeline));
    }
    if common.report_unmatched {
        print!("{unmatched}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze {
            path,
            label,
            discover_only,
            common,
        } => cmd_analyze(path, label.clone(), *discover_only, common),
        Command::Evolve { versions, common } => cmd_evolve(versions, common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
