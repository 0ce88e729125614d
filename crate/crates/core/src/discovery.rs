//! Finds the standalone microservice projects of a repository, from compose
//! files and from build manifests that declare an application entry point.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Component, Path, PathBuf};

use serde_yaml::Value;
use walkdir::WalkDir;

use crate::warning::Warning;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Evidence {
    ComposeService,
    BuildManifest,
    Both,
}

impl Evidence {
    pub fn as_str(self) -> &'static str {
        match self {
            Evidence::ComposeService => "COMPOSE_SERVICE",
            Evidence::BuildManifest => "BUILD_MANIFEST",
            Evidence::Both => "BOTH",
        }
    }
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjectManifest {
    pub microservice_name: String,
    pub root_dir: PathBuf,
    pub evidence: Evidence,
}

impl ProjectManifest {
    /// `name\troot\tevidence`
    pub fn line(&self) -> String {
        format!(
            "{}\t{}\t{}",
            self.microservice_name,
            self.root_dir.display(),
            self.evidence
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DiscoveryError {
    #[error("root {0} does not exist or is not a directory")]
    RootNotFound(PathBuf),
    #[error("malformed compose document {path}: {message}")]
    MalformedDocument { path: PathBuf, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// A compose service. `context` is absent for image-only services and
/// otherwise relative to the compose file's directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposeService {
    pub name: String,
    pub context: Option<PathBuf>,
}

pub const BUILD_MANIFESTS: &[&str] = &[
    "pom.xml",
    "build.gradle",
    "build.gradle.kts",
    "package.json",
    "requirements.txt",
    "setup.py",
    "pyproject.toml",
    "go.mod",
];

const IGNORED_DIRS: &[&str] = &["node_modules", "target", "build", "dist", "vendor", "__pycache__"];

const COMPOSE_DEPTH: usize = 3;

fn is_compose_file(name: &str) -> bool {
    let stem = name
        .strip_suffix(".yml")
        .or_else(|| name.strip_suffix(".yaml"));
    match stem {
        Some(s) => s == "compose" || s.starts_with("docker-compose"),
        None => false,
    }
}

fn ignored(name: &str) -> bool {
    name.starts_with('.') || IGNORED_DIRS.contains(&name)
}

/// Resolves `.` and `..` without touching the filesystem.
pub fn normalize_lexically(path: &Path) -> PathBuf {
    let mut out = PathBuf::new();
    for c in path.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                if !out.pop() {
                    out.push("..");
                }
            }
            other => out.push(other.as_os_str()),
        }
    }
    out
}

pub fn parse_compose_str(text: &str, path: &Path) -> Result<Vec<ComposeService>, DiscoveryError> {
    let malformed = |message: String| DiscoveryError::MalformedDocument {
        path: path.to_path_buf(),
        message,
    };
    let doc: Value = serde_yaml::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let top = match doc {
        Value::Null => return Ok(Vec::new()),
        Value::Mapping(m) => m,
        _ => return Err(malformed("top level is not a mapping".into())),
    };
    let services = match top.get("services") {
        None | Some(Value::Null) => return Ok(Vec::new()),
        Some(Value::Mapping(m)) => m,
        Some(_) => return Err(malformed("`services` is not a mapping".into())),
    };
    let mut out = Vec::new();
    for (name, spec) in services {
        let name = match name {
            Value::String(s) => s.clone(),
            other => return Err(malformed(format!("service key {other:?} is not a string"))),
        };
        let context = match spec.get("build") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(Value::Mapping(b)) => match b.get("context") {
                None => Some(PathBuf::from(".")),
                Some(Value::String(s)) => Some(PathBuf::from(s)),
                Some(_) => return Err(malformed(format!("service `{name}` has a non-text build context"))),
            },
            Some(_) => return Err(malformed(format!("service `{name}` has a malformed `build`"))),
        };
        out.push(ComposeService { name, context });
    }
    Ok(out)
}

pub fn parse_compose(file: &Path) -> Result<Vec<ComposeService>, DiscoveryError> {
    let text = fs::read_to_string(file).map_err(|source| DiscoveryError::Io {
        path: file.to_path_buf(),
        source,
    })?;
    parse_compose_str(&text, file)
}

fn compose_files(root: &Path) -> Vec<PathBuf> {
    WalkDir::new(root)
        .max_depth(COMPOSE_DEPTH)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !ignored(&e.file_name().to_string_lossy()))
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file() && is_compose_file(&e.file_name().to_string_lossy()))
        .map(|e| e.into_path())
        .collect()
}

fn file_contains(path: &Path, needles: &[&str]) -> bool {
    fs::read(path)
        .map(|bytes| {
            let text = String::from_utf8_lossy(&bytes);
            needles.iter().any(|n| text.contains(n))
        })
        .unwrap_or(false)
}

/// Whether the project at `dir` declares an entry point for the ecosystem of
/// its build manifest.
fn has_entry_point(dir: &Path, manifest: &str) -> bool {
    let (extensions, needles): (&[&str], &[&str]) = match manifest {
        "pom.xml" | "build.gradle" | "build.gradle.kts" => (
            &["java", "kt", "groovy", "scala"],
            &["@SpringBootApplication", "static void main(", "fun main("],
        ),
        "package.json" => {
            let pkg = dir.join("package.json");
            if file_contains(&pkg, &["\"main\"", "\"start\""]) {
                return true;
            }
            (&["js", "ts", "mjs"], &["listen("])
        }
        "go.mod" => (&["go"], &["package main"]),
        _ => (&["py"], &["__main__", "app.run(", "serve_forever(", "uvicorn.run("]),
    };
    WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !ignored(&e.file_name().to_string_lossy()))
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .filter(|e| {
            e.path()
                .extension()
                .and_then(|x| x.to_str())
                .is_some_and(|x| extensions.contains(&x))
        })
        .any(|e| file_contains(e.path(), needles))
}

/// Subdirectories holding a build manifest and an entry point. A detected
/// project is not searched for nested ones.
fn manifest_projects(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut walker = WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.file_type().is_dir() && (e.depth() == 0 || !ignored(&e.file_name().to_string_lossy())));
    while let Some(entry) = walker.next() {
        let Ok(entry) = entry else { continue };
        if entry.depth() == 0 {
            continue;
        }
        let dir = entry.path();
        let found = BUILD_MANIFESTS
            .iter()
            .filter(|m| dir.join(m).is_file())
            .any(|m| has_entry_point(dir, m));
        if found {
            out.push(dir.to_path_buf());
            walker.skip_current_dir();
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct Discovery {
    pub manifests: Vec<ProjectManifest>,
    pub warnings: Vec<Warning>,
}

/// Discovers microservices under `root`, sorted by name. Unreadable or
/// malformed compose files are skipped with a warning.
pub fn discover_reporting(root: &Path) -> Result<Discovery, DiscoveryError> {
    if !root.is_dir() {
        return Err(DiscoveryError::RootNotFound(root.to_path_buf()));
    }
    let root_key = normalize_lexically(root);
    let mut warnings = Vec::new();
    // Keyed by project directory.
    let mut by_dir: BTreeMap<PathBuf, (String, Evidence)> = BTreeMap::new();

    for file in compose_files(root) {
        let services = match parse_compose(&file) {
            Ok(s) => s,
            Err(e) => {
                warnings.push(Warning::new(&file, e.to_string()));
                continue;
            }
        };
        let base = file.parent().unwrap_or(root);
        for service in services {
            let Some(context) = service.context else { continue };
            let dir = normalize_lexically(&base.join(context));
            let inside = dir != root_key && dir.starts_with(&root_key);
            if !inside || !dir.is_dir() {
                warnings.push(Warning::new(
                    &file,
                    format!("service `{}` builds from {} which is not a subdirectory", service.name, dir.display()),
                ));
                continue;
            }
            by_dir.entry(dir).or_insert((service.name, Evidence::ComposeService));
        }
    }

    for dir in manifest_projects(root) {
        let dir = normalize_lexically(&dir);
        match by_dir.get_mut(&dir) {
            Some(entry) => entry.1 = Evidence::Both,
            None => {
                let name = dir
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                by_dir.insert(dir, (name, Evidence::BuildManifest));
            }
        }
    }

    // Compose names take precedence on a name clash; other clashes keep the
    // first directory in path order.
    let mut by_name: BTreeMap<String, ProjectManifest> = BTreeMap::new();
    let mut entries: Vec<(PathBuf, (String, Evidence))> = by_dir.into_iter().collect();
    entries.sort_by_key(|(dir, (_, evidence))| (*evidence == Evidence::BuildManifest, dir.clone()));
    for (dir, (name, evidence)) in entries {
        if let Some(existing) = by_name.get(&name) {
            warnings.push(Warning::new(
                &dir,
                format!("name `{name}` already taken by {}", existing.root_dir.display()),
            ));
            continue;
        }
        by_name.insert(
            name.clone(),
            ProjectManifest {
                microservice_name: name,
                root_dir: dir,
                evidence,
            },
        );
    }
    Ok(Discovery {
        manifests: by_name.into_values().collect(),
        warnings,
    })
}

pub fn discover(root: &Path) -> Result<Vec<ProjectManifest>, DiscoveryError> {
    discover_reporting(root).map(|d| d.manifests)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(path: &Path, text: &str) {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, text).unwrap();
    }

    #[test]
    fn compose_build_and_image_services() {
        let s = parse_compose_str(
            "services:\n  a:\n    build: ./a\n  b:\n    image: x\n  c:\n    build:\n      context: ../c\n      dockerfile: D\n  d:\n    build: {}\n",
            Path::new("c.yml"),
        )
        .unwrap();
        assert_eq!(
            s,
            vec![
                ComposeService { name: "a".into(), context: Some("./a".into()) },
                ComposeService { name: "b".into(), context: None },
                ComposeService { name: "c".into(), context: Some("../c".into()) },
                ComposeService { name: "d".into(), context: Some(".".into()) },
            ]
        );
    }

    #[test]
    fn compose_without_services() {
        assert!(parse_compose_str("version: '3'\n", Path::new("c.yml")).unwrap().is_empty());
        assert!(parse_compose_str("services:\n", Path::new("c.yml")).unwrap().is_empty());
        assert!(parse_compose_str("", Path::new("c.yml")).unwrap().is_empty());
    }

    #[test]
    fn malformed_compose() {
        for text in ["- a\n- b\n", "services: [a]\n", "services:\n  a:\n    build: [1]\n", "services: {a: {build: "] {
            assert!(matches!(
                parse_compose_str(text, Path::new("c.yml")),
                Err(DiscoveryError::MalformedDocument { .. })
            ));
        }
    }

    #[test]
    fn empty_and_missing_roots() {
        let dir = tempfile::tempdir().unwrap();
        assert!(discover(dir.path()).unwrap().is_empty());
        assert!(matches!(
            discover(&dir.path().join("nope")),
            Err(DiscoveryError::RootNotFound(_))
        ));
    }

    #[test]
    fn union_of_compose_and_manifests() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        write(&root.join("docker-compose.yml"), "services:\n  alpha:\n    build: ./a\n  db:\n    image: pg\n");
        write(&root.join("a/pom.xml"), "<project/>");
        write(&root.join("a/src/App.java"), "@SpringBootApplication class App {}");
        write(&root.join("b/pom.xml"), "<project/>");
        write(&root.join("b/src/App.java"), "class App { public static void main(String[] a) {} }");
        write(&root.join("b/nested/pom.xml"), "<project/>");
        write(&root.join("b/nested/App.java"), "@SpringBootApplication class N {}");
        write(&root.join("lib/pom.xml"), "<project/>");
        write(&root.join("lib/src/Util.java"), "class Util {}");
        write(&root.join("py/requirements.txt"), "flask");
        write(&root.join("py/server.py"), "if __name__ == '__main__':\n    pass\n");
        write(&root.join("node/package.json"), "{\"scripts\": {\"start\": \"node x\"}}");
        write(&root.join("broken/docker-compose.yaml"), "services: [");

        let d = discover_reporting(root).unwrap();
        let got: Vec<(String, Evidence)> = d
            .manifests
            .iter()
            .map(|m| (m.microservice_name.clone(), m.evidence))
            .collect();
        assert_eq!(
            got,
            [
                ("alpha".to_string(), Evidence::Both),
                ("b".to_string(), Evidence::BuildManifest),
                ("node".to_string(), Evidence::BuildManifest),
                ("py".to_string(), Evidence::BuildManifest),
            ]
        );
        assert_eq!(d.manifests[0].root_dir, normalize_lexically(&root.join("a")));
        assert_eq!(d.warnings.len(), 1);
        assert_eq!(discover(root).unwrap(), d.manifests);
    }

    #[test]
    fn context_outside_root_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().join("repo");
        write(&root.join("compose.yaml"), "services:\n  out:\n    build: ../elsewhere\n  self:\n    build: .\n");
        fs::create_dir_all(dir.path().join("elsewhere")).unwrap();
        let d = discover_reporting(&root).unwrap();
        assert!(d.manifests.is_empty());
        assert_eq!(d.warnings.len(), 2);
    }

    #[test]
    fn lexical_normalization() {
        assert_eq!(normalize_lexically(Path::new("a/./b/../c/")), PathBuf::from("a/c"));
        assert_eq!(normalize_lexically(Path::new("../x")), PathBuf::from("../x"));
    }
}
