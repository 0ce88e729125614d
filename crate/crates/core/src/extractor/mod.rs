//! Convention-driven source scanning: endpoints, outbound calls and data
//! entities of one microservice.

mod calls;
mod endpoints;
mod entities;
pub mod lexer;
pub mod sketch;

use std::path::Path;

use walkdir::WalkDir;

pub use calls::{extract_calls, extract_calls_reporting, RawCall};
pub use endpoints::{extract_endpoints, extract_endpoints_lenient, join_paths, ConflictingMapping, EndpointDecl};
pub use entities::{attach_relationships, classify_entities, extract_relationships, Classification};
pub use sketch::{ClassSketch, TypeKind, TypeRef};

use crate::profile::LanguageProfile;
use crate::warning::Warning;

/// Directories never scanned: build output, VCS metadata and test sources.
const SKIPPED_DIRS: &[&str] = &["target", "build", "out", "node_modules", ".git", ".idea", "test"];

#[derive(Debug, Clone, Default)]
pub struct ScanOutput {
    pub sketches: Vec<ClassSketch>,
    pub warnings: Vec<Warning>,
}

/// Sketches every top-level type in the recognized source files under
/// `ms_root`, in path order. Files that fail to tokenize or parse are skipped
/// with a warning.
pub fn scan_classes(ms_root: &Path, profile: &LanguageProfile) -> ScanOutput {
    let mut out = ScanOutput::default();
    let walker = WalkDir::new(ms_root)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| {
            e.depth() == 0
                || !e.file_type().is_dir()
                || !SKIPPED_DIRS.contains(&e.file_name().to_string_lossy().as_ref())
        });
    let filter = |name: &str| profile.call_marker(name).is_some();
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(err) => {
                let path = err.path().map(Path::to_path_buf).unwrap_or_else(|| ms_root.to_path_buf());
                out.warnings.push(Warning::new(path, err.to_string()));
                continue;
            }
        };
        if !entry.file_type().is_file() || !profile.is_source_file(entry.path()) {
            continue;
        }
        let relative = entry.path().strip_prefix(ms_root).unwrap_or(entry.path()).to_path_buf();
        let text = match std::fs::read(entry.path()) {
            Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            Err(err) => {
                out.warnings.push(Warning::new(entry.path(), err.to_string()));
                continue;
            }
        };
        let parsed = lexer::tokenize(&text)
            .map_err(|e| e.to_string())
            .and_then(|toks| sketch::parse_compilation_unit(&toks, relative, &filter).map_err(|e| e.to_string()));
        match parsed {
            Ok(sketches) => out.sketches.extend(sketches),
            Err(message) => out
                .warnings
                .push(Warning::new(entry.path(), format!("skipped: {message}"))),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_tree() {
        let dir = tempfile::tempdir().unwrap();
        let out = scan_classes(dir.path(), &LanguageProfile::spring_java());
        assert!(out.sketches.is_empty());
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn unparseable_files_warn_and_skip() {
        let dir = tempfile::tempdir().unwrap();
        let src = dir.path().join("src");
        std::fs::create_dir_all(src.join("test")).unwrap();
        std::fs::write(src.join("A.java"), "class A { int a; }").unwrap();
        std::fs::write(src.join("B.java"), "class B { void f() { \"unterminated }").unwrap();
        std::fs::write(src.join("C.kt"), "class C").unwrap();
        std::fs::write(src.join("test").join("T.java"), "class T {}").unwrap();
        let out = scan_classes(dir.path(), &LanguageProfile::spring_java());
        assert_eq!(out.sketches.len(), 1);
        assert_eq!(out.sketches[0].file, Path::new("src").join("A.java"));
        assert_eq!(out.warnings.len(), 1);
        assert!(out.warnings[0].to_string().contains("B.java"));
    }
}
