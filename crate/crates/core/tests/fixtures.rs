use std::collections::BTreeSet;
use std::path::PathBuf;

use archlens_core::discovery::{discover, parse_compose, Evidence};
use archlens_core::extractor::{extract_calls, extract_endpoints, scan_classes};
use archlens_core::matcher::Disposition;
use archlens_core::model::validate_system;
use archlens_core::sample::demonstrating_label;
use archlens_core::{analyze, AnalysisOptions, LanguageProfile};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[test]
fn corpus_discovery() {
    let manifests = discover(&fixture("corpus")).unwrap();
    let names: Vec<&str> = manifests.iter().map(|m| m.microservice_name.as_str()).collect();
    assert_eq!(names, ["catalog-svc", "inventory-svc", "order-svc", "shipping-svc"]);
    assert!(manifests.iter().all(|m| m.evidence == Evidence::Both));

    let services = parse_compose(&fixture("corpus/docker-compose.yml")).unwrap();
    let with_context = services.iter().filter(|s| s.context.is_some()).count();
    assert_eq!((services.len(), with_context), (5, 4));
}

#[test]
fn corpus_extraction_counts() {
    let profile = LanguageProfile::spring_java();
    let inventory = scan_classes(&fixture("corpus/inventory-svc"), &profile);
    assert_eq!(inventory.sketches.len(), 6);
    assert!(inventory.warnings.is_empty());

    let catalog = scan_classes(&fixture("corpus/catalog-svc"), &profile);
    assert_eq!(extract_endpoints(&catalog.sketches, &profile).unwrap().len(), 5);

    let total_calls: usize = ["catalog-svc", "inventory-svc", "order-svc", "shipping-svc"]
        .iter()
        .map(|s| extract_calls(&scan_classes(&fixture(&format!("corpus/{s}")), &profile).sketches, &profile).len())
        .sum();
    assert_eq!(total_calls, 7);
}

#[test]
fn corpus_metrics() {
    let a = analyze(&fixture("corpus"), &AnalysisOptions::default()).unwrap();
    assert!(a.warnings.is_empty(), "{:?}", a.warnings);
    assert!(validate_system(&a.system).is_empty(), "{:?}", validate_system(&a.system));
    assert_eq!(a.system.version_label, "corpus");
    assert_eq!(a.report.values(), [4, 6, 7, 3, 5, 2, 1]);
    let s = a.report.supplemental;
    assert_eq!((s.relational, s.non_relational), (5, 2));
    assert_eq!(s.unmatched_calls, 1);
    assert_eq!(s.context_map_size, 8);
    assert!(a.report.violations().is_empty());

    let dispositions: Vec<Disposition> = a.match_results.iter().map(|m| m.disposition).collect();
    assert_eq!(dispositions.len(), 7);
    assert_eq!(dispositions.iter().filter(|d| **d == Disposition::Unresolved).count(), 1);
    let unresolved = a.match_results.iter().find(|m| m.matched.is_none()).unwrap();
    assert_eq!(unresolved.caller, "shipping-svc");
    assert_eq!(unresolved.call.url_path, "/api/v1/orders/*/history");
}

#[test]
fn corpus_strict_response_only() {
    let options = AnalysisOptions {
        strict_response_only: true,
        ..AnalysisOptions::default()
    };
    let a = analyze(&fixture("corpus"), &options).unwrap();
    assert_eq!(a.report.d2_transient, 2);
}

#[test]
fn demo_corpus_matches_the_worked_example() {
    let a = analyze(&fixture("demo"), &AnalysisOptions::default()).unwrap();
    assert!(a.warnings.is_empty(), "{:?}", a.warnings);
    assert_eq!(a.report.values(), [4, 3, 12, 5, 14, 4, 1]);

    let ms2 = a.system.microservice("ms-2").unwrap();
    assert_eq!(ms2.entities().map(|e| e.relationships.len()).sum::<usize>(), 6);

    let pairs: BTreeSet<(&str, &str)> = a
        .candidates
        .iter()
        .map(|c| {
            let x = demonstrating_label(&c.first).unwrap();
            let y = demonstrating_label(&c.second).unwrap();
            (x.min(y), x.max(y))
        })
        .collect();
    let expected: BTreeSet<(&str, &str)> = [
        ("P-1.3", "P-2.1"),
        ("P-2.3", "T-3.2"),
        ("P-2.4", "P-4.1"),
        ("T-1.1", "T-2.1"),
    ]
    .into_iter()
    .collect();
    assert_eq!(pairs, expected);
    assert_eq!(a.context_map.entities.len(), 13);
    assert_eq!(a.context_map.relationships.len(), 13);

    let targets: Vec<(&str, &str)> = a
        .system
        .calls()
        .filter_map(|(ms, c)| c.resolved_target.as_ref().map(|t| (ms.name.as_str(), t.microservice.as_str())))
        .collect();
    assert_eq!(targets, [("ms-1", "ms-2"), ("ms-3", "ms-2"), ("ms-4", "ms-2")]);
}

#[test]
fn version_series() {
    let labels = ["v1", "v2", "corpus"];
    let s1: Vec<usize> = labels
        .iter()
        .map(|l| {
            let path = if *l == "corpus" { fixture("corpus") } else { fixture(&format!("versions/{l}")) };
            analyze(&path, &AnalysisOptions::default()).unwrap().report.s1_microservices
        })
        .collect();
    assert_eq!(s1, [2, 3, 4]);
}
