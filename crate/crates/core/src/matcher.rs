//! Signature matching: resolves outbound calls to declared endpoints by HTTP
//! method and segment-wise path compatibility.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::model::{CallSite, Endpoint, ResolvedTarget, SystemModel};

/// Token written in place of any URL fragment that is not a string literal.
pub const PLACEHOLDER: &str = "{*}";
/// Segment that matches exactly one segment on the other side.
pub const WILDCARD: &str = "*";

/// Splits an absolute URL into its host (without port or credentials) and the
/// remaining path. Returns `None` for the host when the text has no scheme.
pub fn split_host(raw: &str) -> (Option<String>, &str) {
    let raw = raw.trim();
    match raw.find("://") {
        Some(idx) => {
            let rest = &raw[idx + 3..];
            let (authority, path) = match rest.find('/') {
                Some(slash) => (&rest[..slash], &rest[slash..]),
                None => (rest, ""),
            };
            let host = authority.rsplit('@').next().unwrap_or(authority);
            let host = host.split(':').next().unwrap_or(host);
            let host = (!host.is_empty() && !host.contains('{')).then(|| host.to_string());
            (host, path)
        }
        None => (None, raw),
    }
}

/// Canonical path template used for matching.
///
/// Drops scheme and host, query and fragment, collapses duplicate slashes,
/// removes a trailing slash, rewrites `{name}` and `{*}` segments to `*` and
/// lowercases literal segments. An expression that starts with a placeholder
/// followed by `/` has an unknown base URL, so that placeholder is dropped too.
pub fn normalize_path(raw: &str) -> String {
    let (_, mut path) = split_host(raw);
    if let Some(rest) = path.strip_prefix(PLACEHOLDER) {
        if rest.starts_with('/') {
            path = rest;
        }
    }
    let path = path.split(['?', '#']).next().unwrap_or("");
    let segments: Vec<String> = path
        .split('/')
        .filter(|s| !s.is_empty())
        .map(|s| {
            if s.contains('{') || s == WILDCARD {
                WILDCARD.to_string()
            } else {
                s.to_lowercase()
            }
        })
        .collect();
    format!("/{}", segments.join("/"))
}

fn segments(path: &str) -> Vec<&str> {
    path.split('/').filter(|s| !s.is_empty()).collect()
}

/// Segment-wise compatibility of two normalized paths.
pub fn paths_compatible(call_path: &str, endpoint_path: &str) -> bool {
    let a = segments(call_path);
    let b = segments(endpoint_path);
    a.len() == b.len()
        && a
            .iter()
            .zip(&b)
            .all(|(x, y)| x == y || *x == WILDCARD || *y == WILDCARD)
}

fn wildcard_count(path: &str) -> usize {
    segments(path).iter().filter(|s| **s == WILDCARD).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Disposition {
    Resolved,
    Unresolved,
    AmbiguousResolved,
}

impl Disposition {
    pub fn as_str(self) -> &'static str {
        match self {
            Disposition::Resolved => "RESOLVED",
            Disposition::Unresolved => "UNRESOLVED",
            Disposition::AmbiguousResolved => "AMBIGUOUS_RESOLVED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub caller: String,
    pub call: CallSite,
    pub matched: Option<ResolvedTarget>,
    pub candidates_considered: usize,
    pub disposition: Disposition,
}

struct Candidate<'a> {
    microservice: &'a str,
    endpoint: &'a Endpoint,
    wildcards: usize,
    param_gap: usize,
}

impl Candidate<'_> {
    fn rank(&self) -> (usize, usize) {
        (self.wildcards, self.param_gap)
    }

    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.microservice.cmp(other.microservice))
            .then_with(|| self.endpoint.url_path.cmp(&other.endpoint.url_path))
    }
}

/// Finds the endpoint a call targets.
///
/// Candidates are endpoints of other microservices (only the hinted one when
/// the hint names a known microservice) with the same method and a
/// compatible path. Fewer wildcard segments wins, then the closest parameter
/// count, then `(microservice, path)` order; a tie on the first two keys is
/// reported as [`Disposition::AmbiguousResolved`].
pub fn match_call(caller: &str, call: &CallSite, system: &SystemModel) -> MatchResult {
    let call_path = normalize_path(&call.url_path);
    let hinted = call
        .target_hint
        .as_deref()
        .filter(|h| *h != caller && system.microservice(h).is_some());

    let mut candidates: Vec<Candidate<'_>> = system
        .microservices
        .iter()
        .filter(|ms| ms.name != caller)
        .filter(|ms| hinted.map_or(true, |h| ms.name == h))
        .flat_map(|ms| ms.endpoints.iter().map(move |ep| (ms.name.as_str(), ep)))
        .filter(|(_, ep)| ep.http_method == call.http_method)
        .filter_map(|(name, ep)| {
            let ep_path = normalize_path(&ep.url_path);
            paths_compatible(&call_path, &ep_path).then(|| Candidate {
                microservice: name,
                endpoint: ep,
                wildcards: wildcard_count(&ep_path),
                param_gap: ep.parameters.len().abs_diff(call.parameters.len()),
            })
        })
        .collect();
    candidates.sort_by(Candidate::cmp);

    let considered = candidates.len();
    let (matched, disposition) = match candidates.first() {
        None => (None, Disposition::Unresolved),
        Some(best) => {
            let tied = candidates
                .get(1)
                .is_some_and(|second| second.rank() == best.rank());
            let target = ResolvedTarget {
                microservice: best.microservice.to_string(),
                http_method: best.endpoint.http_method,
                endpoint_path: best.endpoint.url_path.clone(),
            };
            let disposition = if tied {
                Disposition::AmbiguousResolved
            } else {
                Disposition::Resolved
            };
            (Some(target), disposition)
        }
    };

    MatchResult {
        caller: caller.to_string(),
        call: CallSite {
            resolved_target: matched.clone(),
            ..call.clone()
        },
        matched,
        candidates_considered: considered,
        disposition,
    }
}

/// Resolves every call of the system. Unmatched calls stay in the model with
/// no resolved target. Results are ordered by caller, then origin.
pub fn resolve_system(system: SystemModel) -> (SystemModel, Vec<MatchResult>) {
    let mut system = system.canonicalized();
    let jobs: Vec<(usize, usize)> = system
        .microservices
        .iter()
        .enumerate()
        .flat_map(|(i, ms)| (0..ms.calls.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<MatchResult> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let ms = &system.microservices[i];
            match_call(&ms.name, &ms.calls[j], &system)
        })
        .collect();
    for (&(i, j), result) in jobs.iter().zip(&results) {
        system.microservices[i].calls[j].resolved_target = result.matched.clone();
    }
    (system, results)
}

/// Text lines `<caller>\t<method>\t<path>` for every unresolved call.
pub fn unmatched_report(results: &[MatchResult]) -> String {
    results
        .iter()
        .filter(|r| r.disposition == Disposition::Unresolved)
        .map(|r| format!("{}\t{}\t{}\n", r.caller, r.call.http_method, r.call.url_path))
        .collect()
}
