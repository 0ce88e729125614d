use std::collections::BTreeMap;

use super::lexer::TokenKind;
use super::sketch::{Annotation, ClassSketch, MethodSketch};
use crate::matcher::{normalize_path, PLACEHOLDER};
use crate::model::{Endpoint, HttpMethod, Parameter};
use crate::profile::LanguageProfile;

/// An endpoint together with the types its handler exchanges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointDecl {
    pub endpoint: Endpoint,
    /// Declared type of the request body, if any.
    pub request_type: Option<String>,
    /// Every type name in the handler's return type.
    pub response_types: Vec<String>,
    /// Every type name among the handler's parameters.
    pub request_types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{method} {path} is mapped by both {first} and {second}")]
pub struct ConflictingMapping {
    pub method: HttpMethod,
    pub path: String,
    pub first: String,
    pub second: String,
}

/// Joins a base path and a sub path with exactly one `/` between them.
pub fn join_paths(base: &str, sub: &str) -> String {
    let segments: Vec<&str> = base
        .split('/')
        .chain(sub.split('/'))
        .filter(|s| !s.is_empty())
        .collect();
    format!("/{}", segments.join("/"))
}

/// Path values of a mapping annotation. String literals are taken as is; a
/// constant reference is looked up in the declaring class, otherwise it
/// becomes a placeholder segment. No argument means the empty path.
fn mapping_paths(annotation: &Annotation, keys: &[String], class: &ClassSketch) -> Vec<String> {
    let Some(arg) = annotation.arg(keys) else {
        return vec![String::new()];
    };
    let literals: Vec<String> = arg
        .tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Str)
        .map(|t| t.text.clone())
        .collect();
    if !literals.is_empty() {
        return literals;
    }
    let constant = arg
        .tokens
        .iter()
        .rev()
        .find_map(|t| t.ident())
        .and_then(|name| class.constants.iter().find(|c| c.name == name))
        .and_then(|c| c.expr.iter().find(|t| t.kind == TokenKind::Str))
        .map(|t| t.text.clone());
    vec![constant.unwrap_or_else(|| PLACEHOLDER.to_string())]
}

fn mapping_methods(annotation: &Annotation, profile: &LanguageProfile) -> Vec<HttpMethod> {
    let Some(marker) = profile.endpoint_marker(&annotation.name) else {
        return Vec::new();
    };
    if let Some(m) = marker.method {
        return vec![m];
    }
    let declared: Vec<HttpMethod> = annotation
        .named_arg(&profile.method_key)
        .map(|arg| {
            arg.tokens
                .iter()
                .filter_map(|t| t.ident().and_then(|s| s.parse().ok()))
                .collect()
        })
        .unwrap_or_default();
    if declared.is_empty() {
        vec![HttpMethod::Get]
    } else {
        declared
    }
}

fn endpoint_parameters(method: &MethodSketch, profile: &LanguageProfile) -> Vec<Parameter> {
    let mut out = Vec::new();
    for p in &method.params {
        for a in &p.annotations {
            let recognized = profile.path_variable_markers.contains(&a.name)
                || profile.request_param_markers.contains(&a.name);
            if recognized {
                let name = a
                    .strings(&["value", "name"])
                    .into_iter()
                    .next()
                    .unwrap_or_else(|| p.name.clone());
                out.push(Parameter::new(p.type_ref.to_string(), name));
            }
        }
    }
    out
}

fn class_endpoints(class: &ClassSketch, profile: &LanguageProfile) -> Vec<EndpointDecl> {
    if !class.has_any_annotation(&profile.controller_markers) {
        return Vec::new();
    }
    let bases: Vec<String> = class
        .annotations
        .iter()
        .find_map(|a| {
            profile
                .endpoint_marker(&a.name)
                .map(|m| mapping_paths(a, &m.path_keys, class))
        })
        .unwrap_or_else(|| vec![String::new()]);

    let mut out = Vec::new();
    for method in &class.methods {
        let Some((annotation, marker)) = method
            .annotations
            .iter()
            .find_map(|a| profile.endpoint_marker(&a.name).map(|m| (a, m)))
        else {
            continue;
        };
        let paths = mapping_paths(annotation, &marker.path_keys, class);
        let parameters = endpoint_parameters(method, profile);
        let request_type = method
            .params
            .iter()
            .find(|p| p.annotations.iter().any(|a| profile.request_body_markers.contains(&a.name)))
            .map(|p| p.type_ref.to_string());
        let response_types = method.return_type.names().into_iter().map(str::to_string).collect();
        let request_types = method
            .params
            .iter()
            .flat_map(|p| p.type_ref.names())
            .map(str::to_string)
            .collect();
        for base in &bases {
            for path in &paths {
                for http_method in mapping_methods(annotation, profile) {
                    out.push(EndpointDecl {
                        endpoint: Endpoint {
                            url_path: join_paths(base, path),
                            http_method,
                            return_type: method.return_type.to_string(),
                            parameters: parameters.clone(),
                            declaring_unit: class.locator(method.line),
                        },
                        request_type: request_type.clone(),
                        response_types: Vec::clone(&response_types),
                        request_types: Vec::clone(&request_types),
                    });
                }
            }
        }
    }
    out
}

/// Endpoints of one microservice, failing on the first pair of handlers that
/// map the same method and normalized path.
pub fn extract_endpoints(
    sketches: &[ClassSketch],
    profile: &LanguageProfile,
) -> Result<Vec<EndpointDecl>, ConflictingMapping> {
    let (decls, conflicts) = extract_endpoints_lenient(sketches, profile);
    match conflicts.into_iter().next() {
        Some(c) => Err(c),
        None => Ok(decls),
    }
}

/// Like [`extract_endpoints`] but keeps the first handler of each conflicting
/// mapping and reports the rest.
pub fn extract_endpoints_lenient(
    sketches: &[ClassSketch],
    profile: &LanguageProfile,
) -> (Vec<EndpointDecl>, Vec<ConflictingMapping>) {
    let mut seen: BTreeMap<(HttpMethod, String), String> = BTreeMap::new();
    let mut decls = Vec::new();
    let mut conflicts = Vec::new();
    for decl in sketches.iter().flat_map(|c| class_endpoints(c, profile)) {
        let key = (decl.endpoint.http_method, normalize_path(&decl.endpoint.url_path));
        match seen.get(&key) {
            Some(first) => conflicts.push(ConflictingMapping {
                method: key.0,
                path: decl.endpoint.url_path.clone(),
                first: first.clone(),
                second: decl.endpoint.declaring_unit.clone(),
            }),
            None => {
                seen.insert(key, decl.endpoint.declaring_unit.clone());
                decls.push(decl);
            }
        }
    }
    (decls, conflicts)
}
