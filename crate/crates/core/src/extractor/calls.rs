use super::lexer::{Token, TokenKind};
use super::sketch::{split_top_level, ClassSketch, Invocation, MethodSketch};
use crate::matcher::{normalize_path, split_host, PLACEHOLDER};
use crate::model::{CallSite, HttpMethod, Parameter};
use crate::profile::{CallMarker, LanguageProfile};
use crate::warning::Warning;

/// An outbound HTTP request found in source, before matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCall {
    pub http_method: HttpMethod,
    /// URL with every non-literal fragment replaced by `{*}`.
    pub url_expression: String,
    pub return_type: String,
    pub origin: String,
    pub target_hint: Option<String>,
    pub parameters: Vec<Parameter>,
}

impl RawCall {
    pub fn into_call_site(self) -> CallSite {
        CallSite {
            target_hint: self.target_hint,
            url_path: normalize_path(&self.url_expression),
            http_method: self.http_method,
            return_type: self.return_type,
            parameters: self.parameters,
            resolved_target: None,
            origin: self.origin,
        }
    }
}

const MAX_INDIRECTION: usize = 4;

struct Scope<'a> {
    class: &'a ClassSketch,
    method: &'a MethodSketch,
}

impl Scope<'_> {
    fn declared_type(&self, name: &str) -> Option<&str> {
        self.method
            .locals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.as_str())
            .or_else(|| {
                self.method
                    .params
                    .iter()
                    .find(|p| p.name == name)
                    .map(|p| p.type_ref.name.as_str())
            })
            .or_else(|| self.class.field_type(name))
    }

    /// Expression last assigned to `name` before `position`, falling back to
    /// a field initializer.
    fn value_of(&self, name: &str, position: usize) -> Option<(&[Token], usize)> {
        self.method
            .assignments
            .iter()
            .rev()
            .find(|a| a.name == name && a.position < position)
            .map(|a| (a.expr.as_slice(), a.position))
            .or_else(|| {
                self.class
                    .constants
                    .iter()
                    .find(|c| c.name == name)
                    .map(|c| (c.expr.as_slice(), usize::MAX))
            })
    }

    fn evaluate(&self, tokens: &[Token], position: usize, depth: usize, out: &mut Evaluated) {
        for part in split_top_level(tokens, '+') {
            self.operand(part, position, depth, out);
        }
    }

    fn operand(&self, part: &[Token], position: usize, depth: usize, out: &mut Evaluated) {
        match part {
            [] => {}
            [t] if matches!(t.kind, TokenKind::Str | TokenKind::Char | TokenKind::Number) => {
                out.text.push_str(&t.text)
            }
            [first, .., last] if first.is_punct('(') && last.is_punct(')') && wraps(part) => {
                self.evaluate(&part[1..part.len() - 1], position, depth, out)
            }
            _ => {
                let name = match part {
                    [t] => t.ident(),
                    [this, dot, t] if this.is_ident("this") && dot.is_punct('.') => t.ident(),
                    [owner, dot, t]
                        if dot.is_punct('.')
                            && owner.ident().is_some_and(|o| o == self.class.simple_name) =>
                    {
                        t.ident()
                    }
                    _ => None,
                };
                if depth < MAX_INDIRECTION {
                    if let Some((expr, at)) = name.and_then(|n| self.value_of(n, position)) {
                        let at = if at == usize::MAX { position } else { at };
                        self.evaluate(expr, at, depth + 1, out);
                        return;
                    }
                }
                out.text.push_str(PLACEHOLDER);
                out.parameters.push(Parameter::new("Object", token_text(part)));
            }
        }
    }
}

#[derive(Default)]
struct Evaluated {
    text: String,
    parameters: Vec<Parameter>,
}

/// Whether the outer parentheses of `part` enclose all of it.
fn wraps(part: &[Token]) -> bool {
    let mut depth = 0;
    for (i, t) in part.iter().enumerate() {
        if t.is_punct('(') {
            depth += 1;
        } else if t.is_punct(')') {
            depth -= 1;
            if depth == 0 && i + 1 != part.len() {
                return false;
            }
        }
    }
    true
}

fn token_text(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| match t.kind {
            TokenKind::Str => format!("\"{}\"", t.text),
            _ => t.text.clone(),
        })
        .collect()
}

/// Response type named by a `Foo.class` or `new ParameterizedTypeReference<Foo>() {}`
/// argument.
fn response_type(arg: &[Token]) -> String {
    if let [rest @ .., dot, class] = arg {
        if dot.is_punct('.') && class.is_ident("class") {
            let text = token_text(rest);
            return text.rsplit('.').next().unwrap_or(&text).to_string();
        }
    }
    let open = arg.iter().position(|t| t.is_punct('<'));
    let close = arg.iter().rposition(|t| t.is_punct('>'));
    match (open, close) {
        (Some(o), Some(c)) if c > o + 1 => token_text(&arg[o + 1..c]),
        _ => "Object".to_string(),
    }
}

fn is_client(scope: &Scope<'_>, invocation: &Invocation, profile: &LanguageProfile) -> bool {
    let Some(receiver) = invocation.receiver.as_deref() else {
        return false;
    };
    if let Some(ty) = scope.declared_type(receiver) {
        if profile.client_types.iter().any(|c| c == ty) {
            return true;
        }
    }
    let lowered = receiver.to_lowercase();
    profile
        .client_types
        .iter()
        .any(|c| lowered.contains(&c.to_lowercase()))
}

fn raw_call(
    scope: &Scope<'_>,
    invocation: &Invocation,
    marker: &CallMarker,
) -> Result<RawCall, String> {
    let origin = scope.class.locator(invocation.line);
    let url_arg = invocation
        .arguments
        .get(marker.url_argument)
        .ok_or_else(|| format!("`{}` at {origin} has no URL argument", invocation.name))?;
    let http_method = match (marker.method, marker.method_argument) {
        (Some(m), _) => m,
        (None, Some(idx)) => invocation
            .arguments
            .get(idx)
            .and_then(|arg| arg.iter().rev().find_map(Token::ident))
            .and_then(|id| id.parse().ok())
            .ok_or_else(|| format!("`{}` at {origin} has no literal HTTP method", invocation.name))?,
        (None, None) => unreachable!("validated profiles name a method source"),
    };
    let mut evaluated = Evaluated::default();
    scope.evaluate(url_arg, invocation.position, 0, &mut evaluated);
    let return_type = match marker.response_type_argument {
        Some(idx) => invocation
            .arguments
            .get(idx)
            .map(|a| response_type(a))
            .unwrap_or_else(|| "Object".to_string()),
        None => "void".to_string(),
    };
    let (target_hint, _) = split_host(&evaluated.text);
    Ok(RawCall {
        http_method,
        url_expression: evaluated.text,
        return_type,
        origin,
        target_hint,
        parameters: evaluated.parameters,
    })
}

/// Calls issued through the profile's client types, with warnings for
/// invocations whose method cannot be determined.
pub fn extract_calls_reporting(
    sketches: &[ClassSketch],
    profile: &LanguageProfile,
) -> (Vec<RawCall>, Vec<Warning>) {
    let mut calls = Vec::new();
    let mut warnings = Vec::new();
    for class in sketches {
        for method in &class.methods {
            let scope = Scope { class, method };
            for invocation in &method.invocations {
                let Some(marker) = profile.call_marker(&invocation.name) else {
                    continue;
                };
                if !is_client(&scope, invocation, profile) {
                    continue;
                }
                match raw_call(&scope, invocation, marker) {
                    Ok(call) => calls.push(call),
                    Err(message) => warnings.push(Warning::new(&class.file, message)),
                }
            }
        }
    }
    (calls, warnings)
}

pub fn extract_calls(sketches: &[ClassSketch], profile: &LanguageProfile) -> Vec<RawCall> {
    extract_calls_reporting(sketches, profile).0
}

#[cfg(test)]
mod tests {
    use std::path::PathBuf;

    use super::super::lexer::tokenize;
    use super::super::sketch::parse_compilation_unit;
    use super::*;

    fn calls(src: &str) -> Vec<RawCall> {
        let profile = LanguageProfile::spring_java();
        let toks = tokenize(src).unwrap();
        let filter = |n: &str| profile.call_marker(n).is_some();
        let sketches = parse_compilation_unit(&toks, PathBuf::from("S.java"), &filter).unwrap();
        extract_calls(&sketches, &profile)
    }

    #[test]
    fn concatenation_becomes_placeholder() {
        let c = calls(
            r#"class S { RestTemplate restTemplate;
                 Station f(String id) { return restTemplate.getForObject("http://ts-station-service/stations/" + id, Station.class); } }"#,
        );
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].http_method, HttpMethod::Get);
        assert_eq!(c[0].url_expression, "http://ts-station-service/stations/{*}");
        assert_eq!(c[0].target_hint.as_deref(), Some("ts-station-service"));
        assert_eq!(c[0].return_type, "Station");
        assert_eq!(c[0].parameters, vec![Parameter::new("Object", "id")]);
        assert_eq!(c[0].origin, "S.java:2");
    }

    #[test]
    fn no_client_usage() {
        assert!(calls("class S { Map m; void f() { m.put(\"a\", 1); } }").is_empty());
        assert!(calls("class S { void f() { } }").is_empty());
    }

    #[test]
    fn locals_and_constants_are_followed() {
        let c = calls(
            r#"class S {
                 private static final String BASE = "http://svc";
                 private final RestTemplate rest = new RestTemplate();
                 void f(Order o) {
                   String url = BASE + "/a";
                   url = url + "/" + o.getId();
                   rest.postForObject(url, o, Result[].class);
                   rest.delete(this.BASE + ("/b/" + 3));
                 }
               }"#,
        );
        assert_eq!(c[0].url_expression, "http://svc/a/{*}");
        assert_eq!(c[0].http_method, HttpMethod::Post);
        assert_eq!(c[0].return_type, "Result[]");
        assert_eq!(c[0].parameters, vec![Parameter::new("Object", "o.getId()")]);
        assert_eq!(c[1].url_expression, "http://svc/b/3");
        assert_eq!(c[1].return_type, "void");
    }

    #[test]
    fn exchange_reads_method_argument() {
        let c = calls(
            r#"class S { RestTemplate restTemplate;
                 void f() {
                   restTemplate.exchange("http://a/x/{id}", HttpMethod.DELETE, null, Void.class, 1);
                   restTemplate.exchange(base + "/y", org.springframework.http.HttpMethod.PATCH, e, new ParameterizedTypeReference<Response<List<Foo>>>() {});
                   restTemplate.exchange("http://a/z", method, e, Foo.class);
                 } }"#,
        );
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].http_method, HttpMethod::Delete);
        assert_eq!(c[0].return_type, "Void");
        assert_eq!(c[1].http_method, HttpMethod::Patch);
        assert_eq!(c[1].url_expression, "{*}/y");
        assert_eq!(c[1].target_hint, None);
        assert_eq!(c[1].return_type, "Response<List<Foo>>");
    }

    #[test]
    fn receiver_named_after_client() {
        let c = calls("class S { void f() { getRestTemplate().put(\"/x\", 1); restTemplate.put(\"/y\", 2); } }");
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].url_expression, "/y");
        assert_eq!(c[0].clone().into_call_site().url_path, "/y");
    }
}
