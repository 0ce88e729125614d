//! Framework conventions that drive extraction.
//!
//! A profile names the annotations that mark controllers, endpoint handlers,
//! persistent and data classes, and the client invocations that issue HTTP
//! requests. The built-in `spring-java` profile covers Spring Boot with JPA,
//! Spring Data MongoDB, Lombok and `RestTemplate`. Other profiles can be
//! loaded from TOML.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::merger::TypeCanon;
use crate::model::{HttpMethod, Persistence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointMarker {
    pub annotation: String,
    /// Annotation attributes holding the path; an unnamed argument counts as
    /// the first key.
    #[serde(default = "default_path_keys")]
    pub path_keys: Vec<String>,
    /// Fixed method. When absent the method is read from `method_key`.
    #[serde(default)]
    pub method: Option<HttpMethod>,
}

fn default_path_keys() -> Vec<String> {
    vec!["value".into(), "path".into()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallMarker {
    pub invocation: String,
    /// Fixed method. When absent the method is read from `method_argument`.
    #[serde(default)]
    pub method: Option<HttpMethod>,
    #[serde(default)]
    pub url_argument: usize,
    #[serde(default)]
    pub method_argument: Option<usize>,
    /// Argument holding the response type (`Foo.class`).
    #[serde(default)]
    pub response_type_argument: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistenceMarker {
    pub annotation: String,
    pub persistence: Persistence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageProfile {
    pub name: String,
    pub source_extensions: Vec<String>,
    pub controller_markers: Vec<String>,
    pub endpoint_markers: Vec<EndpointMarker>,
    #[serde(default = "default_method_key")]
    pub method_key: String,
    pub path_variable_markers: Vec<String>,
    pub request_param_markers: Vec<String>,
    pub request_body_markers: Vec<String>,
    /// Types whose instances issue HTTP calls.
    pub client_types: Vec<String>,
    pub call_markers: Vec<CallMarker>,
    pub persistence_markers: Vec<PersistenceMarker>,
    pub data_class_markers: Vec<String>,
    /// `[alias, canonical]` pairs for field type comparison.
    #[serde(default)]
    pub type_synonyms: Vec<(String, String)>,
}

fn default_method_key() -> String {
    "method".into()
}

#[derive(Debug, thiserror::Error)]
pub enum ProfileError {
    #[error("unknown profile `{0}`")]
    Unknown(String),
    #[error("failed to read profile {path}: {source}")]
    Read {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("malformed profile: {0}")]
    Malformed(#[from] toml::de::Error),
    #[error("invalid profile `{profile}`: {message}")]
    Invalid { profile: String, message: String },
}

impl LanguageProfile {
    pub const DEFAULT_NAME: &'static str = "spring-java";

    pub fn builtin(name: &str) -> Result<Self, ProfileError> {
        match name {
            Self::DEFAULT_NAME => Ok(Self::spring_java()),
            other => Err(ProfileError::Unknown(other.to_string())),
        }
    }

    pub fn spring_java() -> Self {
        use HttpMethod::*;
        let endpoint = |annotation: &str, method: Option<HttpMethod>| EndpointMarker {
            annotation: annotation.into(),
            path_keys: default_path_keys(),
            method,
        };
        let call = |invocation: &str, method: Option<HttpMethod>, response: Option<usize>| CallMarker {
            invocation: invocation.into(),
            method,
            url_argument: 0,
            method_argument: if method.is_none() { Some(1) } else { None },
            response_type_argument: response,
        };
        let strings = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let mut type_synonyms = Vec::new();
        for (canonical, aliases) in [
            ("integer", &["int", "Integer", "long", "Long", "short", "Short", "byte", "Byte", "BigInteger"][..]),
            ("decimal", &["double", "Double", "float", "Float", "BigDecimal"][..]),
            ("boolean", &["boolean", "Boolean"][..]),
            ("text", &["String", "CharSequence", "char", "Character"][..]),
        ] {
            for alias in aliases {
                type_synonyms.push((alias.to_string(), canonical.to_string()));
            }
        }
        LanguageProfile {
            name: Self::DEFAULT_NAME.into(),
            source_extensions: strings(&["java"]),
            controller_markers: strings(&["RestController", "Controller"]),
            endpoint_markers: vec![
                endpoint("RequestMapping", None),
                endpoint("GetMapping", Some(Get)),
                endpoint("PostMapping", Some(Post)),
                endpoint("PutMapping", Some(Put)),
                endpoint("DeleteMapping", Some(Delete)),
                endpoint("PatchMapping", Some(Patch)),
            ],
            method_key: default_method_key(),
            path_variable_markers: strings(&["PathVariable"]),
            request_param_markers: strings(&["RequestParam"]),
            request_body_markers: strings(&["RequestBody"]),
            client_types: strings(&["RestTemplate"]),
            call_markers: vec![
                call("getForObject", Some(Get), Some(1)),
                call("getForEntity", Some(Get), Some(1)),
                call("postForObject", Some(Post), Some(2)),
                call("postForEntity", Some(Post), Some(2)),
                call("put", Some(Put), None),
                call("delete", Some(Delete), None),
                call("exchange", None, Some(3)),
            ],
            persistence_markers: vec![
                PersistenceMarker {
                    annotation: "Entity".into(),
                    persistence: Persistence::Relational,
                },
                PersistenceMarker {
                    annotation: "Document".into(),
                    persistence: Persistence::NonRelational,
                },
            ],
            data_class_markers: strings(&["Data"]),
            type_synonyms,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ProfileError> {
        let profile: LanguageProfile = toml::from_str(text)?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn from_file(path: &Path) -> Result<Self, ProfileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ProfileError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("profiles always serialize")
    }

    /// Marker lists must be non-empty and free of duplicates.
    pub fn validate(&self) -> Result<(), ProfileError> {
        let invalid = |message: String| ProfileError::Invalid {
            profile: self.name.clone(),
            message,
        };
        let lists: [(&str, Vec<&str>); 5] = [
            (
                "endpoint_markers",
                self.endpoint_markers.iter().map(|m| m.annotation.as_str()).collect(),
            ),
            (
                "call_markers",
                self.call_markers.iter().map(|m| m.invocation.as_str()).collect(),
            ),
            (
                "persistence_markers",
                self.persistence_markers.iter().map(|m| m.annotation.as_str()).collect(),
            ),
            (
                "data_class_markers",
                self.data_class_markers.iter().map(String::as_str).collect(),
            ),
            (
                "controller_markers",
                self.controller_markers.iter().map(String::as_str).collect(),
            ),
        ];
        for (list, names) in lists {
            if names.is_empty() {
                return Err(invalid(format!("{list} must not be empty")));
            }
            let mut seen = BTreeSet::new();
            for name in names {
                if !seen.insert(name) {
                    return Err(invalid(format!("{list} lists `{name}` twice")));
                }
            }
        }
        if self.source_extensions.is_empty() {
            return Err(invalid("source_extensions must not be empty".into()));
        }
        for marker in &self.call_markers {
            if marker.method.is_none() && marker.method_argument.is_none() {
                return Err(invalid(format!(
                    "call marker `{}` needs a method or a method_argument",
                    marker.invocation
                )));
            }
        }
        if let Some(p) = self
            .persistence_markers
            .iter()
            .find(|p| !p.persistence.is_persistent())
        {
            return Err(invalid(format!(
                "persistence marker `{}` cannot be TRANSIENT",
                p.annotation
            )));
        }
        Ok(())
    }

    pub fn type_canon(&self) -> TypeCanon {
        TypeCanon::new(self.type_synonyms.iter().cloned())
    }

    pub fn persistence_of(&self, annotation: &str) -> Option<Persistence> {
        self.persistence_markers
            .iter()
            .find(|m| m.annotation == annotation)
            .map(|m| m.persistence)
    }

    pub fn endpoint_marker(&self, annotation: &str) -> Option<&EndpointMarker> {
        self.endpoint_markers.iter().find(|m| m.annotation == annotation)
    }

    pub fn call_marker(&self, invocation: &str) -> Option<&CallMarker> {
        self.call_markers.iter().find(|m| m.invocation == invocation)
    }

    pub fn is_source_file(&self, path: &Path) -> bool {
        path.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| self.source_extensions.iter().any(|x| x == e))
    }
}

impl Default for LanguageProfile {
    fn default() -> Self {
        Self::spring_java()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_profile_is_valid() {
        LanguageProfile::spring_java().validate().unwrap();
        assert!(matches!(
            LanguageProfile::builtin("go-gin"),
            Err(ProfileError::Unknown(_))
        ));
    }

    #[test]
    fn toml_round_trip() {
        let p = LanguageProfile::spring_java();
        let back = LanguageProfile::from_toml_str(&p.to_toml()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn duplicate_marker_rejected() {
        let mut p = LanguageProfile::spring_java();
        p.data_class_markers.push("Data".into());
        let err = LanguageProfile::from_toml_str(&p.to_toml()).unwrap_err();
        assert!(err.to_string().contains("twice"), "{err}");
    }

    #[test]
    fn empty_marker_list_rejected() {
        let mut p = LanguageProfile::spring_java();
        p.persistence_markers.clear();
        assert!(p.validate().is_err());
    }

    #[test]
    fn minimal_toml_profile() {
        let text = r#"
name = "mini"
source_extensions = ["java"]
controller_markers = ["RestController"]
path_variable_markers = ["PathVariable"]
request_param_markers = []
request_body_markers = []
client_types = ["WebClient"]
data_class_markers = ["Value"]

[[endpoint_markers]]
annotation = "GetMapping"
method = "GET"

[[call_markers]]
invocation = "get"
method = "GET"

[[persistence_markers]]
annotation = "Table"
persistence = "RELATIONAL"
"#;
        let p = LanguageProfile::from_toml_str(text).unwrap();
        assert_eq!(p.endpoint_markers[0].path_keys, ["value", "path"]);
        assert_eq!(p.method_key, "method");
        assert_eq!(p.persistence_of("Table"), Some(Persistence::Relational));
    }
}
