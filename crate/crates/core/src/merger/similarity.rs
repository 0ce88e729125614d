//! Lexical name similarity and field-set compatibility between entities.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::DataEntity;

/// Name suffixes that carry no domain meaning.
pub const IGNORED_SUFFIXES: [&str; 5] = ["Dto", "DTO", "Entity", "Model", "VO"];

/// Removes one ignored suffix (case-insensitively) unless that would leave
/// nothing.
pub fn strip_suffix(name: &str) -> &str {
    for suffix in IGNORED_SUFFIXES {
        if name.len() > suffix.len() {
            let split = name.len() - suffix.len();
            if name.is_char_boundary(split) && name[split..].eq_ignore_ascii_case(suffix) {
                return name[..split].trim_end_matches(['_', '-']);
            }
        }
    }
    name
}

/// Splits camelCase, PascalCase, snake_case and kebab-case names into
/// lowercase tokens. Acronym runs stay together (`HTTPServer` -> `http`,
/// `server`).
pub fn tokenize(name: &str) -> Vec<String> {
    let chars: Vec<char> = name.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            continue;
        }
        if let Some(&prev) = i.checked_sub(1).and_then(|p| chars.get(p)) {
            let next = chars.get(i + 1).copied();
            let boundary = (c.is_uppercase() && prev.is_lowercase())
                || (c.is_uppercase()
                    && prev.is_uppercase()
                    && next.is_some_and(|n| n.is_lowercase()))
                || (c.is_ascii_digit() != prev.is_ascii_digit() && prev.is_alphanumeric());
            if boundary && !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
        }
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Similarity of two entity names in `[0, 1]`.
///
/// Half token-set Jaccard, half normalized Levenshtein similarity, both taken
/// on the suffix-stripped, lowercased names.
pub fn name_similarity(a: &str, b: &str) -> f64 {
    let ta = tokenize(strip_suffix(a));
    let tb = tokenize(strip_suffix(b));
    let sa: BTreeSet<&str> = ta.iter().map(String::as_str).collect();
    let sb: BTreeSet<&str> = tb.iter().map(String::as_str).collect();
    let union = sa.union(&sb).count();
    let jaccard = if union == 0 {
        1.0
    } else {
        sa.intersection(&sb).count() as f64 / union as f64
    };
    let edit = strsim::normalized_levenshtein(&ta.concat(), &tb.concat());
    0.5 * jaccard + 0.5 * edit
}

/// Maps type names that mean the same value domain onto one canonical name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeCanon {
    synonyms: BTreeMap<String, String>,
}

impl TypeCanon {
    pub fn new<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        TypeCanon {
            synonyms: pairs
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        }
    }

    pub fn canonical(&self, type_name: &str) -> String {
        let simple = type_name.rsplit('.').next().unwrap_or(type_name);
        match self.synonyms.get(simple) {
            Some(c) => c.clone(),
            None => simple.to_lowercase(),
        }
    }

    fn field_keys(&self, entity: &DataEntity) -> BTreeSet<(String, String)> {
        entity
            .fields
            .iter()
            .map(|f| {
                let mut ty = self.canonical(&f.type_name);
                if f.is_collection {
                    ty.push_str("[]");
                }
                (f.name.to_lowercase(), ty)
            })
            .collect()
    }

    /// Jaccard over `(lowercased name, canonical type)` field pairs.
    pub fn field_compatibility(&self, a: &DataEntity, b: &DataEntity) -> f64 {
        let ka = self.field_keys(a);
        let kb = self.field_keys(b);
        if ka == kb {
            return 1.0;
        }
        let union = ka.union(&kb).count();
        ka.intersection(&kb).count() as f64 / union as f64
    }

    /// Whether the non-empty field set of one entity is contained in the
    /// other's.
    pub fn fields_nested(&self, a: &DataEntity, b: &DataEntity) -> bool {
        let ka = self.field_keys(a);
        let kb = self.field_keys(b);
        (!ka.is_empty() && ka.is_subset(&kb)) || (!kb.is_empty() && kb.is_subset(&ka))
    }
}
