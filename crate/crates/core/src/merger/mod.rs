//! Cross-context entity merging.
//!
//! Entities from different microservices that look alike (similar names and
//! compatible fields) are merge candidates. Candidates are grouped with
//! union-find, each group collapses onto one representative, and
//! relationships follow their endpoints. The result is the holistic context
//! map of the system.

mod similarity;
mod union_find;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::model::{DataEntity, EntityId, Relationship, SystemModel};

pub use similarity::{name_similarity, strip_suffix, tokenize, TypeCanon, IGNORED_SUFFIXES};
pub use union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeThresholds {
    pub name: f64,
    pub field: f64,
}

impl Default for MergeThresholds {
    fn default() -> Self {
        MergeThresholds {
            name: 0.85,
            field: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{which} similarity threshold {value} is outside [0, 1]")]
pub struct ThresholdOutOfRange {
    pub which: &'static str,
    pub value: f64,
}

impl MergeThresholds {
    pub fn new(name: f64, field: f64) -> Result<Self, ThresholdOutOfRange> {
        for (which, value) in [("name", name), ("field", field)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ThresholdOutOfRange { which, value });
            }
        }
        Ok(MergeThresholds { name, field })
    }
}

/// Two entities judged to describe the same concept. `first < second`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePair {
    pub first: EntityId,
    pub second: EntityId,
    pub name_score: f64,
    pub field_score: f64,
}

/// All cross-microservice entity pairs whose names are similar enough and
/// whose fields are compatible or nested. Sorted by `(first, second)`.
pub fn find_merge_candidates(
    system: &SystemModel,
    thresholds: MergeThresholds,
    canon: &TypeCanon,
) -> Vec<CandidatePair> {
    let mut entities: Vec<&DataEntity> = system.entities().collect();
    entities.sort_by_key(|e| e.id());
    let mut pairs: Vec<CandidatePair> = (0..entities.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let entities = &entities;
            (i + 1..entities.len()).filter_map(move |j| {
                let (a, b) = (entities[i], entities[j]);
                if a.owner == b.owner {
                    return None;
                }
                let name_score = name_similarity(&a.simple_name, &b.simple_name);
                if name_score < thresholds.name {
                    return None;
                }
                let field_score = canon.field_compatibility(a, b);
                (field_score >= thresholds.field || canon.fields_nested(a, b)).then(|| {
                    CandidatePair {
                        first: a.id(),
                        second: b.id(),
                        name_score,
                        field_score,
                    }
                })
            })
        })
        .collect();
    pairs.sort_by(|x, y| (&x.first, &x.second).cmp(&(&y.first, &y.second)));
    pairs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeGroup {
    pub representative: EntityId,
    /// All members including the representative, sorted.
    pub members: Vec<EntityId>,
}

/// Outcome of entity merging: the post-merge image of every entity and
/// relationship.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MergeResolution {
    entity_map: BTreeMap<EntityId, EntityId>,
    relationship_count: usize,
    merged_relationships: BTreeMap<(EntityId, EntityId), Relationship>,
    groups: Vec<MergeGroup>,
}

impl MergeResolution {
    /// Post-merge representative of an entity. Unknown entities map to
    /// themselves.
    pub fn entity_image<'a>(&'a self, entity: &'a EntityId) -> &'a EntityId {
        self.entity_map.get(entity).unwrap_or(entity)
    }

    /// Post-merge image of a relationship: the merged relationship between
    /// the images of its endpoints.
    pub fn relationship_image(&self, rel: &Relationship) -> Option<&Relationship> {
        let key = (
            self.entity_image(&rel.source).clone(),
            self.entity_image(&rel.destination).clone(),
        );
        self.merged_relationships.get(&key)
    }

    pub fn entity_map(&self) -> &BTreeMap<EntityId, EntityId> {
        &self.entity_map
    }

    /// DE: every entity after merging.
    pub fn merged_entities(&self) -> BTreeSet<&EntityId> {
        self.entity_map.values().collect()
    }

    /// RDE: every relationship after merging, keyed by its endpoints.
    pub fn merged_relationships(&self) -> impl Iterator<Item = &Relationship> {
        self.merged_relationships.values()
    }

    pub fn groups(&self) -> &[MergeGroup] {
        &self.groups
    }

    pub fn total_entities(&self) -> usize {
        self.entity_map.len()
    }

    pub fn total_relationships(&self) -> usize {
        self.relationship_count
    }

    /// Number of entities absorbed into another one.
    pub fn merge_count(&self) -> usize {
        self.groups.iter().map(|g| g.members.len() - 1).sum()
    }

    /// `(representative, member)` for every absorbed member.
    pub fn absorptions(&self) -> impl Iterator<Item = (&EntityId, &EntityId)> {
        self.groups.iter().flat_map(|g| {
            g.members
                .iter()
                .filter(move |m| **m != g.representative)
                .map(move |m| (&g.representative, m))
        })
    }

    /// Text lines `<rep> <= <member>`, one per absorption.
    pub fn audit_lines(&self) -> Vec<String> {
        self.absorptions()
            .map(|(rep, member)| format!("{rep} <= {member}"))
            .collect()
    }
}

/// Builds the merge resolution from candidate pairs.
///
/// Pairs that name entities absent from the system are ignored. The
/// representative of a group is the member with the most fields, ties going
/// to the smallest `(owner, qualified_name)`.
pub fn build_resolution<'a, I>(system: &SystemModel, pairs: I) -> MergeResolution
where
    I: IntoIterator<Item = (&'a EntityId, &'a EntityId)>,
{
    let mut entities: Vec<&DataEntity> = system.entities().collect();
    entities.sort_by_key(|e| e.id());
    let ids: Vec<EntityId> = entities.iter().map(|e| e.id()).collect();
    let index: BTreeMap<&EntityId, usize> = ids.iter().enumerate().map(|(i, id)| (id, i)).collect();

    let mut uf = UnionFind::new(ids.len());
    for (a, b) in pairs {
        if let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) {
            uf.union(i, j);
        }
    }

    let mut entity_map: BTreeMap<EntityId, EntityId> =
        ids.iter().map(|id| (id.clone(), id.clone())).collect();
    let mut groups = Vec::new();
    for members in uf.groups() {
        let rep = *members
            .iter()
            .min_by(|&&x, &&y| {
                entities[y]
                    .fields
                    .len()
                    .cmp(&entities[x].fields.len())
                    .then_with(|| ids[x].cmp(&ids[y]))
            })
            .expect("groups are non-empty");
        for &m in &members {
            entity_map.insert(ids[m].clone(), ids[rep].clone());
        }
        groups.push(MergeGroup {
            representative: ids[rep].clone(),
            members: members.iter().map(|&m| ids[m].clone()).collect(),
        });
    }

    let mut relationship_count = 0;
    let mut by_key: BTreeMap<(EntityId, EntityId), Vec<&Relationship>> = BTreeMap::new();
    for rel in system.relationships() {
        let key = (
            entity_map.get(&rel.source).unwrap_or(&rel.source).clone(),
            entity_map
                .get(&rel.destination)
                .unwrap_or(&rel.destination)
                .clone(),
        );
        relationship_count += 1;
        by_key.entry(key).or_default().push(rel);
    }
    let merged_relationships = by_key
        .into_iter()
        .map(|(key, mut rels)| {
            // Prefer a relationship that already starts at the representative.
            rels.sort_by(|a, b| {
                (a.source != key.0, &a.source, &a.via_field).cmp(&(
                    b.source != key.0,
                    &b.source,
                    &b.via_field,
                ))
            });
            let image = Relationship::new(key.0.clone(), key.1.clone(), rels[0].via_field.clone());
            (key, image)
        })
        .collect();

    MergeResolution {
        entity_map,
        relationship_count,
        merged_relationships,
        groups,
    }
}

/// Convenience wrapper over [`find_merge_candidates`] and [`build_resolution`].
pub fn merge_system(
    system: &SystemModel,
    thresholds: MergeThresholds,
    canon: &TypeCanon,
) -> (Vec<CandidatePair>, MergeResolution) {
    let candidates = find_merge_candidates(system, thresholds, canon);
    let resolution = build_resolution(system, candidates.iter().map(|c| (&c.first, &c.second)));
    (candidates, resolution)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextEntity {
    /// The representative entity; its fields are the merged entity's fields.
    pub entity: DataEntity,
    /// Every pre-merge entity folded into this one, including itself.
    pub provenance: Vec<EntityId>,
}

/// The post-merge data model of the whole system.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ContextMap {
    pub entities: Vec<ContextEntity>,
    pub relationships: Vec<Relationship>,
}

pub fn build_context_map(system: &SystemModel, resolution: &MergeResolution) -> ContextMap {
    let mut provenance: BTreeMap<&EntityId, Vec<EntityId>> = BTreeMap::new();
    for (member, rep) in resolution.entity_map() {
        provenance.entry(rep).or_default().push(member.clone());
    }
    let entities = provenance
        .into_iter()
        .filter_map(|(rep, members)| {
            let mut entity = system.entity(rep)?.clone();
            entity.relationships = resolution
                .merged_relationships()
                .filter(|r| &r.source == rep)
                .cloned()
                .collect();
            Some(ContextEntity {
                entity,
                provenance: members,
            })
        })
        .collect();
    ContextMap {
        entities,
        relationships: resolution.merged_relationships().cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Field, Microservice, Persistence};
    use crate::profile::LanguageProfile;
    use crate::sample::{demonstrating_label, demonstrating_system};

    fn canon() -> TypeCanon {
        LanguageProfile::spring_java().type_canon()
    }

    fn food(owner: &str, extra: bool) -> DataEntity {
        let mut e = DataEntity::new(owner, "x.Food", Persistence::Relational)
            .with_fields([Field::new("UUID", "id"), Field::new("String", "name")]);
        if extra {
            e.fields.push(Field::new("int", "price"));
        }
        e
    }

    fn system_of(entities: Vec<DataEntity>) -> SystemModel {
        let mut model = SystemModel::new("t");
        for e in entities {
            let idx = match model.microservices.iter().position(|m| m.name == e.owner) {
                Some(i) => i,
                None => {
                    model.microservices.push(Microservice::new(e.owner.clone()));
                    model.microservices.len() - 1
                }
            };
            model.microservices[idx].persistent_entities.push(e);
        }
        model.canonicalized()
    }

    #[test]
    fn identical_entities_in_two_services() {
        let sys = system_of(vec![food("a", false), food("b", false)]);
        let pairs = find_merge_candidates(&sys, MergeThresholds::default(), &canon());
        assert_eq!(pairs.len(), 1);
    }

    #[test]
    fn same_service_never_merges() {
        let mut second = food("a", false);
        second.qualified_name = "y.Food".into();
        let sys = system_of(vec![food("a", false), second]);
        assert!(find_merge_candidates(&sys, MergeThresholds::default(), &canon()).is_empty());
    }

    #[test]
    fn no_candidates_is_identity() {
        let sys = system_of(vec![food("a", false)]);
        let res = build_resolution(&sys, std::iter::empty());
        assert_eq!(res.merge_count(), 0);
        assert_eq!(res.merged_entities().len(), 1);
        assert_eq!(res.entity_image(&EntityId::new("a", "x.Food")), &EntityId::new("a", "x.Food"));
    }

    #[test]
    fn representative_has_most_fields() {
        let sys = system_of(vec![food("a", false), food("b", true)]);
        let (_, res) = merge_system(&sys, MergeThresholds::default(), &canon());
        assert_eq!(res.groups()[0].representative, EntityId::new("b", "x.Food"));
        assert_eq!(res.audit_lines(), vec!["b/x.Food <= a/x.Food".to_string()]);
    }

    #[test]
    fn transitive_groups_through_union_find() {
        let a = EntityId::new("a", "x.Food");
        let b = EntityId::new("b", "x.Food");
        let c = EntityId::new("c", "x.Food");
        let sys = system_of(vec![food("a", false), food("b", false), food("c", false)]);
        let res = build_resolution(&sys, [(&a, &b), (&b, &c)]);
        assert_eq!(res.entity_image(&a), res.entity_image(&c));
        assert_eq!(res.merge_count(), 2);
        assert_eq!(res.merged_entities().len(), 1);
    }

    #[test]
    fn thresholds_validate() {
        assert!(MergeThresholds::new(2.0, 0.5).is_err());
        assert!(MergeThresholds::new(0.5, -0.1).is_err());
        assert!(MergeThresholds::new(1.0, 0.0).is_ok());
    }

    fn label_pair(p: &CandidatePair) -> (&'static str, &'static str) {
        let a = demonstrating_label(&p.first).unwrap();
        let b = demonstrating_label(&p.second).unwrap();
        (a.min(b), a.max(b))
    }

    #[test]
    fn demonstrating_example_candidates() {
        let sys = demonstrating_system();
        let pairs = find_merge_candidates(&sys, MergeThresholds::default(), &canon());
        let mut labels: Vec<_> = pairs.iter().map(label_pair).collect();
        labels.sort();
        let mut expected = vec![
            ("T-1.1", "T-2.1"),
            ("P-1.3", "P-2.1"),
            ("P-2.3", "T-3.2"),
            ("P-2.4", "P-4.1"),
        ];
        expected.sort();
        assert_eq!(labels, expected);
    }

    #[test]
    fn demonstrating_example_context_map() {
        let sys = demonstrating_system();
        let (_, res) = merge_system(&sys, MergeThresholds::default(), &canon());
        assert_eq!(res.merged_entities().len(), 13);
        let map = build_context_map(&sys, &res);
        assert_eq!(map.entities.len(), 13);
        assert_eq!(map.relationships.len(), 13);
        for r in &map.relationships {
            assert!(map.entities.iter().any(|e| e.entity.id() == r.source));
            assert!(map.entities.iter().any(|e| e.entity.id() == r.destination));
        }
        let collapsed: Vec<_> = sys
            .relationships()
            .filter(|r| {
                sys.relationships()
                    .any(|o| o != *r && res.relationship_image(o) == res.relationship_image(r))
            })
            .map(|r| (demonstrating_label(&r.source).unwrap(), demonstrating_label(&r.destination).unwrap()))
            .collect();
        assert_eq!(collapsed, vec![("T-1.1", "P-1.3"), ("T-2.1", "P-2.1")]);
    }

    #[test]
    fn empty_system_gives_empty_map() {
        let sys = SystemModel::new("e");
        let (_, res) = merge_system(&sys, MergeThresholds::default(), &canon());
        assert_eq!(build_context_map(&sys, &res), ContextMap::default());
    }

    #[test]
    fn resolution_maps_are_idempotent() {
        let sys = demonstrating_system();
        let (_, res) = merge_system(&sys, MergeThresholds::default(), &canon());
        for rep in res.entity_map().values() {
            assert_eq!(res.entity_image(rep), rep);
        }
        for rel in sys.relationships() {
            let image = res.relationship_image(rel).unwrap();
            assert_eq!(res.relationship_image(image), Some(image));
            assert_eq!(&image.source, res.entity_image(&rel.source));
            assert_eq!(&image.destination, res.entity_image(&rel.destination));
        }
    }
}
