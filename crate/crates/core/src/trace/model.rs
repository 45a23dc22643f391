use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::NodeId;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hazard {
    pub id: String,
    pub description: String,
    pub severity_note: String,
}

/// How a stated quantity constrains the measured value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// Stated without a direction; never compared.
    Equal,
    AtMost,
    AtLeast,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        }
    }

    /// Whether `measured` satisfies `threshold`. `Equal` always holds.
    pub fn holds(self, measured: f64, threshold: f64) -> bool {
        match self {
            Relation::Equal => true,
            Relation::AtMost => measured <= threshold,
            Relation::AtLeast => measured >= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub relation: Relation,
    pub value: f64,
    pub unit: String,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{} {}",
            self.name,
            self.relation.symbol(),
            self.value,
            self.unit
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SafetyRequirement {
    pub id: String,
    pub text: String,
    pub quantities: Vec<Quantity>,
    pub mitigates: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AtLeast,
    AtMost,
}

impl Direction {
    pub fn relation(self) -> Relation {
        match self {
            Direction::AtLeast => Relation::AtLeast,
            Direction::AtMost => Relation::AtMost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub threshold: f64,
    pub direction: Direction,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MlSafetyRequirement {
    pub id: String,
    pub text: String,
    pub derived_from: Vec<String>,
    pub metric: Metric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidenceItem {
    pub id: String,
    pub kind: String,
    pub supports: Vec<String>,
    pub measured: Vec<Measurement>,
    pub valid: bool,
}

/// Hazards, requirements, ML requirements, evidence and their bindings to
/// GSN nodes. Entity ids are unique across all four kinds.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TraceModel {
    pub hazards: Vec<Hazard>,
    pub requirements: Vec<SafetyRequirement>,
    pub ml_requirements: Vec<MlSafetyRequirement>,
    pub evidence: Vec<EvidenceItem>,
    pub gsn_bindings: BTreeMap<String, NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Hazard,
    Requirement,
    MlRequirement,
    Evidence,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Hazard => "hazard",
            EntityKind::Requirement => "requirement",
            EntityKind::MlRequirement => "ML requirement",
            EntityKind::Evidence => "evidence item",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("duplicate entity id `{0}`")]
    DuplicateId(String),
    #[error("`{from}` refers to {expected} `{to}`, which does not exist")]
    Dangling {
        from: String,
        to: String,
        expected: &'static str,
    },
    #[error("`{0}` must reference at least one entity")]
    EmptyReference(String),
    #[error("unknown evidence id `{0}`")]
    UnknownEvidence(String),
    #[error("unknown entity id `{0}`")]
    UnknownEntity(String),
    #[error("bound node `{0}` does not exist in the case")]
    UnknownNode(NodeId),
    #[error("{entity_kind} `{entity}` cannot be bound to {node_kind} `{node}`")]
    KindMismatch {
        entity: String,
        entity_kind: EntityKind,
        node: NodeId,
        node_kind: String,
    },
}

impl TraceModel {
    pub fn entity_kind(&self, id: &str) -> Option<EntityKind> {
        if self.hazards.iter().any(|h| h.id == id) {
            Some(EntityKind::Hazard)
        } else if self.requirements.iter().any(|r| r.id == id) {
            Some(EntityKind::Requirement)
        } else if self.ml_requirements.iter().any(|m| m.id == id) {
            Some(EntityKind::MlRequirement)
        } else if self.evidence.iter().any(|e| e.id == id) {
            Some(EntityKind::Evidence)
        } else {
            None
        }
    }

    pub fn entity_count(&self) -> usize {
        self.hazards.len()
            + self.requirements.len()
            + self.ml_requirements.len()
            + self.evidence.len()
    }

    pub fn evidence_item(&self, id: &str) -> Option<&EvidenceItem> {
        self.evidence.iter().find(|e| e.id == id)
    }

    pub fn requirement(&self, id: &str) -> Option<&SafetyRequirement> {
        self.requirements.iter().find(|r| r.id == id)
    }

    pub fn ml_requirement(&self, id: &str) -> Option<&MlSafetyRequirement> {
        self.ml_requirements.iter().find(|m| m.id == id)
    }

    /// Checks id uniqueness and that every cross-reference resolves to an
    /// entity of the right kind. Returns every problem found.
    pub fn check(&self) -> Vec<TraceError> {
        let mut errs = Vec::new();
        let mut kinds: HashMap<&str, EntityKind> = HashMap::new();
        let all = self
            .hazards
            .iter()
            .map(|h| (h.id.as_str(), EntityKind::Hazard))
            .chain(
                self.requirements
                    .iter()
                    .map(|r| (r.id.as_str(), EntityKind::Requirement)),
            )
            .chain(
                self.ml_requirements
                    .iter()
                    .map(|m| (m.id.as_str(), EntityKind::MlRequirement)),
            )
            .chain(
                self.evidence
                    .iter()
                    .map(|e| (e.id.as_str(), EntityKind::Evidence)),
            );
        for (id, kind) in all {
            if kinds.insert(id, kind).is_some() {
                errs.push(TraceError::DuplicateId(id.to_string()));
            }
        }
        let mut expect = |from: &str,
                          refs: &[String],
                          ok: &dyn Fn(EntityKind) -> bool,
                          expected: &'static str| {
            if refs.is_empty() {
                errs.push(TraceError::EmptyReference(from.to_string()));
            }
            for r in refs {
                if !kinds.get(r.as_str()).is_some_and(|k| ok(*k)) {
                    errs.push(TraceError::Dangling {
                        from: from.to_string(),
                        to: r.clone(),
                        expected,
                    });
                }
            }
        };
        for r in &self.requirements {
            expect(&r.id, &r.mitigates, &|k| k == EntityKind::Hazard, "hazard");
        }
        for m in &self.ml_requirements {
            expect(
                &m.id,
                &m.derived_from,
                &|k| k == EntityKind::Requirement,
                "requirement",
            );
        }
        for e in &self.evidence {
            expect(
                &e.id,
                &e.supports,
                &|k| matches!(k, EntityKind::Requirement | EntityKind::MlRequirement),
                "requirement",
            );
        }
        for id in self.gsn_bindings.keys() {
            if !kinds.contains_key(id.as_str()) {
                errs.push(TraceError::UnknownEntity(id.clone()));
            }
        }
        errs
    }

    /// A copy with `evidence` marked invalid.
    pub fn invalidate(&self, evidence: &str) -> Result<TraceModel, TraceError> {
        let mut next = self.clone();
        let item = next
            .evidence
            .iter_mut()
            .find(|e| e.id == evidence)
            .ok_or_else(|| TraceError::UnknownEvidence(evidence.to_string()))?;
        item.valid = false;
        Ok(next)
    }
}
