use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::model::{EvidenceItem, Relation, TraceError, TraceModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerCoverage {
    pub covered: usize,
    pub total: usize,
    pub uncovered: Vec<String>,
}

impl LayerCoverage {
    fn new<'a>(all: impl Iterator<Item = &'a str>, covered: &BTreeSet<String>) -> Self {
        let mut total = 0;
        let mut uncovered = Vec::new();
        for id in all {
            total += 1;
            if !covered.contains(id) {
                uncovered.push(id.to_string());
            }
        }
        LayerCoverage {
            covered: total - uncovered.len(),
            total,
            uncovered,
        }
    }

    pub fn complete(&self) -> bool {
        self.uncovered.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    /// Hazards mitigated by at least one requirement.
    pub hazards: LayerCoverage,
    /// Requirements backed by valid evidence, directly or through a derived
    /// ML requirement.
    pub requirements: LayerCoverage,
    pub ml_requirements: LayerCoverage,
    /// Hazards none of whose mitigating requirements is evidenced.
    pub hazards_without_evidence: Vec<String>,
    pub fully_covered: bool,
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hazards {}/{}, requirements {}/{}",
            self.hazards.covered,
            self.hazards.total,
            self.requirements.covered,
            self.requirements.total
        )?;
        if self.ml_requirements.total > 0 {
            write!(
                f,
                ", ML requirements {}/{}",
                self.ml_requirements.covered, self.ml_requirements.total
            )?;
        }
        Ok(())
    }
}

/// Covered entity ids, layer by layer.
#[derive(Debug, Default)]
pub(crate) struct Covered {
    pub hazards: BTreeSet<String>,
    pub evidenced_hazards: BTreeSet<String>,
    pub requirements: BTreeSet<String>,
    pub ml_requirements: BTreeSet<String>,
}

pub(crate) fn covered(model: &TraceModel, usable: impl Fn(&EvidenceItem) -> bool) -> Covered {
    let mut c = Covered::default();
    let backed: BTreeSet<&str> = model
        .evidence
        .iter()
        .filter(|e| usable(e))
        .flat_map(|e| e.supports.iter().map(String::as_str))
        .collect();
    for m in &model.ml_requirements {
        if backed.contains(m.id.as_str()) {
            c.ml_requirements.insert(m.id.clone());
        }
    }
    for r in &model.requirements {
        let via_ml = model
            .ml_requirements
            .iter()
            .any(|m| c.ml_requirements.contains(&m.id) && m.derived_from.contains(&r.id));
        if backed.contains(r.id.as_str()) || via_ml {
            c.requirements.insert(r.id.clone());
        }
        for h in &r.mitigates {
            c.hazards.insert(h.clone());
            if c.requirements.contains(&r.id) {
                c.evidenced_hazards.insert(h.clone());
            }
        }
    }
    c
}

fn checked(model: &TraceModel) -> Result<(), TraceError> {
    match model.check().into_iter().next() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn report(model: &TraceModel, c: &Covered) -> CoverageReport {
    let hazards = LayerCoverage::new(model.hazards.iter().map(|h| h.id.as_str()), &c.hazards);
    let requirements = LayerCoverage::new(
        model.requirements.iter().map(|r| r.id.as_str()),
        &c.requirements,
    );
    let ml_requirements = LayerCoverage::new(
        model.ml_requirements.iter().map(|m| m.id.as_str()),
        &c.ml_requirements,
    );
    let hazards_without_evidence: Vec<String> = model
        .hazards
        .iter()
        .filter(|h| !c.evidenced_hazards.contains(&h.id))
        .map(|h| h.id.clone())
        .collect();
    let fully_covered = hazards.complete()
        && requirements.complete()
        && ml_requirements.complete()
        && hazards_without_evidence.is_empty();
    CoverageReport {
        hazards,
        requirements,
        ml_requirements,
        hazards_without_evidence,
        fully_covered,
    }
}

/// Coverage of every layer, counting only evidence marked valid.
pub fn coverage(model: &TraceModel) -> Result<CoverageReport, TraceError> {
    checked(model)?;
    Ok(report(model, &covered(model, |e| e.valid)))
}

/// Like [`coverage`], but evidence whose measurements miss a target of
/// something it supports counts as invalid.
pub fn coverage_strict(
    model: &TraceModel,
) -> Result<(CoverageReport, Vec<StrictCheck>), TraceError> {
    checked(model)?;
    let checks = strict_checks(model);
    let failed: BTreeSet<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.evidence.as_str())
        .collect();
    let c = covered(model, |e| e.valid && !failed.contains(e.id.as_str()));
    Ok((report(model, &c), checks))
}

/// One comparison of a measured value against a stated target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrictCheck {
    pub evidence: String,
    pub target: String,
    pub name: String,
    pub measured: f64,
    pub measured_unit: Option<String>,
    pub relation: Relation,
    pub threshold: f64,
    pub threshold_unit: Option<String>,
    pub passed: bool,
}

impl fmt::Display for StrictCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = |u: &Option<String>| u.as_deref().map(|u| format!(" {u}")).unwrap_or_default();
        write!(
            f,
            "{} {} for {}: {}={}{} against {}{}{} {}",
            if self.passed { "meets" } else { "misses" },
            self.name,
            self.target,
            self.name,
            self.measured,
            unit(&self.measured_unit),
            self.relation.symbol(),
            self.threshold,
            unit(&self.threshold_unit),
            self.evidence,
        )
    }
}

/// Compares each measurement with same-named metrics of the ML requirements
/// and directed quantities of the requirements the evidence supports. A
/// unit mismatch fails the check.
pub fn strict_checks(model: &TraceModel) -> Vec<StrictCheck> {
    let mut out = Vec::new();
    for e in &model.evidence {
        for m in &e.measured {
            for target in &e.supports {
                let mut targets = Vec::new();
                if let Some(ml) = model.ml_requirement(target) {
                    if ml.metric.name == m.name {
                        targets.push((
                            ml.metric.direction.relation(),
                            ml.metric.threshold,
                            ml.metric.unit.clone(),
                        ));
                    }
                }
                if let Some(r) = model.requirement(target) {
                    for q in r
                        .quantities
                        .iter()
                        .filter(|q| q.name == m.name && q.relation != Relation::Equal)
                    {
                        targets.push((q.relation, q.value, Some(q.unit.clone())));
                    }
                }
                for (relation, threshold, threshold_unit) in targets {
                    let passed = m.unit == threshold_unit && relation.holds(m.value, threshold);
                    out.push(StrictCheck {
                        evidence: e.id.clone(),
                        target: target.clone(),
                        name: m.name.clone(),
                        measured: m.value,
                        measured_unit: m.unit.clone(),
                        relation,
                        threshold,
                        threshold_unit,
                        passed,
                    });
                }
            }
        }
    }
    out
}
