//! Hazards, safety requirements, ML safety requirements and evidence, with
//! coverage and change-impact analysis against a composed case.

mod coverage;
mod impact;
mod model;
mod parse;


pub use coverage::{
    coverage, coverage_strict, strict_checks, CoverageReport, LayerCoverage, StrictCheck,
};
pub use impact::{check_bindings, impact, impact_all, link_to_case, ImpactReport};
pub use model::{
    Direction, EntityKind, EvidenceItem, Hazard, Measurement, Metric, MlSafetyRequirement,
    Quantity, Relation, SafetyRequirement, TraceError, TraceModel,
};
pub use parse::parse_trace;
