//! The aligned capability / simulation / data-element vocabulary, its class
//! hierarchy, typed record extraction and validation.

mod axioms;
mod model;
mod validate;
mod vocab;

use thiserror::Error;

use crate::graph::Iri;

pub use axioms::{subclass_closure, PropertyAxiom, SchemaAxioms, SubclassClosure};
pub use model::{
    CapabilityRecord, InfluenceKind, InfluenceRecord, InstanceValue, ParameterRecord, ParameterValue, ProcessRecord,
    QualityCriterion, SimulationRecord, SisModel,
};
pub use validate::{
    influence_groups, validate, validate_model, GroupKey, InfluenceGroup, InfluenceGrouping, Rule, Severity,
    Ungroupable, Violation, SUM_TOLERANCE,
};
pub use vocab::{Namespaces, Vocabulary, OWL_EQUIVALENT_CLASS, RDFS_SUBCLASS_OF};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("subclass cycle: {}", .0.iter().map(Iri::as_str).collect::<Vec<_>>().join(" -> "))]
    SubclassCycle(Vec<Iri>),
}

/// Shorthand for [`SisModel::from_graph`].
pub fn extract_records(graph: &crate::graph::Graph) -> SisModel {
    SisModel::from_graph(graph)
}
