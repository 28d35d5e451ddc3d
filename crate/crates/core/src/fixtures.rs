//! The resin transfer moulding example graph and the four example queries,
//! embedded for tests, examples and the command-line tool.

use crate::graph::Graph;
use crate::turtle::parse_turtle;

pub const RTM_EXAMPLE: &str = include_str!("../fixtures/rtm-example.ttl");

pub const SIMULATIONS_FOR_OUTPUT: &str = include_str!("../fixtures/queries/simulations-for-output.rq");
pub const QUALITY_CRITERIA: &str = include_str!("../fixtures/queries/quality-criteria.rq");
pub const QUALITY_CRITERIA_CORRECTED: &str = include_str!("../fixtures/queries/quality-criteria-corrected.rq");
pub const INPUTS: &str = include_str!("../fixtures/queries/inputs.rq");
pub const INFLUENCES: &str = include_str!("../fixtures/queries/influences.rq");

/// Namespace of the example instances.
pub const EX: &str = "http://www.hsu-hh.de/aut/ontologies/sis-example#";

/// The parsed example graph.
pub fn rtm_example() -> Graph {
    parse_turtle(RTM_EXAMPLE).expect("embedded example parses")
}

/// An IRI in the example namespace.
pub fn ex(local: &str) -> crate::graph::Iri {
    crate::graph::Iri::new(format!("{EX}{local}")).expect("absolute")
}
