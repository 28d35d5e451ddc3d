mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{model_strategy, ModelSpec};
use sis_core::fixtures::{ex, rtm_example, RTM_EXAMPLE};
use sis_core::graph::{Graph, Term, Triple};
use sis_core::schema::{influence_groups, validate, Rule, Severity, SisModel, Violation};
use sis_core::turtle::parse_turtle;

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
const SUBCLASS: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
const EQUIVALENT: &str = "http://www.w3.org/2002/07/owl#equivalentClass";

const NOISE: [&str; 4] = [
    "ex:P0 CSS:requiresCapability \"x\" .\n",
    "ex:S0 SiS:hasQualityCriteria ex:P0 .\n",
    "ex:Bad a SiS:SensitivityIndex ; DINEN61360:has_Instance_Description ex:Bad_ID .\n\
     ex:Bad_ID DINEN61360:value 1.5 .\n",
    "ex:Odd DINEN61360:value \"abc\"^^<http://www.w3.org/2001/XMLSchema#decimal> .\n",
];

fn noisy_graph(spec: &ModelSpec, noise: u8) -> Graph {
    let mut text = spec.to_turtle();
    for (i, extra) in NOISE.iter().enumerate() {
        if noise & (1 << i) != 0 {
            text.push_str(extra);
        }
    }
    parse_turtle(&text).unwrap()
}

type Key = (Rule, Term, String);

fn keys(violations: &[Violation], rules: &[Rule]) -> BTreeSet<Key> {
    violations
        .iter()
        .filter(|v| rules.contains(&v.rule))
        .map(|v| (v.rule, v.focus.clone(), v.message.clone()))
        .collect()
}

fn is_schema_triple(t: &Triple) -> bool {
    [RDF_TYPE, SUBCLASS, EQUIVALENT]
        .iter()
        .any(|p| t.predicate.as_iri().is_some_and(|i| i.as_str() == *p))
}

/// Removing one non-typing triple never adds a V1, V2 or V6 violation.
/// At most `limit` evenly spaced triples are tried.
fn check_deletion_monotone(graph: &Graph, limit: usize) -> Result<(), String> {
    let rules = [Rule::V1, Rule::V2, Rule::V6];
    let before = keys(&validate(graph), &rules);
    let candidates: Vec<Triple> = graph.iter().filter(|t| !is_schema_triple(t)).collect();
    let stride = candidates.len().div_ceil(limit).max(1);
    for triple in candidates.into_iter().step_by(stride) {
        let mut smaller = graph.clone();
        smaller.remove(&triple);
        let after = keys(&validate(&smaller), &rules);
        if let Some(new) = after.difference(&before).next() {
            return Err(format!("removing {triple:?} introduced {new:?}"));
        }
    }
    Ok(())
}

fn records_equal(a: &SisModel, b: &SisModel) -> bool {
    a.simulations == b.simulations
        && a.processes == b.processes
        && a.capabilities == b.capabilities
        && a.parameters == b.parameters
        && a.criteria == b.criteria
        && a.influences == b.influences
}

#[test]
fn fixture_records_and_clean_validation() {
    let g = rtm_example();
    let m = SisModel::from_graph(&g);
    assert_eq!(m.simulations.len(), 3);
    assert_eq!(m.processes.len(), 2);
    assert_eq!(m.capabilities.len(), 2);
    assert!(m.parameters.len() >= 5);
    let violations = validate(&g);
    assert!(violations.is_empty(), "{violations:?}");

    let groups = influence_groups(&m);
    let group = groups
        .group(&ex("SimulatingThermosetInfiltration1"), None)
        .expect("influence group");
    assert_eq!(group.members.len(), 3);
    assert!((group.sum - 1.0).abs() < 1e-6);
}

#[test]
fn lowering_one_influence_breaks_the_sum() {
    let text = RTM_EXAMPLE.replace("DINEN61360:value 0.2 .", "DINEN61360:value 0.1 .");
    assert_ne!(text, RTM_EXAMPLE);
    let violations = validate(&parse_turtle(&text).unwrap());
    assert_eq!(violations.len(), 1, "{violations:?}");
    assert_eq!(violations[0].rule, Rule::V3);
    assert_eq!(violations[0].severity, Severity::Error);
    assert!(
        violations[0].message.contains("sum to 0.9"),
        "{}",
        violations[0].message
    );
}

#[test]
fn criterion_on_a_parameter_is_a_domain_error() {
    let mut g = rtm_example();
    g.add(
        Term::Iri(ex("Geometry")),
        Term::iri("http://www.w3id.org/hsu-aut/SiS#hasQualityCriteria").unwrap(),
        Term::Iri(ex("ResultAccuracyInfSimDL")),
    )
    .unwrap();
    let violations = validate(&g);
    assert!(
        violations
            .iter()
            .any(|v| v.rule == Rule::V1 && v.focus == Term::Iri(ex("Geometry"))),
        "{violations:?}"
    );
}

#[test]
fn fixture_deletions_are_monotone() {
    check_deletion_monotone(&rtm_example(), usize::MAX).unwrap();
}

#[test]
fn fixture_parameters_cover_process_arcs() {
    let m = SisModel::from_graph(&rtm_example());
    for p in m.processes.values() {
        for d in p.inputs.iter().chain(&p.outputs) {
            assert!(m.parameters.contains_key(d), "{d} has no parameter record");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn generated_deletions_are_monotone(spec in model_strategy(), noise in 0u8..16) {
        prop_assert_eq!(check_deletion_monotone(&noisy_graph(&spec, noise), 30), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn records_survive_writing_back(spec in model_strategy()) {
        let m = SisModel::from_graph(&spec.graph());
        let back = SisModel::from_graph(&m.to_graph());
        prop_assert!(records_equal(&m, &back));
    }

    #[test]
    fn generated_models_validate_cleanly(spec in model_strategy()) {
        let errors: Vec<_> = validate(&spec.graph()).into_iter().filter(|v| v.is_error()).collect();
        prop_assert!(errors.is_empty(), "{:?}", errors);
    }

    #[test]
    fn every_process_arc_has_a_parameter(spec in model_strategy()) {
        let m = SisModel::from_graph(&spec.graph());
        for p in m.processes.values() {
            for d in p.inputs.iter().chain(&p.outputs) {
                prop_assert!(m.parameters.contains_key(d));
            }
        }
    }

    #[test]
    fn noise_is_reported_by_the_right_rule(spec in model_strategy(), noise in 1u8..16) {
        let found: BTreeSet<Rule> = validate(&noisy_graph(&spec, noise)).iter().map(|v| v.rule).collect();
        let expected = [(0, Rule::V1), (1, Rule::V1), (2, Rule::V2), (3, Rule::V6)];
        for (bit, rule) in expected {
            if noise & (1 << bit) != 0 {
                prop_assert!(found.contains(&rule), "missing {} in {:?}", rule, found);
            }
        }
    }
}
