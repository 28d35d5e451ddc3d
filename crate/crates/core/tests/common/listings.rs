//! Compares the typed matchmaker operations with the fixture queries run
//! through the query engine.

use sis_core::fixtures::{INFLUENCES, INPUTS, QUALITY_CRITERIA, QUALITY_CRITERIA_CORRECTED, SIMULATIONS_FOR_OUTPUT};
use sis_core::graph::{Graph, Iri, Term};
use sis_core::matchmaker::{influences_on, inputs_of, quality_criteria_of, simulations_for_output_with, MatchMode};
use sis_core::query::run;
use sis_core::schema::SisModel;

const EXAMPLE_OUTPUT: &str = "ex:LocalFillTime";
const EXAMPLE_SIMULATION: &str = "ex:InfiltrationSimulationDL";

type Rows = Vec<Vec<Term>>;

/// Runs a fixture query with its example individual swapped for `target`.
fn query_rows(graph: &Graph, query: &str, placeholder: &str, target: &Iri) -> Result<Rows, String> {
    let text = query.replace(placeholder, &format!("<{target}>"));
    let mut rows = run(graph, &text).map_err(|e| e.to_string())?.rows;
    rows.sort();
    Ok(rows)
}

fn t(iri: &Iri) -> Term {
    Term::Iri(iri.clone())
}

fn same(what: &str, mut typed: Rows, queried: Rows) -> Result<(), String> {
    typed.sort();
    if typed == queried {
        Ok(())
    } else {
        Err(format!("{what}: typed {typed:?} != query {queried:?}"))
    }
}

fn criteria_rows(model: &SisModel, simulation: &Iri) -> Result<Rows, String> {
    Ok(quality_criteria_of(model, simulation)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|c| {
            let inst = c.instance.expect("valued criterion");
            vec![t(&c.id), inst.description, Term::Literal(inst.literal)]
        })
        .collect())
}

/// Checks all four operations for one output parameter and one simulation.
pub fn check_listings(graph: &Graph, output: &Iri, simulation: &Iri) -> Result<(), String> {
    let model = SisModel::from_graph(graph);

    let typed = simulations_for_output_with(&model, output, MatchMode::Strict)
        .into_iter()
        .map(|m| vec![t(&m.process), t(&m.capability), t(&m.simulation)])
        .collect();
    same(
        "simulations for output",
        typed,
        query_rows(graph, SIMULATIONS_FOR_OUTPUT, EXAMPLE_OUTPUT, output)?,
    )?;

    same(
        "quality criteria",
        criteria_rows(&model, simulation)?,
        query_rows(graph, QUALITY_CRITERIA_CORRECTED, EXAMPLE_SIMULATION, simulation)?,
    )?;

    // The verbatim query leaves the simulation unbound and therefore
    // returns the valued criteria of every simulation.
    let mut union = Vec::new();
    for s in model.simulations.values().filter(|s| model.is_simulation(&s.id)) {
        union.extend(criteria_rows(&model, &s.id)?);
    }
    same(
        "unbound quality criteria",
        union,
        query_rows(graph, QUALITY_CRITERIA, EXAMPLE_SIMULATION, simulation)?,
    )?;

    let typed = inputs_of(&model, simulation)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|m| vec![t(&m.capability), t(&m.process), t(&m.parameter)])
        .collect();
    same(
        "inputs",
        typed,
        query_rows(graph, INPUTS, EXAMPLE_SIMULATION, simulation)?,
    )?;

    let typed = influences_on(&model, simulation)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|m| {
            let inst = m.influence.instance.expect("valued influence");
            vec![
                t(&m.capability),
                t(&m.process),
                t(&m.influence.id),
                t(m.influence.source.as_ref().expect("sourced influence")),
                inst.description,
                Term::Literal(inst.literal),
            ]
        })
        .collect();
    same(
        "influences",
        typed,
        query_rows(graph, INFLUENCES, EXAMPLE_SIMULATION, simulation)?,
    )
}
