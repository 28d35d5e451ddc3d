//! Typed capability matchmaking over an extracted [`SisModel`]: which
//! simulations can produce a parameter, and what a simulation needs and
//! offers.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Iri;
use crate::schema::{InfluenceRecord, ProcessRecord, QualityCriterion, SisModel};

/// A simulation able to execute a process through a shared capability.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Match {
    pub process: Iri,
    pub capability: Iri,
    pub simulation: Iri,
}

/// How a requested parameter is identified with process outputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum MatchMode {
    /// The output must be the very same data node.
    #[default]
    Strict,
    /// Falls back to outputs sharing the parameter's type description when
    /// no process outputs the node itself.
    TypeRelaxed,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("{0} is not a simulation")]
    NotASimulation(Iri),
}

/// One influence on a process whose capability a simulation provides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfluenceMatch {
    pub capability: Iri,
    pub process: Iri,
    pub influence: InfluenceRecord,
}

/// A process input reached through a capability of the simulation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InputMatch {
    pub capability: Iri,
    pub process: Iri,
    pub parameter: Iri,
}

fn matches_for_process(model: &SisModel, process: &ProcessRecord) -> Vec<Match> {
    let mut out = Vec::new();
    for cap in &process.requires {
        if !model.capabilities.get(cap).is_some_and(|c| c.declared) {
            continue;
        }
        for sim in model.simulations.values() {
            if sim.declared && sim.provides.contains(cap) {
                out.push(Match {
                    process: process.id.clone(),
                    capability: cap.clone(),
                    simulation: sim.id.clone(),
                });
            }
        }
    }
    out
}

/// Matches whose process lists `parameter` among its results, sorted by
/// process, simulation and capability.
pub fn simulations_for_output(model: &SisModel, parameter: &Iri) -> Vec<Match> {
    simulations_for_output_with(model, parameter, MatchMode::Strict)
}

pub fn simulations_for_output_with(model: &SisModel, parameter: &Iri, mode: MatchMode) -> Vec<Match> {
    let mut out: Vec<Match> = producing_processes(model, parameter, mode)
        .into_iter()
        .flat_map(|p| matches_for_process(model, p))
        .collect();
    out.sort_by(|a, b| (&a.process, &a.simulation, &a.capability).cmp(&(&b.process, &b.simulation, &b.capability)));
    out.dedup();
    out
}

/// Processes producing `parameter` under `mode`.
pub fn producing_processes<'m>(model: &'m SisModel, parameter: &Iri, mode: MatchMode) -> Vec<&'m ProcessRecord> {
    let strict: Vec<_> = model
        .processes
        .values()
        .filter(|p| p.outputs.contains(parameter))
        .collect();
    if !strict.is_empty() || mode == MatchMode::Strict {
        return strict;
    }
    let Some(kind) = model
        .parameters
        .get(parameter)
        .and_then(|p| p.type_description.as_ref())
    else {
        return Vec::new();
    };
    model
        .processes
        .values()
        .filter(|p| {
            p.outputs
                .iter()
                .any(|o| model.parameters.get(o).and_then(|r| r.type_description.as_ref()) == Some(kind))
        })
        .collect()
}

fn require_simulation(model: &SisModel, simulation: &Iri) -> Result<(), MatchError> {
    if model.is_simulation(simulation) {
        Ok(())
    } else {
        Err(MatchError::NotASimulation(simulation.clone()))
    }
}

/// Criteria of `simulation` that carry an instance value, sorted by id.
pub fn quality_criteria_of(model: &SisModel, simulation: &Iri) -> Result<Vec<QualityCriterion>, MatchError> {
    require_simulation(model, simulation)?;
    let mut out: Vec<_> = model.simulations[simulation]
        .criteria
        .iter()
        .filter(|c| c.instance.is_some())
        .cloned()
        .collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// `(process, capability)` pairs where the process requires a capability the
/// simulation provides.
fn served_processes(model: &SisModel, simulation: &Iri) -> Vec<(Iri, Iri)> {
    let mut out = Vec::new();
    for cap in &model.simulations[simulation].provides {
        if let Some(c) = model.capabilities.get(cap) {
            for p in &c.required_by {
                out.push((cap.clone(), p.clone()));
            }
        }
    }
    out.sort();
    out
}

/// Inputs of every process the simulation can execute.
pub fn inputs_of(model: &SisModel, simulation: &Iri) -> Result<Vec<InputMatch>, MatchError> {
    require_simulation(model, simulation)?;
    let mut out = BTreeSet::new();
    for (cap, process) in served_processes(model, simulation) {
        if let Some(p) = model.processes.get(&process) {
            for input in &p.inputs {
                out.insert(InputMatch {
                    capability: cap.clone(),
                    process: process.clone(),
                    parameter: input.clone(),
                });
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Valued influences declared for the processes the simulation can execute,
/// restricted to those with a source parameter.
pub fn influences_on(model: &SisModel, simulation: &Iri) -> Result<Vec<InfluenceMatch>, MatchError> {
    require_simulation(model, simulation)?;
    let mut out = Vec::new();
    for (cap, process) in served_processes(model, simulation) {
        for inf in model.influences_for_process(&process) {
            if inf.source.is_some() && inf.instance.is_some() {
                out.push(InfluenceMatch {
                    capability: cap.clone(),
                    process: process.clone(),
                    influence: inf.clone(),
                });
            }
        }
    }
    Ok(out)
}
