//! Random model generator and independent oracles shared by the
//! integration tests.

#![allow(dead_code)]

pub mod listings;
pub mod rdf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use sis_core::graph::{Graph, Iri};
use sis_core::turtle::parse_turtle;

pub const EX: &str = "http://www.hsu-hh.de/aut/ontologies/sis-example#";

pub const PREAMBLE: &str = "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix CSS: <http://www.w3id.org/hsu-aut/css#> .
@prefix VDI3633: <http://www.w3id.org/hsu-aut/VDI3633#> .
@prefix DINEN61360: <http://www.w3id.org/hsu-aut/DINEN61360#> .
@prefix SiS: <http://www.w3id.org/hsu-aut/SiS#> .
@prefix ex: <http://www.hsu-hh.de/aut/ontologies/sis-example#> .
";

pub fn ex(local: &str) -> Iri {
    Iri::new(format!("{EX}{local}")).unwrap()
}

#[derive(Clone, Debug)]
pub struct ProcSpec {
    pub requires: BTreeSet<usize>,
    pub inputs: BTreeSet<usize>,
    pub outputs: BTreeSet<usize>,
    /// Influence of each input in percent, summing to 100, in input order.
    pub influences: Option<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct SimSpec {
    pub provides: usize,
    /// Result accuracy in percent.
    pub accuracy: Option<u32>,
    pub time: Option<u32>,
}

/// A small capability / process / simulation model in which every node is
/// typed with its own class.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub params: usize,
    pub caps: usize,
    pub processes: Vec<ProcSpec>,
    pub sims: Vec<SimSpec>,
}

pub fn param(i: usize) -> Iri {
    ex(&format!("P{i}"))
}
pub fn cap(i: usize) -> Iri {
    ex(&format!("C{i}"))
}
pub fn process(i: usize) -> Iri {
    ex(&format!("Pr{i}"))
}
pub fn sim(i: usize) -> Iri {
    ex(&format!("S{i}"))
}

fn percent(p: u32) -> String {
    format!("{}.{:02}", p / 100, p % 100)
}

/// Splits 100 into parts proportional to `weights`.
fn partition(weights: &[u32]) -> Vec<u32> {
    let total: u32 = weights.iter().sum();
    let mut parts: Vec<u32> = weights.iter().map(|w| w * 100 / total).collect();
    let rest = 100 - parts.iter().sum::<u32>();
    if let Some(last) = parts.last_mut() {
        *last += rest;
    }
    parts
}

pub fn model_strategy() -> impl Strategy<Value = ModelSpec> {
    (1usize..=8, 1usize..=6, 1usize..=4).prop_flat_map(|(np, npr, nc)| {
        let proc = (
            vec(0..nc, 1..=2),
            vec(0..np, 0..=3),
            vec(0..np, 1..=2),
            vec(1u32..10, 3),
            prop::bool::weighted(0.85),
        )
            .prop_map(|(req, ins, outs, weights, has_inf)| {
                let inputs: BTreeSet<usize> = ins.into_iter().collect();
                let influences = (has_inf && !inputs.is_empty()).then(|| partition(&weights[..inputs.len()]));
                ProcSpec {
                    requires: req.into_iter().collect(),
                    inputs,
                    outputs: outs.into_iter().collect(),
                    influences,
                }
            });
        let sims_per_cap = vec(
            vec(
                (prop::option::weighted(0.9, 0u32..=100), prop::option::of(1u32..50)),
                1..=3,
            ),
            nc,
        );
        (vec(proc, npr), sims_per_cap).prop_map(move |(processes, per_cap)| {
            let sims = per_cap
                .into_iter()
                .enumerate()
                .flat_map(|(c, list)| {
                    list.into_iter().map(move |(accuracy, time)| SimSpec {
                        provides: c,
                        accuracy,
                        time,
                    })
                })
                .collect();
            ModelSpec {
                params: np,
                caps: nc,
                processes,
                sims,
            }
        })
    })
}

impl ModelSpec {
    pub fn to_turtle(&self) -> String {
        let mut t = String::from(PREAMBLE);
        t.push_str("ex:ResultAccuracy a DINEN61360:TypeDescription .\n");
        t.push_str("ex:SimulationTime a DINEN61360:TypeDescription .\n");
        for i in 0..self.params {
            writeln!(t, "ex:P{i} a VDI3633:Data .").unwrap();
        }
        for c in 0..self.caps {
            writeln!(t, "ex:C{c} a CSS:Capability .").unwrap();
        }
        for (k, p) in self.processes.iter().enumerate() {
            writeln!(t, "ex:Pr{k} a CSS:Process .").unwrap();
            for c in &p.requires {
                writeln!(t, "ex:Pr{k} CSS:requiresCapability ex:C{c} .").unwrap();
            }
            for i in &p.inputs {
                writeln!(t, "ex:Pr{k} VDI3633:hasProcessQuantity ex:P{i} .").unwrap();
            }
            for o in &p.outputs {
                writeln!(t, "ex:Pr{k} VDI3633:hasResultsData ex:P{o} .").unwrap();
            }
            if let Some(values) = &p.influences {
                for (i, v) in p.inputs.iter().zip(values) {
                    let id = format!("ex:I{k}_{i}");
                    writeln!(
                        t,
                        "ex:P{i} SiS:hasInfluence {id} .\n{id} a SiS:InfluenceScore ; SiS:isInfluenceFor ex:Pr{k} ; \
                         DINEN61360:has_Type_Description ex:InfluenceScore ; DINEN61360:has_Instance_Description {id}_ID .\n\
                         {id}_ID a DINEN61360:InstanceDescription ; DINEN61360:value {} .",
                        percent(*v)
                    )
                    .unwrap();
                }
            }
        }
        for (j, s) in self.sims.iter().enumerate() {
            writeln!(
                t,
                "ex:S{j} a VDI3633:Simulation ; CSS:providesCapability ex:C{} .",
                s.provides
            )
            .unwrap();
            let criteria = [
                ("Acc", "ResultAccuracy", s.accuracy.map(percent)),
                ("Time", "SimulationTime", s.time.map(|x| x.to_string())),
            ];
            for (suffix, kind, value) in criteria {
                if let Some(v) = value {
                    let id = format!("ex:S{j}_{suffix}");
                    writeln!(
                        t,
                        "ex:S{j} SiS:hasQualityCriteria {id} .\n{id} a SiS:QualityCriteria ; \
                         DINEN61360:has_Type_Description ex:{kind} ; DINEN61360:has_Instance_Description {id}_ID .\n\
                         {id}_ID a DINEN61360:InstanceDescription ; DINEN61360:value {v} ."
                    )
                    .unwrap();
                }
            }
        }
        t
    }

    pub fn graph(&self) -> Graph {
        parse_turtle(&self.to_turtle()).expect("generated Turtle parses")
    }

    /// `(process, simulation)` pairs able to produce parameter `p`.
    pub fn producers(&self, p: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, proc) in self.processes.iter().enumerate() {
            if !proc.outputs.contains(&p) {
                continue;
            }
            for (j, s) in self.sims.iter().enumerate() {
                if proc.requires.contains(&s.provides) {
                    out.push((k, j));
                }
            }
        }
        out
    }
}

/// Producer assignment: parameter index to `(process, simulation)`.
pub type Assignment = BTreeMap<usize, (usize, usize)>;

/// Every assignment of producers to the parameters a plan for `goal` needs,
/// found by exhaustively picking a producer for each open parameter and
/// discarding cyclic results at the end.
pub fn oracle_plans(spec: &ModelSpec, goal: usize, known: &BTreeSet<usize>) -> BTreeSet<Assignment> {
    fn go(
        spec: &ModelSpec,
        known: &BTreeSet<usize>,
        open: Vec<usize>,
        assignment: Assignment,
        out: &mut BTreeSet<Assignment>,
    ) {
        let mut open = open;
        let next = loop {
            match open.pop() {
                None => break None,
                Some(p) if known.contains(&p) || assignment.contains_key(&p) => continue,
                Some(p) => break Some(p),
            }
        };
        let Some(p) = next else {
            if is_acyclic(spec, &assignment, known) {
                out.insert(assignment);
            }
            return;
        };
        for (k, j) in spec.producers(p) {
            let mut a = assignment.clone();
            a.insert(p, (k, j));
            let mut o = open.clone();
            o.extend(spec.processes[k].inputs.iter().copied());
            go(spec, known, o, a, out);
        }
    }
    let mut out = BTreeSet::new();
    if known.contains(&goal) {
        out.insert(Assignment::new());
        return out;
    }
    go(spec, known, vec![goal], Assignment::new(), &mut out);
    out
}

fn is_acyclic(spec: &ModelSpec, a: &Assignment, known: &BTreeSet<usize>) -> bool {
    let nodes: BTreeSet<(usize, usize)> = a.values().copied().collect();
    let deps = |n: (usize, usize)| -> Vec<(usize, usize)> {
        spec.processes[n.0]
            .inputs
            .iter()
            .filter(|i| !known.contains(i))
            .map(|i| a[i])
            .collect()
    };
    // repeated removal of nodes without unresolved dependencies
    let mut remaining = nodes;
    loop {
        let free: Vec<_> = remaining
            .iter()
            .copied()
            .filter(|&n| deps(n).iter().all(|d| !remaining.contains(d)))
            .collect();
        if free.is_empty() {
            return remaining.is_empty();
        }
        for n in free {
            remaining.remove(&n);
        }
    }
}

/// Draws `n` values from `strategy` with a fixed seed.
pub fn samples<S: Strategy>(strategy: S, n: usize, seed: u8) -> Vec<S::Value> {
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy").current())
        .collect()
}

/// Numeric suffix of a generated IRI such as `ex:Pr3`.
pub fn index_of(iri: &Iri, prefix: &str) -> usize {
    iri.local_name()
        .strip_prefix(prefix)
        .and_then(|n| n.parse().ok())
        .unwrap_or_else(|| panic!("unexpected IRI {iri}"))
}

pub fn assignment_of(plan: &sis_core::planner::PlanDag) -> Assignment {
    plan.producer_map()
        .into_iter()
        .map(|(p, (pr, s))| (index_of(&p, "P"), (index_of(&pr, "Pr"), index_of(&s, "S"))))
        .collect()
}

/// `(process, simulation)` runs an assignment uses.
pub fn node_set(assignment: &Assignment) -> BTreeSet<(usize, usize)> {
    assignment.values().copied().collect()
}

/// Known-parameter masks with about a quarter of the bits set.
pub fn sparse_bits() -> impl Strategy<Value = u8> {
    (any::<u8>(), any::<u8>()).prop_map(|(a, b)| a & b)
}

/// Goal index and known set drawn from an index and a bit mask.
pub fn goal_and_known(spec: &ModelSpec, goal: proptest::sample::Index, bits: u8) -> (usize, BTreeSet<usize>) {
    let goal = goal.index(spec.params);
    let known = (0..spec.params).filter(|i| bits & (1 << i) != 0).collect();
    (goal, known)
}
