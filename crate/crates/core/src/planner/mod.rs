//! Simulation sequence planning: backward chaining from a goal parameter
//! over capability matches, scoring against quality criteria and ordering
//! for execution.

mod dot;
mod enumerate;
mod order;
mod rank;
mod score;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::graph::Iri;
use crate::matchmaker::MatchMode;

pub use dot::to_dot;
pub use enumerate::{enumerate_plans, PlanSet, Truncation};
pub use order::topological_order;
pub use rank::{rank_and_filter, score_and_rank, sweep, sweep_values, RankedPlan, SweepRow, Verdict};
pub use score::{
    classify, influence_weights, propagate_requirements, score_plan, Aggregator, CriterionClass, NodeRequirement,
    ScoreCard, PROPAGATION_EPSILON,
};

pub const DEFAULT_MAX_DEPTH: usize = 16;
pub const DEFAULT_MAX_PLANS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Comparison {
    AtLeast,
    AtMost,
}

/// A bound on one criterion kind, e.g. `ResultAccuracy >= 0.8`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Requirement {
    pub op: Comparison,
    pub threshold: f64,
}

impl Requirement {
    pub fn at_least(threshold: f64) -> Self {
        Requirement {
            op: Comparison::AtLeast,
            threshold,
        }
    }

    pub fn at_most(threshold: f64) -> Self {
        Requirement {
            op: Comparison::AtMost,
            threshold,
        }
    }

    /// Whether `value` meets the bound, allowing for rounding noise.
    pub fn accepts(&self, value: f64) -> bool {
        const SLACK: f64 = 1e-9;
        match self.op {
            Comparison::AtLeast => value >= self.threshold - SLACK,
            Comparison::AtMost => value <= self.threshold + SLACK,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanRequest {
    pub goal: Iri,
    pub known: BTreeSet<Iri>,
    /// Criterion kind (type description) to non-negative weight.
    pub weights: BTreeMap<Iri, f64>,
    pub requirements: BTreeMap<Iri, Requirement>,
    pub max_depth: usize,
    pub max_plans: usize,
    pub aggregator: Aggregator,
    /// Overrides of the name-based criterion classification.
    pub classes: BTreeMap<Iri, CriterionClass>,
    pub match_mode: MatchMode,
}

impl PlanRequest {
    pub fn new(goal: Iri, known: impl IntoIterator<Item = Iri>) -> Self {
        PlanRequest {
            goal,
            known: known.into_iter().collect(),
            weights: BTreeMap::new(),
            requirements: BTreeMap::new(),
            max_depth: DEFAULT_MAX_DEPTH,
            max_plans: DEFAULT_MAX_PLANS,
            aggregator: Aggregator::default(),
            classes: BTreeMap::new(),
            match_mode: MatchMode::Strict,
        }
    }

    pub fn weight(mut self, kind: Iri, w: f64) -> Self {
        self.weights.insert(kind, w);
        self
    }

    pub fn require(mut self, kind: Iri, req: Requirement) -> Self {
        self.requirements.insert(kind, req);
        self
    }

    pub fn class_of(&self, kind: &Iri) -> CriterionClass {
        self.classes.get(kind).copied().unwrap_or_else(|| classify(kind))
    }
}

/// One simulation run executing one process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PlanNode {
    pub simulation: Iri,
    pub process: Iri,
    pub capability: Iri,
    pub consumed_known: BTreeSet<Iri>,
    /// Input parameter to the index of the node producing it.
    pub consumed_produced: BTreeMap<Iri, usize>,
    pub produced: BTreeSet<Iri>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PlanEdge {
    pub producer: usize,
    pub consumer: usize,
    pub parameter: Iri,
}

/// A simulation sequence producing the goal. Nodes are sorted by
/// `(process, simulation)` and each pair occurs at most once; the empty plan
/// (goal already known) has no root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanDag {
    pub goal: Iri,
    pub root: Option<usize>,
    pub nodes: Vec<PlanNode>,
    pub edges: Vec<PlanEdge>,
}

impl PlanDag {
    pub fn empty(goal: Iri) -> Self {
        PlanDag {
            goal,
            root: None,
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn root_node(&self) -> Option<&PlanNode> {
        self.root.map(|r| &self.nodes[r])
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// `(process, simulation)` pairs of the plan.
    pub fn node_set(&self) -> BTreeSet<(Iri, Iri)> {
        self.nodes
            .iter()
            .map(|n| (n.process.clone(), n.simulation.clone()))
            .collect()
    }

    /// Parameter to `(process, simulation)` of its producer.
    pub fn producer_map(&self) -> BTreeMap<Iri, (Iri, Iri)> {
        let key = |i: usize| (self.nodes[i].process.clone(), self.nodes[i].simulation.clone());
        let mut out: BTreeMap<Iri, (Iri, Iri)> = self
            .nodes
            .iter()
            .flat_map(|n| n.consumed_produced.iter().map(|(p, &i)| (p.clone(), key(i))))
            .collect();
        if let Some(r) = self.root {
            out.insert(self.goal.clone(), key(r));
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("goal unreachable: {}", .chain.iter().map(Iri::as_str).collect::<Vec<_>>().join(" -> "))]
    GoalUnreachable { chain: Vec<Iri> },
    #[error("plan contains a cycle")]
    CycleDetected,
}
