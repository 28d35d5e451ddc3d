use serde::Serialize;

use super::score::{score_plan, CriterionClass, ScoreCard};
use super::{order::topological_order, Comparison, PlanDag, PlanRequest, Requirement};
use crate::graph::Iri;
use crate::schema::SisModel;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum Verdict {
    Feasible,
    Violates {
        criterion: Iri,
        node: usize,
        simulation: Iri,
        value: f64,
        requirement: Requirement,
    },
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedPlan {
    pub plan: PlanDag,
    pub score: ScoreCard,
    pub verdict: Verdict,
    /// Execution order as node indices.
    pub order: Vec<usize>,
}

/// First requirement the plan misses. Accuracy-class bounds are checked
/// against each node's own value; other kinds against the plan value.
/// Kinds without a value are not held against the plan.
fn verdict(model: &SisModel, dag: &PlanDag, card: &ScoreCard, request: &PlanRequest) -> Verdict {
    for r in &card.propagated_requirements {
        let node = &dag.nodes[r.node];
        let value = match request.class_of(&r.criterion) {
            CriterionClass::Accuracy => model
                .simulations
                .get(&node.simulation)
                .and_then(|s| s.criterion_value(&r.criterion)),
            _ => card.per_criterion.get(&r.criterion).copied(),
        };
        if let Some(v) = value {
            if !r.requirement.accepts(v) {
                return Verdict::Violates {
                    criterion: r.criterion.clone(),
                    node: r.node,
                    simulation: node.simulation.clone(),
                    value: v,
                    requirement: r.requirement,
                };
            }
        }
    }
    Verdict::Feasible
}

/// Score with weights rescaled to sum to one, rounded so that scaling all
/// weights by a constant cannot reorder plans through rounding noise.
fn rank_key(card: &ScoreCard, request: &PlanRequest) -> i64 {
    let total: f64 = request.weights.values().sum();
    if total > 0.0 {
        (card.weighted_score / total * 1e9).round() as i64
    } else {
        0
    }
}

/// Attaches verdicts and orders plans: feasible before infeasible, then by
/// weighted score (descending), fewer nodes, and root simulation IRI.
pub fn rank_and_filter(model: &SisModel, scored: Vec<(PlanDag, ScoreCard)>, request: &PlanRequest) -> Vec<RankedPlan> {
    let mut ranked: Vec<(i64, RankedPlan)> = scored
        .into_iter()
        .map(|(plan, score)| {
            let verdict = verdict(model, &plan, &score, request);
            let order = topological_order(&plan).expect("plans are acyclic");
            (
                rank_key(&score, request),
                RankedPlan {
                    plan,
                    score,
                    verdict,
                    order,
                },
            )
        })
        .collect();
    let root_sim = |p: &RankedPlan| p.plan.root_node().map(|n| n.simulation.clone());
    ranked.sort_by(|(ka, a), (kb, b)| {
        b.verdict
            .is_feasible()
            .cmp(&a.verdict.is_feasible())
            .then(kb.cmp(ka))
            .then(a.plan.len().cmp(&b.plan.len()))
            .then_with(|| root_sim(a).cmp(&root_sim(b)))
            .then_with(|| a.plan.node_set().cmp(&b.plan.node_set()))
            .then_with(|| a.plan.producer_map().cmp(&b.plan.producer_map()))
    });
    ranked.into_iter().map(|(_, r)| r).collect()
}

/// Scores and ranks `plans` in one step.
pub fn score_and_rank(model: &SisModel, plans: &[PlanDag], request: &PlanRequest) -> Vec<RankedPlan> {
    let scored = plans
        .iter()
        .map(|p| (p.clone(), score_plan(model, p, request)))
        .collect();
    rank_and_filter(model, scored, request)
}

/// `lo, lo + step, ...` up to and including `hi`, each rounded to twelve
/// decimals. Empty when `step` is not positive or `lo > hi`.
pub fn sweep_values(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if step.is_nan() || step <= 0.0 || lo.is_nan() || hi.is_nan() || lo > hi || !lo.is_finite() || !hi.is_finite() {
        return Vec::new();
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub threshold: f64,
    pub feasible: usize,
    /// Root simulation of the best feasible plan.
    pub top: Option<Iri>,
    pub score: Option<f64>,
}

/// One row per threshold: the plans ranked under `request` with the bound
/// on `kind` replaced by `op threshold`.
pub fn sweep(
    model: &SisModel,
    plans: &[PlanDag],
    request: &PlanRequest,
    kind: &Iri,
    op: Comparison,
    thresholds: &[f64],
) -> Vec<SweepRow> {
    thresholds
        .iter()
        .map(|&threshold| {
            let req = request.clone().require(kind.clone(), Requirement { op, threshold });
            let ranked = score_and_rank(model, plans, &req);
            let feasible: Vec<_> = ranked.iter().filter(|r| r.verdict.is_feasible()).collect();
            SweepRow {
                threshold,
                feasible: feasible.len(),
                top: feasible
                    .first()
                    .and_then(|r| r.plan.root_node())
                    .map(|n| n.simulation.clone()),
                score: feasible.first().map(|r| r.score.weighted_score),
            }
        })
        .collect()
}
