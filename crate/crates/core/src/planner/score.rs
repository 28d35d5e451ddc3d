use std::collections::BTreeMap;

use serde::Serialize;

use super::{order::topological_order, Comparison, PlanDag, PlanRequest, Requirement};
use crate::graph::Iri;
use crate::schema::{influence_groups, InfluenceGrouping, SisModel};

/// Lower bound on the influence used when tightening upstream thresholds.
pub const PROPAGATION_EPSILON: f64 = 0.05;

/// How node accuracies combine along a plan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Aggregator {
    /// `own * sum_i influence_i * accuracy_of_input_i`
    #[default]
    InfluenceWeighted,
    /// `min(own, accuracy of every produced input)`
    WeakestLink,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CriterionClass {
    /// A fraction in [0, 1], higher is better; propagated upstream.
    Accuracy,
    /// Additive along the sequence, lower is better.
    TimeLike,
    /// Anything else; the plan takes the minimum over its nodes.
    Other,
}

/// Name-based classification of a criterion kind.
pub fn classify(kind: &Iri) -> CriterionClass {
    let local = kind.local_name();
    if local.contains("Accuracy") {
        CriterionClass::Accuracy
    } else if local.ends_with("Time") {
        CriterionClass::TimeLike
    } else {
        CriterionClass::Other
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeRequirement {
    pub node: usize,
    pub criterion: Iri,
    pub requirement: Requirement,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScoreCard {
    pub per_criterion: BTreeMap<Iri, f64>,
    /// Criterion kind the effective accuracy was computed for.
    pub accuracy_kind: Option<Iri>,
    pub effective_accuracy: f64,
    pub total_time_like: f64,
    pub weighted_score: f64,
    pub propagated_requirements: Vec<NodeRequirement>,
    pub warnings: Vec<String>,
}

/// Influence of each input of `process` on its result. Uses the process's
/// influence group without a target element if there is one, otherwise its
/// first group; a process without influence values weighs inputs equally.
pub fn influence_weights(
    model: &SisModel,
    grouping: &InfluenceGrouping,
    process: &Iri,
) -> (BTreeMap<Iri, f64>, Option<String>) {
    let inputs = &model.processes[process].inputs;
    let group = grouping
        .group(process, None)
        .or_else(|| grouping.for_process(process).next());
    if let Some(g) = group {
        let mut weights: BTreeMap<Iri, f64> = inputs.iter().map(|i| (i.clone(), 0.0)).collect();
        let mut any = false;
        for member in &g.members {
            let inf = &model.influences[member];
            if let (Some(src), Some(v)) = (&inf.source, inf.value) {
                if let Some(w) = weights.get_mut(src) {
                    *w += v;
                    any = true;
                }
            }
        }
        if any {
            return (weights, None);
        }
    }
    let n = inputs.len().max(1) as f64;
    let weights = inputs.iter().map(|i| (i.clone(), 1.0 / n)).collect();
    let warning = (!inputs.is_empty()).then(|| {
        format!(
            "no influence values for {}; weighting its {} inputs equally",
            process.as_str(),
            inputs.len()
        )
    });
    (weights, warning)
}

struct Scorer<'a> {
    model: &'a SisModel,
    dag: &'a PlanDag,
    request: &'a PlanRequest,
    grouping: InfluenceGrouping,
    order: Vec<usize>,
    warnings: Vec<String>,
}

impl<'a> Scorer<'a> {
    fn new(model: &'a SisModel, dag: &'a PlanDag, request: &'a PlanRequest) -> Self {
        Scorer {
            model,
            dag,
            request,
            grouping: influence_groups(model),
            order: topological_order(dag).expect("plans are acyclic"),
            warnings: Vec::new(),
        }
    }

    fn own(&self, node: usize, kind: &Iri) -> Option<f64> {
        self.model
            .simulations
            .get(&self.dag.nodes[node].simulation)
            .and_then(|s| s.criterion_value(kind))
    }

    fn weights(&mut self, node: usize) -> BTreeMap<Iri, f64> {
        let (w, warning) = influence_weights(self.model, &self.grouping, &self.dag.nodes[node].process);
        if let Some(msg) = warning {
            self.warn(msg);
        }
        w
    }

    fn warn(&mut self, msg: String) {
        if !self.warnings.contains(&msg) {
            self.warnings.push(msg);
        }
    }

    /// Accuracy of every node's output for `kind`.
    fn accuracies(&mut self, kind: Option<&Iri>) -> Vec<f64> {
        let dag = self.dag;
        let mut acc = vec![1.0; dag.nodes.len()];
        for n in self.order.clone() {
            let node = &dag.nodes[n];
            let own = match kind {
                Some(k) => self.own(n, k).unwrap_or_else(|| {
                    self.warn(format!(
                        "{} has no {} value; assuming 1",
                        node.simulation.as_str(),
                        k.as_str()
                    ));
                    1.0
                }),
                None => 1.0,
            };
            let input_acc = |input: &Iri| node.consumed_produced.get(input).map_or(1.0, |&p| acc[p]);
            let value = match self.request.aggregator {
                Aggregator::InfluenceWeighted => {
                    let inputs = &self.model.processes[&node.process].inputs;
                    if inputs.is_empty() {
                        own
                    } else {
                        let weights = self.weights(n);
                        own * inputs.iter().map(|i| weights[i] * input_acc(i)).sum::<f64>()
                    }
                }
                Aggregator::WeakestLink => node.consumed_produced.keys().map(input_acc).fold(own, f64::min),
            };
            acc[n] = value;
        }
        acc
    }

    fn accuracy_kind(&self) -> Option<Iri> {
        let is_acc = |k: &&Iri| self.request.class_of(k) == CriterionClass::Accuracy;
        self.request
            .weights
            .keys()
            .chain(self.request.requirements.keys())
            .filter(is_acc)
            .min()
            .cloned()
            .or_else(|| self.present_kinds().into_iter().filter(|k| is_acc(&k)).min())
    }

    fn present_kinds(&self) -> Vec<Iri> {
        let mut kinds: Vec<Iri> = self
            .dag
            .nodes
            .iter()
            .filter_map(|n| self.model.simulations.get(&n.simulation))
            .flat_map(|s| s.criteria.iter())
            .filter(|c| c.value.is_some())
            .filter_map(|c| c.kind.clone())
            .collect();
        kinds.sort();
        kinds.dedup();
        kinds
    }

    /// Plan-level value of `kind`; `None` for an unclassified kind no node
    /// carries.
    fn plan_value(&mut self, kind: &Iri) -> Option<f64> {
        let n = self.dag.nodes.len();
        match self.request.class_of(kind) {
            CriterionClass::Accuracy => {
                let acc = self.accuracies(Some(kind));
                Some(self.dag.root.map_or(1.0, |r| acc[r]))
            }
            CriterionClass::TimeLike => Some((0..n).filter_map(|i| self.own(i, kind)).sum()),
            CriterionClass::Other => (0..n).filter_map(|i| self.own(i, kind)).reduce(f64::min),
        }
    }
}

fn normalized(class: CriterionClass, value: f64) -> f64 {
    match class {
        CriterionClass::TimeLike => 1.0 / (1.0 + value),
        _ => value,
    }
}

/// Scores a plan against the request's weights. Deterministic and total:
/// missing values fall back to documented defaults, reported as warnings.
pub fn score_plan(model: &SisModel, dag: &PlanDag, request: &PlanRequest) -> ScoreCard {
    let mut s = Scorer::new(model, dag, request);
    let accuracy_kind = s.accuracy_kind();
    let acc = s.accuracies(accuracy_kind.as_ref());
    let effective_accuracy = dag.root.map_or(1.0, |r| acc[r]);

    let mut per_criterion = BTreeMap::new();
    for kind in s.present_kinds() {
        if let Some(v) = s.plan_value(&kind) {
            per_criterion.insert(kind, v);
        }
    }
    let total_time_like = per_criterion
        .iter()
        .filter(|(k, _)| request.class_of(k) == CriterionClass::TimeLike)
        .map(|(_, v)| v)
        .sum();

    let mut weighted_score = 0.0;
    for (kind, &w) in &request.weights {
        let value = match per_criterion.get(kind) {
            Some(&v) => Some(v),
            None => s.plan_value(kind),
        };
        match value {
            Some(v) => weighted_score += w * normalized(request.class_of(kind), v),
            None => s.warn(format!("no node carries {}; its weight is ignored", kind.as_str())),
        }
    }

    let propagated_requirements = propagate_requirements(model, dag, request)
        .into_iter()
        .map(|((node, criterion), requirement)| NodeRequirement {
            node,
            criterion,
            requirement,
        })
        .collect();

    ScoreCard {
        per_criterion,
        accuracy_kind,
        effective_accuracy,
        total_time_like,
        weighted_score,
        propagated_requirements,
        warnings: s.warnings,
    }
}

/// Thresholds per `(node, criterion kind)`. The root carries the request's
/// requirements; lower bounds on accuracy-class kinds are passed to
/// producers as `1 - (1 - t) / max(influence, epsilon)`, clamped to [0, 1],
/// and a producer feeding several consumers keeps the strictest bound.
pub fn propagate_requirements(
    model: &SisModel,
    dag: &PlanDag,
    request: &PlanRequest,
) -> BTreeMap<(usize, Iri), Requirement> {
    let mut out = BTreeMap::new();
    let Some(root) = dag.root else {
        return out;
    };
    for (kind, req) in &request.requirements {
        out.insert((root, kind.clone()), *req);
    }
    let propagated: Vec<&Iri> = request
        .requirements
        .iter()
        .filter(|(k, r)| request.class_of(k) == CriterionClass::Accuracy && r.op == Comparison::AtLeast)
        .map(|(k, _)| k)
        .collect();
    if propagated.is_empty() {
        return out;
    }
    let grouping = influence_groups(model);
    let order = topological_order(dag).expect("plans are acyclic");
    for &n in order.iter().rev() {
        let node = &dag.nodes[n];
        if node.consumed_produced.is_empty() {
            continue;
        }
        let (weights, _) = influence_weights(model, &grouping, &node.process);
        for kind in &propagated {
            let Some(req) = out.get(&(n, (*kind).clone())).copied() else {
                continue;
            };
            for (input, &producer) in &node.consumed_produced {
                let influence = weights.get(input).copied().unwrap_or(0.0);
                let t = (1.0 - (1.0 - req.threshold) / influence.max(PROPAGATION_EPSILON)).clamp(0.0, 1.0);
                let entry = out
                    .entry((producer, (*kind).clone()))
                    .or_insert(Requirement::at_least(t));
                entry.threshold = entry.threshold.max(t);
            }
        }
    }
    out
}
