use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{order::topological_order, PlanDag, PlanEdge, PlanError, PlanNode, PlanRequest};
use crate::graph::Iri;
use crate::matchmaker::simulations_for_output_with;
use crate::schema::SisModel;

type NodeKey = (Iri, Iri);

/// Why an enumeration may be incomplete.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Truncation {
    DepthExceeded,
    PlanLimitReached,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanSet {
    pub plans: Vec<PlanDag>,
    /// Set when limits cut the search short; `plans` is then partial.
    pub truncated: Option<Truncation>,
}

/// Producer choice for every parameter resolved so far.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
struct SubPlan {
    producers: BTreeMap<Iri, NodeKey>,
}

impl SubPlan {
    fn merge(&self, other: &SubPlan) -> Option<SubPlan> {
        let mut producers = self.producers.clone();
        for (param, key) in &other.producers {
            match producers.get(param) {
                Some(existing) if existing != key => return None,
                Some(_) => {}
                None => {
                    producers.insert(param.clone(), key.clone());
                }
            }
        }
        Some(SubPlan { producers })
    }
}

struct Search<'a> {
    model: &'a SisModel,
    request: &'a PlanRequest,
    /// Parameter to `(process, simulation)` options and their capability.
    options: BTreeMap<Iri, Vec<(NodeKey, Iri)>>,
    truncated: Option<Truncation>,
}

impl<'a> Search<'a> {
    fn options(&mut self, param: &Iri) -> Vec<(NodeKey, Iri)> {
        if let Some(o) = self.options.get(param) {
            return o.clone();
        }
        let mut out: Vec<(NodeKey, Iri)> = Vec::new();
        for m in simulations_for_output_with(self.model, param, self.request.match_mode) {
            let key = (m.process, m.simulation);
            // matches come sorted by capability within a pair; keep the first
            if out.last().map(|(k, _)| k) != Some(&key) {
                out.push((key, m.capability));
            }
        }
        self.options.insert(param.clone(), out.clone());
        out
    }

    fn capability(&self, key: &NodeKey) -> Iri {
        self.options
            .values()
            .flatten()
            .find(|(k, _)| k == key)
            .map(|(_, c)| c.clone())
            .expect("every planned node came from an option")
    }

    fn flag(&mut self, t: Truncation) {
        self.truncated.get_or_insert(t);
    }

    fn resolve(&mut self, param: &Iri, path: &mut Vec<Iri>) -> Vec<SubPlan> {
        if self.request.known.contains(param) {
            return vec![SubPlan::default()];
        }
        if path.contains(param) {
            return Vec::new();
        }
        if path.len() >= self.request.max_depth {
            self.flag(Truncation::DepthExceeded);
            return Vec::new();
        }
        path.push(param.clone());
        let mut results = BTreeSet::new();
        for (key, _) in self.options(param) {
            let inputs: Vec<Iri> = self.model.processes[&key.0]
                .inputs
                .iter()
                .filter(|i| !self.request.known.contains(*i))
                .cloned()
                .collect();
            let mut partials = vec![SubPlan {
                producers: BTreeMap::from([(param.clone(), key.clone())]),
            }];
            for input in &inputs {
                let alternatives = self.resolve(input, path);
                let mut next = Vec::new();
                'outer: for p in &partials {
                    for a in &alternatives {
                        if let Some(m) = p.merge(a) {
                            if next.len() >= self.request.max_plans {
                                self.flag(Truncation::PlanLimitReached);
                                break 'outer;
                            }
                            next.push(m);
                        }
                    }
                }
                partials = next;
                if partials.is_empty() {
                    break;
                }
            }
            results.extend(partials);
        }
        path.pop();
        results.into_iter().collect()
    }

    fn build(&self, sub: &SubPlan) -> PlanDag {
        let goal = &self.request.goal;
        let keys: BTreeSet<&NodeKey> = sub.producers.values().collect();
        let index: BTreeMap<&NodeKey, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut nodes = Vec::with_capacity(keys.len());
        let mut edges = Vec::new();
        for (i, key) in keys.iter().enumerate() {
            let process = &self.model.processes[&key.0];
            let mut consumed_known = BTreeSet::new();
            let mut consumed_produced = BTreeMap::new();
            for input in &process.inputs {
                if self.request.known.contains(input) {
                    consumed_known.insert(input.clone());
                } else {
                    let producer = index[&sub.producers[input]];
                    consumed_produced.insert(input.clone(), producer);
                    edges.push(PlanEdge {
                        producer,
                        consumer: i,
                        parameter: input.clone(),
                    });
                }
            }
            nodes.push(PlanNode {
                simulation: key.1.clone(),
                process: key.0.clone(),
                capability: self.capability(key),
                consumed_known,
                consumed_produced,
                produced: process.outputs.clone(),
            });
        }
        edges.sort();
        PlanDag {
            goal: goal.clone(),
            root: Some(index[&sub.producers[goal]]),
            nodes,
            edges,
        }
    }

    /// A chain of parameters from the goal to one that cannot be produced.
    fn blocking_chain(&mut self) -> Vec<Iri> {
        let known = &self.request.known;
        let mut resolvable: BTreeSet<Iri> = known.clone();
        let candidates: BTreeSet<Iri> = self
            .model
            .processes
            .values()
            .flat_map(|p| p.inputs.iter().chain(&p.outputs))
            .chain([&self.request.goal])
            .cloned()
            .collect();
        loop {
            let mut changed = false;
            for param in &candidates {
                if resolvable.contains(param) {
                    continue;
                }
                let ok = self.options(param).iter().any(|((process, _), _)| {
                    self.model.processes[process]
                        .inputs
                        .iter()
                        .all(|i| resolvable.contains(i))
                });
                if ok {
                    resolvable.insert(param.clone());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut chain = vec![self.request.goal.clone()];
        loop {
            let current = chain.last().unwrap().clone();
            let next = self.options(&current).iter().find_map(|((process, _), _)| {
                self.model.processes[process]
                    .inputs
                    .iter()
                    .find(|i| !resolvable.contains(*i))
                    .cloned()
            });
            match next {
                Some(n) if !chain.contains(&n) => chain.push(n),
                _ => return chain,
            }
        }
    }
}

/// Every plan producing `request.goal` from `request.known`, sorted by node
/// set. Parameters with several producers yield one plan per choice; a
/// parameter is never resolved again below itself, so plans are acyclic.
pub fn enumerate_plans(model: &SisModel, request: &PlanRequest) -> Result<PlanSet, PlanError> {
    if request.known.contains(&request.goal) {
        return Ok(PlanSet {
            plans: vec![PlanDag::empty(request.goal.clone())],
            truncated: None,
        });
    }
    let mut search = Search {
        model,
        request,
        options: BTreeMap::new(),
        truncated: None,
    };
    let subs = search.resolve(&request.goal, &mut Vec::new());
    let mut plans: Vec<PlanDag> = subs
        .iter()
        .map(|s| search.build(s))
        .filter(|p| topological_order(p).is_ok())
        .collect();
    plans.sort_by_cached_key(|p| (p.node_set(), p.producer_map()));
    plans.dedup();
    if plans.len() > request.max_plans {
        plans.truncate(request.max_plans);
        search.flag(Truncation::PlanLimitReached);
    }
    if plans.is_empty() && search.truncated.is_none() {
        return Err(PlanError::GoalUnreachable {
            chain: search.blocking_chain(),
        });
    }
    Ok(PlanSet {
        plans,
        truncated: search.truncated,
    })
}
