use std::collections::BTreeSet;

use super::{PlanDag, PlanError};

/// Node indices in execution order: every producer precedes its consumers,
/// and among nodes that are ready at the same time the one with the
/// smallest simulation IRI runs first.
pub fn topological_order(dag: &PlanDag) -> Result<Vec<usize>, PlanError> {
    let n = dag.nodes.len();
    let pairs: BTreeSet<(usize, usize)> = dag.edges.iter().map(|e| (e.producer, e.consumer)).collect();
    let mut indegree = vec![0usize; n];
    let mut successors = vec![Vec::new(); n];
    for &(p, c) in &pairs {
        indegree[c] += 1;
        successors[p].push(c);
    }
    let key = |i: usize| (dag.nodes[i].simulation.clone(), dag.nodes[i].process.clone(), i);
    let mut ready: BTreeSet<_> = (0..n).filter(|&i| indegree[i] == 0).map(key).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(next) = ready.pop_first() {
        let i = next.2;
        order.push(i);
        for &c in &successors[i] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(key(c));
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err(PlanError::CycleDetected)
    }
}
