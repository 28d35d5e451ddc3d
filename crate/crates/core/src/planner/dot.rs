use std::collections::BTreeSet;
use std::fmt::Write;

use super::PlanDag;
use crate::graph::PrefixMap;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// Graphviz digraph of one plan: simulation runs as boxes, known inputs and
/// the goal as ellipses, edges labelled with the parameter they carry.
pub fn to_dot(plan: &PlanDag, prefixes: &PrefixMap, name: &str) -> String {
    let c = |iri: &crate::graph::Iri| prefixes.compact(iri.as_str());
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (i, n) in plan.nodes.iter().enumerate() {
        let label = format!("\"{}\\n{}\"", escape(&c(&n.simulation)), escape(&c(&n.process)));
        writeln!(out, "  n{i} [shape=box, label={label}];").unwrap();
    }
    let known: BTreeSet<_> = plan.nodes.iter().flat_map(|n| &n.consumed_known).collect();
    for (k, param) in known.iter().enumerate() {
        writeln!(out, "  k{k} [shape=ellipse, style=dashed, label={}];", quote(&c(param))).unwrap();
    }
    writeln!(
        out,
        "  goal [shape=ellipse, style=bold, label={}];",
        quote(&c(&plan.goal))
    )
    .unwrap();
    for (k, param) in known.iter().enumerate() {
        for (i, n) in plan.nodes.iter().enumerate() {
            if n.consumed_known.contains(*param) {
                writeln!(out, "  k{k} -> n{i};").unwrap();
            }
        }
    }
    for e in &plan.edges {
        writeln!(
            out,
            "  n{} -> n{} [label={}];",
            e.producer,
            e.consumer,
            quote(&c(&e.parameter))
        )
        .unwrap();
    }
    if let Some(r) = plan.root {
        writeln!(out, "  n{r} -> goal;").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ex, rtm_example};
    use crate::planner::{enumerate_plans, PlanRequest};
    use crate::schema::SisModel;

    #[test]
    fn two_node_plan() {
        let g = rtm_example();
        let m = SisModel::from_graph(&g);
        let req = PlanRequest::new(
            ex("LocalFillTime"),
            ["Geometry", "ResinViscosity", "ShellFEModel"].map(ex),
        );
        let plan = &enumerate_plans(&m, &req).unwrap().plans[0];
        let dot = to_dot(plan, g.prefixes(), "plan 1");
        assert!(dot.starts_with("digraph \"plan 1\" {"));
        assert!(dot.contains("label=\"ex:TextilePermeability\""));
        assert_eq!(dot.matches(" -> ").count(), 3 + 1 + 1);
        assert!(dot.contains("label=\"ex:KinematicDraping\\nex:DryFiberForming\""));
        assert!(dot.ends_with("}\n"));
    }
}
