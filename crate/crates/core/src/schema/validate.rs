use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::axioms::{subclass_closure, SchemaAxioms};
use super::model::{InfluenceKind, SisModel};
use super::vocab::t;
use crate::graph::{Graph, Iri, PrefixMap, Term};

/// Absolute tolerance on influence group sums.
pub const SUM_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    /// Domain and range of the model's object properties; class hierarchy.
    V1,
    /// Numeric influence values lie in [0, 1].
    V2,
    /// Influence values of a process sum to one.
    V3,
    /// Quality criteria carry a numeric value.
    V4,
    /// Required capabilities are provided by some simulation.
    V5,
    /// Typed literals are well formed.
    V6,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub rule: Rule,
    #[serde(serialize_with = "focus_string")]
    pub focus: Term,
    pub severity: Severity,
    pub message: String,
}

fn focus_string<S: Serializer>(focus: &Term, s: S) -> Result<S::Ok, S::Error> {
    match focus {
        Term::Iri(iri) => s.serialize_str(iri.as_str()),
        other => s.serialize_str(&other.canonical()),
    }
}

impl Violation {
    fn new(rule: Rule, focus: Term, message: impl Into<String>) -> Self {
        let severity = match rule {
            Rule::V5 => Severity::Warning,
            _ => Severity::Error,
        };
        Violation {
            rule,
            focus,
            severity,
            message: message.into(),
        }
    }

    fn warning(rule: Rule, focus: Term, message: impl Into<String>) -> Self {
        Violation {
            severity: Severity::Warning,
            ..Violation::new(rule, focus, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// One-line text form with the focus compacted against `prefixes`.
    pub fn render(&self, prefixes: &PrefixMap) -> String {
        let focus = match &self.focus {
            Term::Iri(iri) => prefixes.compact(iri.as_str()),
            other => other.canonical(),
        };
        format!("{} {} {}: {}", self.rule, self.severity, focus, self.message)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&PrefixMap::new()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupKey {
    pub process: Iri,
    pub element: Option<Iri>,
}

/// Numeric influences sharing a process (and target element, if any).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfluenceGroup {
    pub key: GroupKey,
    pub members: Vec<Iri>,
    /// Sum over the members that have a value.
    pub sum: f64,
    /// Members without a numeric value.
    pub missing: Vec<Iri>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ungroupable {
    pub influence: Iri,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct InfluenceGrouping {
    pub groups: Vec<InfluenceGroup>,
    pub ungroupable: Vec<Ungroupable>,
}

impl InfluenceGrouping {
    pub fn group(&self, process: &Iri, element: Option<&Iri>) -> Option<&InfluenceGroup> {
        self.groups
            .iter()
            .find(|g| &g.key.process == process && g.key.element.as_ref() == element)
    }

    pub fn for_process<'a>(&'a self, process: &'a Iri) -> impl Iterator<Item = &'a InfluenceGroup> {
        self.groups.iter().filter(move |g| &g.key.process == process)
    }
}

/// Groups sensitivity indices and influence scores by process and target
/// element. Influences without `isInfluenceFor` are assigned to the single
/// process consuming their source parameter; anything else is ungroupable.
pub fn influence_groups(model: &SisModel) -> InfluenceGrouping {
    let mut groups: BTreeMap<GroupKey, (Vec<Iri>, f64, Vec<Iri>)> = BTreeMap::new();
    let mut ungroupable = Vec::new();
    for inf in model.influences.values() {
        if !inf.kind.is_some_and(InfluenceKind::is_numeric) {
            continue;
        }
        let process = match (&inf.target_process, &inf.target_element) {
            (Some(p), _) => p.clone(),
            (None, Some(_)) => {
                let consumers = inf.source.as_ref().map(|s| model.consumers_of(s)).unwrap_or_default();
                match consumers.as_slice() {
                    [one] => one.id.clone(),
                    [] => {
                        ungroupable.push(Ungroupable {
                            influence: inf.id.clone(),
                            reason: "no process consumes the influencing parameter".into(),
                        });
                        continue;
                    }
                    _ => {
                        ungroupable.push(Ungroupable {
                            influence: inf.id.clone(),
                            reason: format!("influencing parameter is consumed by {} processes", consumers.len()),
                        });
                        continue;
                    }
                }
            }
            (None, None) => {
                ungroupable.push(Ungroupable {
                    influence: inf.id.clone(),
                    reason: "neither isInfluenceFor nor hasInfluenceOn is given".into(),
                });
                continue;
            }
        };
        let key = GroupKey {
            process,
            element: inf.target_element.clone(),
        };
        let entry = groups.entry(key).or_insert_with(|| (Vec::new(), 0.0, Vec::new()));
        entry.0.push(inf.id.clone());
        match inf.value {
            Some(v) => entry.1 += v,
            None => entry.2.push(inf.id.clone()),
        }
    }
    InfluenceGrouping {
        groups: groups
            .into_iter()
            .map(|(key, (members, sum, missing))| InfluenceGroup {
                key,
                members,
                sum,
                missing,
            })
            .collect(),
        ungroupable,
    }
}

/// Formats a number with at most six decimals and no trailing zeros.
pub(crate) fn short_number(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Checks every rule. The result is sorted and free of duplicates; it is
/// empty iff the graph satisfies all rules.
pub fn validate(graph: &Graph) -> Vec<Violation> {
    validate_model(graph, &SisModel::from_graph(graph))
}

/// As [`validate`], reusing an already extracted model of `graph`.
pub fn validate_model(graph: &Graph, model: &SisModel) -> Vec<Violation> {
    let v = &model.vocab;
    let mut out = Vec::new();

    let axioms = SchemaAxioms::standard(v);
    if let Err(super::SchemaError::SubclassCycle(cycle)) = subclass_closure(&axioms.clone().with_graph_axioms(graph, v))
    {
        let names: Vec<_> = cycle.iter().map(|c| graph.prefixes().compact(c.as_str())).collect();
        out.push(Violation::new(
            Rule::V1,
            Term::Iri(cycle[0].clone()),
            format!("subclass cycle {}", names.join(" -> ")),
        ));
    }

    let types_of = |node: &Term| -> BTreeSet<Iri> {
        graph
            .objects(node, &t(&v.rdf_type))
            .into_iter()
            .filter_map(|o| o.as_iri().cloned())
            .flat_map(|c| model.closure.superclasses(&c))
            .collect()
    };
    let name = |iri: &Iri| graph.prefixes().compact(iri.as_str());

    // V1
    for ax in &axioms.properties {
        for tr in graph.triples_matching(None, Some(&t(&ax.property)), None) {
            if !types_of(&tr.subject).contains(&ax.domain) {
                out.push(Violation::new(
                    Rule::V1,
                    tr.subject.clone(),
                    format!("subject of {} must be a {}", name(&ax.property), name(&ax.domain)),
                ));
            }
            match &tr.object {
                Term::Literal(_) => out.push(Violation::new(
                    Rule::V1,
                    tr.subject.clone(),
                    format!(
                        "object of {} must be a {} resource, found literal {}",
                        name(&ax.property),
                        name(&ax.range),
                        tr.object.canonical()
                    ),
                )),
                object if !types_of(object).contains(&ax.range) => out.push(Violation::new(
                    Rule::V1,
                    object.clone(),
                    format!("object of {} must be a {}", name(&ax.property), name(&ax.range)),
                )),
                _ => {}
            }
        }
    }

    // V2, over every attached value so that removing statements never
    // exposes a different one
    let numeric: BTreeSet<&Iri> = [&v.sis_sensitivity_index, &v.sis_influence_score].into();
    let influence_nodes: BTreeSet<Term> = [&v.sis_sensitivity_index, &v.sis_influence_score, &v.sis_interdependency]
        .into_iter()
        .flat_map(|c| {
            graph
                .triples_matching(None, Some(&t(&v.rdf_type)), None)
                .into_iter()
                .filter(|tr| tr.object.as_iri().is_some_and(|o| model.closure.is_subclass(o, c)))
                .map(|tr| tr.subject)
                .collect::<Vec<_>>()
        })
        .collect();
    for node in influence_nodes {
        let types = types_of(&node);
        let is_numeric = types.iter().any(|c| numeric.contains(c));
        for d in graph.objects(&node, &t(&v.din_has_instance_description)) {
            for value in graph.objects(&d, &t(&v.din_value)) {
                let Some(lit) = value.as_literal() else {
                    continue;
                };
                if is_numeric {
                    match lit.lenient_numeric_value() {
                        Some(x) if (0.0..=1.0).contains(&x) => {}
                        Some(x) => out.push(Violation::new(
                            Rule::V2,
                            node.clone(),
                            format!("influence value {} outside [0, 1]", short_number(x)),
                        )),
                        None => out.push(Violation::new(
                            Rule::V2,
                            node.clone(),
                            format!("influence value {} is not a number", value.canonical()),
                        )),
                    }
                } else {
                    out.push(Violation::new(
                        Rule::V2,
                        node.clone(),
                        "interdependency must not carry a numeric value",
                    ));
                }
            }
        }
    }

    // V3
    let grouping = influence_groups(model);
    for g in &grouping.groups {
        for m in &g.missing {
            out.push(Violation::new(
                Rule::V3,
                Term::Iri(m.clone()),
                "numeric influence has no value to sum",
            ));
        }
        if g.missing.is_empty() && (g.sum - 1.0).abs() > SUM_TOLERANCE {
            let scope = match &g.key.element {
                Some(e) => format!(" on {}", name(e)),
                None => String::new(),
            };
            out.push(Violation::new(
                Rule::V3,
                Term::Iri(g.key.process.clone()),
                format!("influence values{scope} sum to {}, expected 1", short_number(g.sum)),
            ));
        }
    }
    for u in &grouping.ungroupable {
        out.push(Violation::warning(
            Rule::V3,
            Term::Iri(u.influence.clone()),
            format!("ungroupable influence: {}", u.reason),
        ));
    }

    // V4
    for c in model.criteria.values() {
        if c.value.is_none() {
            let msg = match &c.instance {
                Some(i) => format!("criterion value {} is not numeric", Term::Literal(i.literal.clone())),
                None => "criterion has no instance description with a value".into(),
            };
            out.push(Violation::new(Rule::V4, Term::Iri(c.id.clone()), msg));
        }
    }

    // V5
    let required: BTreeSet<&Iri> = model.processes.values().flat_map(|p| &p.requires).collect();
    for cap in required {
        let provided = model
            .simulations
            .values()
            .any(|s| s.declared && s.provides.contains(cap));
        if !provided {
            out.push(Violation::new(
                Rule::V5,
                Term::Iri(cap.clone()),
                "required capability is not provided by any simulation",
            ));
        }
    }

    // V6
    for tr in graph.iter() {
        if let Term::Literal(lit) = &tr.object {
            if !lit.is_well_formed() {
                out.push(Violation::new(
                    Rule::V6,
                    tr.subject.clone(),
                    format!("ill-formed literal {}", tr.object.canonical()),
                ));
            }
        }
    }

    out.sort();
    out.dedup();
    out
}
