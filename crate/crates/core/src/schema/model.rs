use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::axioms::{subclass_closure, SchemaAxioms, SubclassClosure};
use super::vocab::{t, Vocabulary};
use crate::graph::{Graph, Iri, Literal, Term, Triple};

/// An instance description node and the literal it carries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceValue {
    pub description: Term,
    pub literal: Literal,
}

impl InstanceValue {
    pub fn number(&self) -> Option<f64> {
        self.literal.lenient_numeric_value()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QualityCriterion {
    pub id: Iri,
    /// Type description, e.g. `ex:ResultAccuracy`.
    pub kind: Option<Iri>,
    pub value: Option<f64>,
    pub unit_hint: Option<String>,
    #[serde(skip)]
    pub instance: Option<InstanceValue>,
    #[serde(skip)]
    pub declared: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationRecord {
    pub id: Iri,
    pub provides: BTreeSet<Iri>,
    pub criteria: Vec<QualityCriterion>,
    pub executes: BTreeSet<Iri>,
    /// Typed `VDI3633:Simulation` (directly or through a subclass).
    pub declared: bool,
}

impl SimulationRecord {
    /// Value of the first criterion of the given kind.
    pub fn criterion_value(&self, kind: &Iri) -> Option<f64> {
        self.criteria
            .iter()
            .filter(|c| c.kind.as_ref() == Some(kind))
            .find_map(|c| c.value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProcessRecord {
    pub id: Iri,
    pub requires: BTreeSet<Iri>,
    pub inputs: BTreeSet<Iri>,
    pub outputs: BTreeSet<Iri>,
    /// `ParX:hasApplication` targets, kept opaque.
    pub interdependencies: BTreeSet<Iri>,
    pub declared: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapabilityRecord {
    pub id: Iri,
    pub provided_by: BTreeSet<Iri>,
    pub required_by: BTreeSet<Iri>,
    pub declared: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterRecord {
    pub id: Iri,
    pub data_element: Option<Iri>,
    pub type_description: Option<Iri>,
    pub instance_value: Option<ParameterValue>,
    pub declared: bool,
    #[serde(skip)]
    pub instance: Option<InstanceValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ParameterValue {
    Number(f64),
    Text(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum InfluenceKind {
    SensitivityIndex,
    InfluenceScore,
    Interdependency,
}

impl InfluenceKind {
    /// Kinds expressed as a fraction in [0, 1].
    pub fn is_numeric(self) -> bool {
        !matches!(self, InfluenceKind::Interdependency)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfluenceRecord {
    pub id: Iri,
    pub kind: Option<InfluenceKind>,
    /// Parameter pointing at this influence via `SiS:hasInfluence`.
    pub source: Option<Iri>,
    pub target_process: Option<Iri>,
    pub target_element: Option<Iri>,
    pub value: Option<f64>,
    #[serde(skip)]
    pub type_description: Option<Iri>,
    #[serde(skip)]
    pub instance: Option<InstanceValue>,
}

/// Typed view of a graph. Extraction is total: any IRI that is typed as one
/// of the model classes, or that occurs in a position implying that role,
/// gets a record. Blank nodes are not given records.
#[derive(Clone, Debug)]
pub struct SisModel {
    pub vocab: Vocabulary,
    pub closure: SubclassClosure,
    pub simulations: BTreeMap<Iri, SimulationRecord>,
    pub processes: BTreeMap<Iri, ProcessRecord>,
    pub capabilities: BTreeMap<Iri, CapabilityRecord>,
    pub parameters: BTreeMap<Iri, ParameterRecord>,
    pub criteria: BTreeMap<Iri, QualityCriterion>,
    pub influences: BTreeMap<Iri, InfluenceRecord>,
}

struct Reader<'g> {
    graph: &'g Graph,
    vocab: &'g Vocabulary,
    closure: &'g SubclassClosure,
}

impl<'g> Reader<'g> {
    fn types(&self, node: &Term) -> BTreeSet<Iri> {
        self.graph
            .objects(node, &t(&self.vocab.rdf_type))
            .into_iter()
            .filter_map(|o| o.as_iri().cloned())
            .flat_map(|c| self.closure.superclasses(&c))
            .collect()
    }

    fn has_type(&self, node: &Iri, class: &Iri) -> bool {
        self.types(&Term::Iri(node.clone())).contains(class)
    }

    /// IRIs typed (after closure) as `class`.
    fn instances_of(&self, class: &Iri) -> BTreeSet<Iri> {
        let rdf_type = t(&self.vocab.rdf_type);
        let mut out = BTreeSet::new();
        for tr in self.graph.triples_matching(None, Some(&rdf_type), None) {
            if let (Term::Iri(s), Term::Iri(c)) = (&tr.subject, &tr.object) {
                if self.closure.is_subclass(c, class) {
                    out.insert(s.clone());
                }
            }
        }
        out
    }

    fn arcs(&self, predicate: &Iri) -> Vec<(Term, Term)> {
        self.graph
            .triples_matching(None, Some(&t(predicate)), None)
            .into_iter()
            .map(|tr| (tr.subject, tr.object))
            .collect()
    }

    fn iri_objects(&self, subject: &Iri, predicate: &Iri) -> BTreeSet<Iri> {
        self.graph
            .objects(&Term::Iri(subject.clone()), &t(predicate))
            .into_iter()
            .filter_map(|o| o.as_iri().cloned())
            .collect()
    }

    fn iri_subjects(&self, predicate: &Iri, object: &Iri) -> BTreeSet<Iri> {
        self.graph
            .subjects(&t(predicate), &Term::Iri(object.clone()))
            .into_iter()
            .filter_map(|s| s.as_iri().cloned())
            .collect()
    }

    fn first_iri(&self, subject: &Term, predicate: &Iri) -> Option<Iri> {
        self.graph
            .objects(subject, &t(predicate))
            .into_iter()
            .filter_map(|o| o.as_iri().cloned())
            .min()
    }

    /// First `has_Instance_Description` node carrying a literal `value`.
    fn instance_value(&self, node: &Term) -> Option<InstanceValue> {
        let mut descriptions = self.graph.objects(node, &t(&self.vocab.din_has_instance_description));
        descriptions.sort();
        descriptions.into_iter().find_map(|d| {
            let mut literals: Vec<Literal> = self
                .graph
                .objects(&d, &t(&self.vocab.din_value))
                .into_iter()
                .filter_map(|v| v.as_literal().cloned())
                .collect();
            literals.sort();
            literals.into_iter().next().map(|literal| InstanceValue {
                description: d.clone(),
                literal,
            })
        })
    }

    fn unit_hint(&self, nodes: &[Term]) -> Option<String> {
        nodes.iter().find_map(|n| {
            self.graph
                .objects(n, &t(&self.vocab.din_unit_of_measure))
                .into_iter()
                .find_map(|o| o.as_literal().map(|l| l.lexical().to_string()))
        })
    }

    /// IRIs typed as `class` (flagged `true`) plus IRIs found as subject of
    /// any `as_subject` arc or object of any `as_object` arc.
    fn role_nodes(&self, class: &Iri, as_subject: &[&Iri], as_object: &[&Iri]) -> BTreeMap<Iri, bool> {
        let declared = self.instances_of(class);
        let mut out: BTreeMap<Iri, bool> = declared.iter().map(|i| (i.clone(), true)).collect();
        for p in as_subject {
            for (s, _) in self.arcs(p) {
                if let Term::Iri(s) = s {
                    out.entry(s).or_insert(false);
                }
            }
        }
        for p in as_object {
            for (_, o) in self.arcs(p) {
                if let Term::Iri(o) = o {
                    out.entry(o).or_insert(false);
                }
            }
        }
        out
    }

    fn criterion(&self, id: &Iri, declared: bool) -> QualityCriterion {
        let node = Term::Iri(id.clone());
        let kind = self.first_iri(&node, &self.vocab.din_has_type_description);
        let instance = self.instance_value(&node);
        let mut hint_nodes = Vec::new();
        if let Some(k) = &kind {
            hint_nodes.push(Term::Iri(k.clone()));
        }
        if let Some(i) = &instance {
            hint_nodes.push(i.description.clone());
        }
        QualityCriterion {
            id: id.clone(),
            kind,
            value: instance.as_ref().and_then(InstanceValue::number),
            unit_hint: self.unit_hint(&hint_nodes),
            instance,
            declared,
        }
    }
}

impl SisModel {
    /// Extracts with the vocabulary implied by the graph's prefixes and the
    /// standard axioms plus any subclass/equivalence statements in the
    /// graph. A cyclic class hierarchy in the graph falls back to the
    /// standard axioms (validation reports the cycle).
    pub fn from_graph(graph: &Graph) -> SisModel {
        let vocab = Vocabulary::for_prefixes(graph.prefixes());
        let standard = SchemaAxioms::standard(&vocab);
        let closure = subclass_closure(&standard.clone().with_graph_axioms(graph, &vocab))
            .or_else(|_| subclass_closure(&standard))
            .expect("standard axioms are acyclic");
        SisModel::extract(graph, vocab, closure)
    }

    pub fn extract(graph: &Graph, vocab: Vocabulary, closure: SubclassClosure) -> SisModel {
        let r = Reader {
            graph,
            vocab: &vocab,
            closure: &closure,
        };
        let v = &vocab;

        let mut criteria = BTreeMap::new();
        for (id, declared) in r.role_nodes(&v.sis_quality_criteria, &[], &[&v.sis_has_quality_criteria]) {
            criteria.insert(id.clone(), r.criterion(&id, declared));
        }

        let mut simulations = BTreeMap::new();
        for (id, declared) in r.role_nodes(
            &v.vdi_simulation,
            &[&v.sis_has_quality_criteria, &v.css_provides_capability, &v.css_executes],
            &[],
        ) {
            let declared = declared || r.has_type(&id, &v.vdi_simulation);
            let crit = r
                .iri_objects(&id, &v.sis_has_quality_criteria)
                .into_iter()
                .filter_map(|c| criteria.get(&c).cloned())
                .collect();
            simulations.insert(
                id.clone(),
                SimulationRecord {
                    provides: r.iri_objects(&id, &v.css_provides_capability),
                    executes: r.iri_objects(&id, &v.css_executes),
                    criteria: crit,
                    declared,
                    id,
                },
            );
        }

        let mut processes = BTreeMap::new();
        for (id, declared) in r.role_nodes(
            &v.css_process,
            &[
                &v.css_requires_capability,
                &v.vdi_has_process_quantity,
                &v.vdi_has_results_data,
                &v.parx_has_application,
            ],
            &[&v.css_executes, &v.sis_is_influence_for],
        ) {
            processes.insert(
                id.clone(),
                ProcessRecord {
                    requires: r.iri_objects(&id, &v.css_requires_capability),
                    inputs: r.iri_objects(&id, &v.vdi_has_process_quantity),
                    outputs: r.iri_objects(&id, &v.vdi_has_results_data),
                    interdependencies: r.iri_objects(&id, &v.parx_has_application),
                    declared,
                    id,
                },
            );
        }

        let mut capabilities = BTreeMap::new();
        for (id, declared) in r.role_nodes(
            &v.css_capability,
            &[],
            &[&v.css_provides_capability, &v.css_requires_capability],
        ) {
            capabilities.insert(
                id.clone(),
                CapabilityRecord {
                    provided_by: r.iri_subjects(&v.css_provides_capability, &id),
                    required_by: r.iri_subjects(&v.css_requires_capability, &id),
                    declared,
                    id,
                },
            );
        }

        let mut parameters = BTreeMap::new();
        for (id, declared) in r.role_nodes(
            &v.vdi_data,
            &[&v.sis_has_influence],
            &[&v.vdi_has_process_quantity, &v.vdi_has_results_data],
        ) {
            let node = Term::Iri(id.clone());
            let data_element = r.first_iri(&node, &v.din_has_data_element);
            let element_node = data_element.clone().map(Term::Iri);
            let type_description = element_node
                .as_ref()
                .and_then(|e| r.first_iri(e, &v.din_has_type_description))
                .or_else(|| r.first_iri(&node, &v.din_has_type_description));
            let instance = element_node
                .as_ref()
                .and_then(|e| r.instance_value(e))
                .or_else(|| r.instance_value(&node));
            let instance_value = instance.as_ref().map(|i| match i.number() {
                Some(n) => ParameterValue::Number(n),
                None => ParameterValue::Text(i.literal.lexical().to_string()),
            });
            parameters.insert(
                id.clone(),
                ParameterRecord {
                    id,
                    data_element,
                    type_description,
                    instance_value,
                    declared,
                    instance,
                },
            );
        }

        let mut influences = BTreeMap::new();
        for (id, _) in r.role_nodes(
            &v.sis_influence,
            &[&v.sis_is_influence_for, &v.sis_has_influence_on],
            &[&v.sis_has_influence],
        ) {
            let node = Term::Iri(id.clone());
            let types = r.types(&node);
            let kind = if types.contains(&v.sis_sensitivity_index) {
                Some(InfluenceKind::SensitivityIndex)
            } else if types.contains(&v.sis_influence_score) {
                Some(InfluenceKind::InfluenceScore)
            } else if types.contains(&v.sis_interdependency) {
                Some(InfluenceKind::Interdependency)
            } else {
                None
            };
            let instance = r.instance_value(&node);
            influences.insert(
                id.clone(),
                InfluenceRecord {
                    kind,
                    source: r.iri_subjects(&v.sis_has_influence, &id).into_iter().next(),
                    target_process: r.first_iri(&node, &v.sis_is_influence_for),
                    target_element: r.first_iri(&node, &v.sis_has_influence_on),
                    value: instance.as_ref().and_then(InstanceValue::number),
                    type_description: r.first_iri(&node, &v.din_has_type_description),
                    instance,
                    id,
                },
            );
        }

        SisModel {
            simulations,
            processes,
            capabilities,
            parameters,
            criteria,
            influences,
            vocab,
            closure,
        }
    }

    pub fn is_simulation(&self, id: &Iri) -> bool {
        self.simulations.get(id).is_some_and(|s| s.declared)
    }

    /// Processes that list `parameter` as an input.
    pub fn consumers_of(&self, parameter: &Iri) -> Vec<&ProcessRecord> {
        self.processes
            .values()
            .filter(|p| p.inputs.contains(parameter))
            .collect()
    }

    /// Numeric influences whose `isInfluenceFor` is `process`.
    pub fn influences_for_process(&self, process: &Iri) -> Vec<&InfluenceRecord> {
        self.influences
            .values()
            .filter(|i| i.target_process.as_ref() == Some(process))
            .collect()
    }

    /// Writes the records back as triples (types for declared records plus
    /// every vocabulary arc the records hold).
    pub fn to_graph(&self) -> Graph {
        let v = &self.vocab;
        let mut g = Graph::new();
        let mut add = |s: Term, p: &Iri, o: Term| {
            g.insert(&Triple {
                subject: s,
                predicate: t(p),
                object: o,
            })
            .expect("records only hold well-formed terms");
        };
        let iri = |i: &Iri| Term::Iri(i.clone());
        let add_instance = |add: &mut dyn FnMut(Term, &Iri, Term), node: &Iri, inst: &Option<InstanceValue>| {
            if let Some(i) = inst {
                add(iri(node), &v.din_has_instance_description, i.description.clone());
                add(i.description.clone(), &v.din_value, Term::Literal(i.literal.clone()));
            }
        };
        for s in self.simulations.values() {
            if s.declared {
                add(iri(&s.id), &v.rdf_type, iri(&v.vdi_simulation));
            }
            for c in &s.provides {
                add(iri(&s.id), &v.css_provides_capability, iri(c));
            }
            for p in &s.executes {
                add(iri(&s.id), &v.css_executes, iri(p));
            }
            for c in &s.criteria {
                add(iri(&s.id), &v.sis_has_quality_criteria, iri(&c.id));
            }
        }
        for c in self.criteria.values() {
            if c.declared {
                add(iri(&c.id), &v.rdf_type, iri(&v.sis_quality_criteria));
            }
            if let Some(k) = &c.kind {
                add(iri(&c.id), &v.din_has_type_description, iri(k));
            }
            add_instance(&mut add, &c.id, &c.instance);
        }
        for p in self.processes.values() {
            if p.declared {
                add(iri(&p.id), &v.rdf_type, iri(&v.css_process));
            }
            for (set, prop) in [
                (&p.requires, &v.css_requires_capability),
                (&p.inputs, &v.vdi_has_process_quantity),
                (&p.outputs, &v.vdi_has_results_data),
                (&p.interdependencies, &v.parx_has_application),
            ] {
                for o in set {
                    add(iri(&p.id), prop, iri(o));
                }
            }
        }
        for c in self.capabilities.values() {
            if c.declared {
                add(iri(&c.id), &v.rdf_type, iri(&v.css_capability));
            }
        }
        for p in self.parameters.values() {
            if p.declared {
                add(iri(&p.id), &v.rdf_type, iri(&v.vdi_data));
            }
            match &p.data_element {
                Some(e) => {
                    add(iri(&p.id), &v.din_has_data_element, iri(e));
                    if let Some(td) = &p.type_description {
                        add(iri(e), &v.din_has_type_description, iri(td));
                    }
                    add_instance(&mut add, e, &p.instance);
                }
                None => {
                    if let Some(td) = &p.type_description {
                        add(iri(&p.id), &v.din_has_type_description, iri(td));
                    }
                    add_instance(&mut add, &p.id, &p.instance);
                }
            }
        }
        for i in self.influences.values() {
            let class = match i.kind {
                Some(InfluenceKind::SensitivityIndex) => Some(&v.sis_sensitivity_index),
                Some(InfluenceKind::InfluenceScore) => Some(&v.sis_influence_score),
                Some(InfluenceKind::Interdependency) => Some(&v.sis_interdependency),
                None => None,
            };
            if let Some(class) = class {
                add(iri(&i.id), &v.rdf_type, iri(class));
            }
            if let Some(s) = &i.source {
                add(iri(s), &v.sis_has_influence, iri(&i.id));
            }
            if let Some(p) = &i.target_process {
                add(iri(&i.id), &v.sis_is_influence_for, iri(p));
            }
            if let Some(e) = &i.target_element {
                add(iri(&i.id), &v.sis_has_influence_on, iri(e));
            }
            if let Some(td) = &i.type_description {
                add(iri(&i.id), &v.din_has_type_description, iri(td));
            }
            add_instance(&mut add, &i.id, &i.instance);
        }
        g
    }
}
