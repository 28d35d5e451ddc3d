use std::collections::{BTreeMap, BTreeSet};

use super::vocab::{t, Vocabulary};
use super::SchemaError;
use crate::graph::{Graph, Iri, Term};

/// Expected subject and object classes of an object property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyAxiom {
    pub property: Iri,
    pub domain: Iri,
    pub range: Iri,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaAxioms {
    /// `(sub, super)` pairs.
    pub subclass: Vec<(Iri, Iri)>,
    pub equivalent: Vec<(Iri, Iri)>,
    pub properties: Vec<PropertyAxiom>,
}

impl SchemaAxioms {
    /// The model's own axioms.
    pub fn standard(v: &Vocabulary) -> Self {
        let pair = |a: &Iri, b: &Iri| (a.clone(), b.clone());
        let prop = |p: &Iri, d: &Iri, r: &Iri| PropertyAxiom {
            property: p.clone(),
            domain: d.clone(),
            range: r.clone(),
        };
        SchemaAxioms {
            subclass: vec![
                pair(&v.vdi_simulation, &v.css_resource),
                pair(&v.sis_quality_criteria, &v.din_data_element),
                pair(&v.sis_sensitivity_index, &v.sis_influence),
                pair(&v.sis_influence_score, &v.sis_influence),
                pair(&v.sis_interdependency, &v.sis_influence),
                pair(&v.sis_sensitivity_index, &v.din_data_element),
            ],
            equivalent: vec![pair(&v.parx_interdependency, &v.sis_interdependency)],
            properties: vec![
                prop(&v.vdi_has_process_quantity, &v.css_process, &v.vdi_data),
                prop(&v.vdi_has_results_data, &v.css_process, &v.vdi_data),
                prop(&v.sis_has_quality_criteria, &v.vdi_simulation, &v.sis_quality_criteria),
                prop(&v.sis_has_influence, &v.vdi_data, &v.sis_influence),
                prop(&v.sis_has_influence_on, &v.sis_influence, &v.din_data_element),
                prop(&v.sis_is_influence_for, &v.sis_influence, &v.css_process),
                prop(&v.parx_has_application, &v.css_process, &v.parx_interdependency),
                prop(&v.css_provides_capability, &v.css_resource, &v.css_capability),
                prop(&v.css_requires_capability, &v.css_process, &v.css_capability),
                prop(&v.css_executes, &v.css_resource, &v.css_process),
            ],
        }
    }

    /// Adds `rdfs:subClassOf` and `owl:equivalentClass` statements between
    /// IRIs found in `graph`.
    pub fn with_graph_axioms(mut self, graph: &Graph, v: &Vocabulary) -> Self {
        let collect = |predicate: &Iri| -> Vec<(Iri, Iri)> {
            graph
                .triples_matching(None, Some(&t(predicate)), None)
                .into_iter()
                .filter_map(|tr| match (tr.subject, tr.object) {
                    (Term::Iri(a), Term::Iri(b)) => Some((a, b)),
                    _ => None,
                })
                .collect()
        };
        let sub = collect(&v.rdfs_subclass_of);
        let eq = collect(&v.owl_equivalent_class);
        self.subclass.extend(sub);
        self.equivalent.extend(eq);
        self
    }

    pub fn property(&self, property: &Iri) -> Option<&PropertyAxiom> {
        self.properties.iter().find(|p| &p.property == property)
    }
}

/// Reflexive-transitive superclass sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubclassClosure {
    supers: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl SubclassClosure {
    /// Superclasses of `class`, including itself. Classes the axioms never
    /// mention are their own only superclass.
    pub fn superclasses(&self, class: &Iri) -> BTreeSet<Iri> {
        self.supers
            .get(class)
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([class.clone()]))
    }

    pub fn is_subclass(&self, sub: &Iri, sup: &Iri) -> bool {
        sub == sup || self.supers.get(sub).is_some_and(|s| s.contains(sup))
    }

    pub fn classes(&self) -> impl Iterator<Item = &Iri> {
        self.supers.keys()
    }
}

fn find(parent: &mut BTreeMap<Iri, Iri>, x: &Iri) -> Iri {
    let p = parent.get(x).cloned().unwrap_or_else(|| x.clone());
    if &p == x {
        return p;
    }
    let root = find(parent, &p);
    parent.insert(x.clone(), root.clone());
    root
}

/// Computes the closure. Equivalent classes end up with identical sets; a
/// subclass cycle that is not declared as an equivalence is an error.
pub fn subclass_closure(axioms: &SchemaAxioms) -> Result<SubclassClosure, SchemaError> {
    let mut classes = BTreeSet::new();
    for (a, b) in axioms.subclass.iter().chain(&axioms.equivalent) {
        classes.insert(a.clone());
        classes.insert(b.clone());
    }

    // equivalence groups, represented by their smallest member
    let mut parent: BTreeMap<Iri, Iri> = BTreeMap::new();
    for (a, b) in &axioms.equivalent {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent.insert(hi, lo);
        }
    }
    let mut members: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for c in &classes {
        let r = find(&mut parent, c);
        members.entry(r).or_default().insert(c.clone());
    }

    let mut edges: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for (a, b) in &axioms.subclass {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            edges.entry(ra).or_default().insert(rb);
        }
    }

    // depth-first with colouring; memoised ancestor sets over representatives
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit(
        node: &Iri,
        edges: &BTreeMap<Iri, BTreeSet<Iri>>,
        marks: &mut BTreeMap<Iri, Mark>,
        result: &mut BTreeMap<Iri, BTreeSet<Iri>>,
        stack: &mut Vec<Iri>,
    ) -> Result<(), SchemaError> {
        match marks.get(node) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Active) => {
                let start = stack.iter().position(|n| n == node).unwrap_or(0);
                let mut cycle = stack[start..].to_vec();
                cycle.push(node.clone());
                return Err(SchemaError::SubclassCycle(cycle));
            }
            None => {}
        }
        marks.insert(node.clone(), Mark::Active);
        stack.push(node.clone());
        let mut acc = BTreeSet::from([node.clone()]);
        for next in edges.get(node).into_iter().flatten() {
            visit(next, edges, marks, result, stack)?;
            acc.extend(result[next].iter().cloned());
        }
        stack.pop();
        marks.insert(node.clone(), Mark::Done);
        result.insert(node.clone(), acc);
        Ok(())
    }

    let mut marks = BTreeMap::new();
    let mut rep_supers = BTreeMap::new();
    for rep in members.keys() {
        visit(rep, &edges, &mut marks, &mut rep_supers, &mut Vec::new())?;
    }

    let mut supers = BTreeMap::new();
    for (rep, group) in &members {
        let expanded: BTreeSet<Iri> = rep_supers[rep]
            .iter()
            .flat_map(|r| members[r].iter().cloned())
            .collect();
        for c in group {
            supers.insert(c.clone(), expanded.clone());
        }
    }
    Ok(SubclassClosure { supers })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closure() -> (Vocabulary, SubclassClosure) {
        let v = Vocabulary::default();
        let c = subclass_closure(&SchemaAxioms::standard(&v)).unwrap();
        (v, c)
    }

    #[test]
    fn simulation_is_a_resource() {
        let (v, c) = closure();
        assert_eq!(
            c.superclasses(&v.vdi_simulation),
            BTreeSet::from([v.vdi_simulation.clone(), v.css_resource.clone()])
        );
    }

    #[test]
    fn sensitivity_index_has_both_parents() {
        let (v, c) = closure();
        let s = c.superclasses(&v.sis_sensitivity_index);
        assert!(s.contains(&v.sis_influence));
        assert!(s.contains(&v.din_data_element));
        assert!(!c.is_subclass(&v.sis_influence_score, &v.din_data_element));
    }

    #[test]
    fn equivalent_classes_share_closure() {
        let (v, c) = closure();
        let parx = c.superclasses(&v.parx_interdependency);
        assert_eq!(parx, c.superclasses(&v.sis_interdependency));
        assert!(parx.contains(&v.sis_influence));
        assert!(parx.contains(&v.parx_interdependency));
    }

    #[test]
    fn unknown_class_is_reflexive_only() {
        let (_, c) = closure();
        let x = Iri::new("urn:x").unwrap();
        assert_eq!(c.superclasses(&x), BTreeSet::from([x]));
    }

    #[test]
    fn cycles_are_rejected_but_equivalence_is_not() {
        let i = |s: &str| Iri::new(format!("urn:{s}")).unwrap();
        let mut ax = SchemaAxioms {
            subclass: vec![(i("a"), i("b")), (i("b"), i("c")), (i("c"), i("a"))],
            equivalent: vec![],
            properties: vec![],
        };
        assert!(matches!(subclass_closure(&ax), Err(SchemaError::SubclassCycle(c)) if c.len() == 4));
        ax.subclass = vec![(i("a"), i("b")), (i("b"), i("c"))];
        ax.equivalent = vec![(i("a"), i("b"))];
        let c = subclass_closure(&ax).unwrap();
        assert_eq!(c.superclasses(&i("a")), c.superclasses(&i("b")));
        assert!(c.is_subclass(&i("a"), &i("c")));
    }
}
