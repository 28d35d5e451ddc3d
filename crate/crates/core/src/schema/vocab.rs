use crate::graph::{Iri, PrefixMap, Term};

pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const OWL_EQUIVALENT_CLASS: &str = "http://www.w3.org/2002/07/owl#equivalentClass";

/// Namespace IRIs of the aligned design patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Namespaces {
    pub css: String,
    pub vdi3633: String,
    pub dinen61360: String,
    pub sis: String,
    pub parx: String,
}

impl Default for Namespaces {
    fn default() -> Self {
        Namespaces {
            css: "http://www.w3id.org/hsu-aut/css#".into(),
            vdi3633: "http://www.w3id.org/hsu-aut/VDI3633#".into(),
            dinen61360: "http://www.w3id.org/hsu-aut/DINEN61360#".into(),
            sis: "http://www.w3id.org/hsu-aut/SiS#".into(),
            parx: "http://www.w3id.org/hsu-aut/ParX#".into(),
        }
    }
}

impl Namespaces {
    /// Prefix labels looked up in [`Namespaces::from_prefixes`].
    pub const LABELS: [&'static str; 5] = ["CSS", "VDI3633", "DINEN61360", "SiS", "ParX"];

    /// Defaults, overridden by any of the conventional labels bound in
    /// `prefixes`.
    pub fn from_prefixes(prefixes: &PrefixMap) -> Self {
        let mut ns = Namespaces::default();
        let slots: [&mut String; 5] = [
            &mut ns.css,
            &mut ns.vdi3633,
            &mut ns.dinen61360,
            &mut ns.sis,
            &mut ns.parx,
        ];
        for (label, slot) in Self::LABELS.iter().zip(slots) {
            if let Some(iri) = prefixes.get(label) {
                *slot = iri.to_string();
            }
        }
        ns
    }

    pub fn prefix_map(&self) -> PrefixMap {
        Self::LABELS
            .iter()
            .zip([&self.css, &self.vdi3633, &self.dinen61360, &self.sis, &self.parx])
            .map(|(l, n)| (l.to_string(), n.clone()))
            .collect()
    }
}

/// Every class and property IRI the model uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    pub rdf_type: Iri,
    pub rdfs_subclass_of: Iri,
    pub owl_equivalent_class: Iri,

    pub css_resource: Iri,
    pub css_process: Iri,
    pub css_capability: Iri,
    pub css_provides_capability: Iri,
    pub css_requires_capability: Iri,
    pub css_executes: Iri,

    pub vdi_simulation: Iri,
    pub vdi_data: Iri,
    pub vdi_has_process_quantity: Iri,
    pub vdi_has_results_data: Iri,

    pub din_data_element: Iri,
    pub din_type_description: Iri,
    pub din_instance_description: Iri,
    pub din_has_data_element: Iri,
    pub din_has_type_description: Iri,
    pub din_has_instance_description: Iri,
    pub din_value: Iri,
    pub din_unit_of_measure: Iri,

    pub sis_quality_criteria: Iri,
    pub sis_has_quality_criteria: Iri,
    pub sis_influence: Iri,
    pub sis_sensitivity_index: Iri,
    pub sis_influence_score: Iri,
    pub sis_interdependency: Iri,
    pub sis_has_influence: Iri,
    pub sis_has_influence_on: Iri,
    pub sis_is_influence_for: Iri,

    pub parx_interdependency: Iri,
    pub parx_has_application: Iri,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary::new(&Namespaces::default())
    }
}

impl Vocabulary {
    pub fn new(ns: &Namespaces) -> Self {
        let i = |base: &str, local: &str| Iri::new_unchecked(format!("{base}{local}"));
        Vocabulary {
            rdf_type: Iri::new_unchecked(crate::graph::RDF_TYPE),
            rdfs_subclass_of: Iri::new_unchecked(RDFS_SUBCLASS_OF),
            owl_equivalent_class: Iri::new_unchecked(OWL_EQUIVALENT_CLASS),

            css_resource: i(&ns.css, "Resource"),
            css_process: i(&ns.css, "Process"),
            css_capability: i(&ns.css, "Capability"),
            css_provides_capability: i(&ns.css, "providesCapability"),
            css_requires_capability: i(&ns.css, "requiresCapability"),
            css_executes: i(&ns.css, "executes"),

            vdi_simulation: i(&ns.vdi3633, "Simulation"),
            vdi_data: i(&ns.vdi3633, "Data"),
            vdi_has_process_quantity: i(&ns.vdi3633, "hasProcessQuantity"),
            vdi_has_results_data: i(&ns.vdi3633, "hasResultsData"),

            din_data_element: i(&ns.dinen61360, "DataElement"),
            din_type_description: i(&ns.dinen61360, "TypeDescription"),
            din_instance_description: i(&ns.dinen61360, "InstanceDescription"),
            din_has_data_element: i(&ns.dinen61360, "has_Data_Element"),
            din_has_type_description: i(&ns.dinen61360, "has_Type_Description"),
            din_has_instance_description: i(&ns.dinen61360, "has_Instance_Description"),
            din_value: i(&ns.dinen61360, "value"),
            din_unit_of_measure: i(&ns.dinen61360, "Unit_of_Measure"),

            sis_quality_criteria: i(&ns.sis, "QualityCriteria"),
            sis_has_quality_criteria: i(&ns.sis, "hasQualityCriteria"),
            sis_influence: i(&ns.sis, "Influence"),
            sis_sensitivity_index: i(&ns.sis, "SensitivityIndex"),
            sis_influence_score: i(&ns.sis, "InfluenceScore"),
            sis_interdependency: i(&ns.sis, "Interdependency"),
            sis_has_influence: i(&ns.sis, "hasInfluence"),
            sis_has_influence_on: i(&ns.sis, "hasInfluenceOn"),
            sis_is_influence_for: i(&ns.sis, "isInfluenceFor"),

            parx_interdependency: i(&ns.parx, "Interdependency"),
            parx_has_application: i(&ns.parx, "hasApplication"),
        }
    }

    /// Vocabulary for a graph, honouring its bindings of the conventional
    /// prefix labels.
    pub fn for_prefixes(prefixes: &PrefixMap) -> Self {
        Vocabulary::new(&Namespaces::from_prefixes(prefixes))
    }

    pub fn all(&self) -> Vec<&Iri> {
        vec![
            &self.rdf_type,
            &self.rdfs_subclass_of,
            &self.owl_equivalent_class,
            &self.css_resource,
            &self.css_process,
            &self.css_capability,
            &self.css_provides_capability,
            &self.css_requires_capability,
            &self.css_executes,
            &self.vdi_simulation,
            &self.vdi_data,
            &self.vdi_has_process_quantity,
            &self.vdi_has_results_data,
            &self.din_data_element,
            &self.din_type_description,
            &self.din_instance_description,
            &self.din_has_data_element,
            &self.din_has_type_description,
            &self.din_has_instance_description,
            &self.din_value,
            &self.din_unit_of_measure,
            &self.sis_quality_criteria,
            &self.sis_has_quality_criteria,
            &self.sis_influence,
            &self.sis_sensitivity_index,
            &self.sis_influence_score,
            &self.sis_interdependency,
            &self.sis_has_influence,
            &self.sis_has_influence_on,
            &self.sis_is_influence_for,
            &self.parx_interdependency,
            &self.parx_has_application,
        ]
    }
}

pub(crate) fn t(iri: &Iri) -> Term {
    Term::Iri(iri.clone())
}
