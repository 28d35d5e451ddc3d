use std::collections::BTreeMap;

use super::term::Iri;
use super::GraphError;
use crate::syntax::is_valid_local_name;

/// Prefix label to namespace IRI table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `label`, replacing any previous binding.
    pub fn insert(&mut self, label: impl Into<String>, namespace: impl Into<String>) {
        self.entries.insert(label.into(), namespace.into());
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.entries.get(label).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Adds every binding of `other`. A label already bound to a different
    /// namespace is a conflict and nothing is merged.
    pub fn merge(&mut self, other: &PrefixMap) -> Result<(), GraphError> {
        for (label, ns) in other.iter() {
            if let Some(existing) = self.get(label) {
                if existing != ns {
                    return Err(GraphError::PrefixConflict {
                        label: label.to_string(),
                        first: existing.to_string(),
                        second: ns.to_string(),
                    });
                }
            }
        }
        for (label, ns) in other.iter() {
            self.insert(label, ns);
        }
        Ok(())
    }

    /// Resolves `prefix:local` (or `<iri>`) to a full IRI.
    pub fn expand(&self, curie: &str) -> Result<Iri, GraphError> {
        let curie = curie.trim();
        if let Some(inner) = curie.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            return Iri::new(inner);
        }
        let Some((label, local)) = curie.split_once(':') else {
            return Err(GraphError::UnknownPrefix(curie.to_string()));
        };
        match self.get(label) {
            Some(ns) => Iri::new(format!("{ns}{local}")),
            None => Err(GraphError::UnknownPrefix(label.to_string())),
        }
    }

    /// Shortest prefixed form of `iri`, or `<iri>` when no namespace
    /// covers it with a valid local name.
    pub fn compact(&self, iri: &str) -> String {
        self.try_compact(iri).unwrap_or_else(|| format!("<{iri}>"))
    }

    pub fn try_compact(&self, iri: &str) -> Option<String> {
        self.entries
            .iter()
            .filter_map(|(label, ns)| {
                let local = iri.strip_prefix(ns.as_str())?;
                is_valid_local_name(local).then_some((ns.len(), label, local))
            })
            // longest namespace wins, then the smallest label
            .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)))
            .map(|(_, label, local)| format!("{label}:{local}"))
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for PrefixMap {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        let mut map = PrefixMap::new();
        for (k, v) in iter {
            map.insert(k, v);
        }
        map
    }
}
