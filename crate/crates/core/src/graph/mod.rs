//! Terms, triples and the indexed in-memory store every other layer reads.
//!
//! Terms are interned once; the store keeps three orderings of the id
//! triples (SPO, POS, OSP) so that any pattern with at least one bound
//! position is answered by a range scan.

mod prefix;
mod term;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Bound;

use thiserror::Error;

pub use prefix::PrefixMap;
pub use term::{
    is_absolute_iri, Iri, Literal, Term, Triple, TriplePattern, RDF_TYPE, XSD, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE,
    XSD_INTEGER, XSD_STRING,
};

pub(crate) use term::escape_string;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed term: {0}")]
    MalformedTerm(String),
    #[error("unknown prefix '{0}'")]
    UnknownPrefix(String),
    #[error("prefix '{label}' bound to both <{first}> and <{second}>")]
    PrefixConflict {
        label: String,
        first: String,
        second: String,
    },
}

/// Variable name to term.
pub type Binding = BTreeMap<String, Term>;

type Id = u32;
type Key = (Id, Id, Id);

/// A set of triples plus the prefix table it was loaded with.
///
/// Mutation needs `&mut`; once loading is done the graph is shared
/// read-only (it is `Send + Sync`).
#[derive(Clone, Debug, Default)]
pub struct Graph {
    terms: Vec<Term>,
    ids: HashMap<Term, Id>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    prefixes: PrefixMap,
}

impl PartialEq for Graph {
    /// Triple-set equality; prefixes are not compared.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|t| other.contains(&t))
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prefixes(prefixes: PrefixMap) -> Self {
        Graph {
            prefixes,
            ..Self::default()
        }
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    fn intern(&mut self, term: &Term) -> Id {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = Id::try_from(self.terms.len()).expect("term table overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    fn lookup(&self, term: &Term) -> Option<Id> {
        self.ids.get(term).copied()
    }

    fn term(&self, id: Id) -> &Term {
        &self.terms[id as usize]
    }

    /// Adds `triple`; returns whether it was new.
    pub fn insert(&mut self, triple: &Triple) -> Result<bool, GraphError> {
        triple.check()?;
        let s = self.intern(&triple.subject);
        let p = self.intern(&triple.predicate);
        let o = self.intern(&triple.object);
        let fresh = self.spo.insert((s, p, o));
        if fresh {
            self.pos.insert((p, o, s));
            self.osp.insert((o, s, p));
        }
        Ok(fresh)
    }

    /// Convenience for `insert(Triple::new(..))`.
    pub fn add(&mut self, subject: Term, predicate: Term, object: Term) -> Result<bool, GraphError> {
        self.insert(&Triple::new(subject, predicate, object)?)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let (Some(s), Some(p), Some(o)) = (
            self.lookup(&triple.subject),
            self.lookup(&triple.predicate),
            self.lookup(&triple.object),
        ) else {
            return false;
        };
        let removed = self.spo.remove(&(s, p, o));
        if removed {
            self.pos.remove(&(p, o, s));
            self.osp.remove(&(o, s, p));
        }
        removed
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        match (
            self.lookup(&triple.subject),
            self.lookup(&triple.predicate),
            self.lookup(&triple.object),
        ) {
            (Some(s), Some(p), Some(o)) => self.spo.contains(&(s, p, o)),
            _ => false,
        }
    }

    /// All triples in SPO id order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(move |&(s, p, o)| self.materialize(s, p, o))
    }

    fn materialize(&self, s: Id, p: Id, o: Id) -> Triple {
        Triple {
            subject: self.term(s).clone(),
            predicate: self.term(p).clone(),
            object: self.term(o).clone(),
        }
    }

    /// Id triples (in s, p, o order) matching the bound positions.
    fn scan(&self, s: Option<Id>, p: Option<Id>, o: Option<Id>) -> Vec<Key> {
        fn range(index: &BTreeSet<Key>, a: Option<Id>, b: Option<Id>) -> Vec<Key> {
            let (lo, hi) = match (a, b) {
                (Some(a), Some(b)) => ((a, b, 0), (a, b, Id::MAX)),
                (Some(a), None) => ((a, 0, 0), (a, Id::MAX, Id::MAX)),
                (None, _) => ((0, 0, 0), (Id::MAX, Id::MAX, Id::MAX)),
            };
            index
                .range((Bound::Included(lo), Bound::Included(hi)))
                .copied()
                .collect()
        }
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                if self.spo.contains(&(s, p, o)) {
                    vec![(s, p, o)]
                } else {
                    Vec::new()
                }
            }
            (Some(_), _, None) => range(&self.spo, s, p),
            (Some(_), None, Some(_)) => range(&self.osp, o, s).into_iter().map(|(o, s, p)| (s, p, o)).collect(),
            (None, Some(_), _) => range(&self.pos, p, o).into_iter().map(|(p, o, s)| (s, p, o)).collect(),
            (None, None, Some(_)) => range(&self.osp, o, None)
                .into_iter()
                .map(|(o, s, p)| (s, p, o))
                .collect(),
            (None, None, None) => self.spo.iter().copied().collect(),
        }
    }

    /// Resolves a constant position. `Err(())` means the term is not in the
    /// graph so nothing can match.
    fn bound_id(&self, term: Option<&Term>) -> Result<Option<Id>, ()> {
        match term {
            None | Some(Term::Variable(_)) => Ok(None),
            Some(t) => self.lookup(t).map(Some).ok_or(()),
        }
    }

    /// Triples matching the given constant positions (`None` is a wildcard).
    pub fn triples_matching(
        &self,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> Vec<Triple> {
        let (Ok(s), Ok(p), Ok(o)) = (self.bound_id(subject), self.bound_id(predicate), self.bound_id(object)) else {
            return Vec::new();
        };
        self.scan(s, p, o)
            .into_iter()
            .map(|(s, p, o)| self.materialize(s, p, o))
            .collect()
    }

    /// Number of triples matching the constant positions of `pattern`.
    pub fn estimate(&self, pattern: &TriplePattern) -> usize {
        let (Ok(s), Ok(p), Ok(o)) = (
            self.bound_id(Some(&pattern.subject)),
            self.bound_id(Some(&pattern.predicate)),
            self.bound_id(Some(&pattern.object)),
        ) else {
            return 0;
        };
        self.scan(s, p, o).len()
    }

    /// Every binding of the pattern's variables that turns it into a stored
    /// triple. A ground pattern yields one empty binding when present.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Binding> {
        let (Ok(s), Ok(p), Ok(o)) = (
            self.bound_id(Some(&pattern.subject)),
            self.bound_id(Some(&pattern.predicate)),
            self.bound_id(Some(&pattern.object)),
        ) else {
            return Vec::new();
        };
        let positions = pattern.positions();
        self.scan(s, p, o)
            .into_iter()
            .filter_map(|(s, p, o)| {
                let mut binding = Binding::new();
                for (slot, id) in positions.iter().zip([s, p, o]) {
                    if let Term::Variable(name) = slot {
                        let value = self.term(id);
                        match binding.get(name) {
                            Some(prev) if prev != value => return None,
                            Some(_) => {}
                            None => {
                                binding.insert(name.clone(), value.clone());
                            }
                        }
                    }
                }
                Some(binding)
            })
            .collect()
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects(&self, subject: &Term, predicate: &Term) -> Vec<Term> {
        self.triples_matching(Some(subject), Some(predicate), None)
            .into_iter()
            .map(|t| t.object)
            .collect()
    }

    /// Subjects of `(?, predicate, object)`.
    pub fn subjects(&self, predicate: &Term, object: &Term) -> Vec<Term> {
        self.triples_matching(None, Some(predicate), Some(object))
            .into_iter()
            .map(|t| t.subject)
            .collect()
    }

    /// Adds all triples of `other` and merges its prefix table.
    pub fn extend_from(&mut self, other: &Graph) -> Result<(), GraphError> {
        self.prefixes.merge(other.prefixes())?;
        for t in other.iter() {
            self.insert(&t)?;
        }
        Ok(())
    }
}
