use std::fmt;

use serde::{Serialize, Serializer};

use super::GraphError;

pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";

/// Datatypes whose literals decode to a number.
const NUMERIC_DATATYPES: &[&str] = &[
    "decimal",
    "integer",
    "double",
    "float",
    "int",
    "long",
    "short",
    "byte",
    "nonNegativeInteger",
    "nonPositiveInteger",
    "positiveInteger",
    "negativeInteger",
    "unsignedInt",
    "unsignedLong",
    "unsignedShort",
    "unsignedByte",
];

/// An absolute IRI.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    /// Wraps `value`, rejecting strings without a scheme.
    pub fn new(value: impl Into<String>) -> Result<Self, GraphError> {
        let value = value.into();
        if is_absolute_iri(&value) {
            Ok(Iri(value))
        } else {
            Err(GraphError::MalformedTerm(format!("IRI <{value}> is not absolute")))
        }
    }

    /// Wraps a string already known to be absolute (vocabulary constants,
    /// values read back out of a graph).
    pub(crate) fn new_unchecked(value: impl Into<String>) -> Self {
        Iri(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `#` or `/`.
    pub fn local_name(&self) -> &str {
        let cut = self.0.rfind(['#', '/']).map(|i| i + 1).unwrap_or(0);
        &self.0[cut..]
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl Serialize for Iri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// `scheme ":" ...` with an RFC 3986 scheme.
pub fn is_absolute_iri(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Some(datatype),
            language: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: Some(language.into()),
        }
    }

    pub fn decimal(lexical: impl Into<String>) -> Self {
        Literal::typed(lexical, Iri::new_unchecked(XSD_DECIMAL))
    }

    pub fn integer(value: i64) -> Self {
        Literal::typed(value.to_string(), Iri::new_unchecked(XSD_INTEGER))
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// True when the datatype is one of the XSD numeric types.
    pub fn is_numeric_type(&self) -> bool {
        self.datatype
            .as_ref()
            .and_then(|dt| dt.as_str().strip_prefix(XSD))
            .is_some_and(|local| NUMERIC_DATATYPES.contains(&local))
    }

    /// Decoded value of a numeric literal. `None` for non-numeric datatypes
    /// and for numeric literals with an invalid lexical form.
    pub fn numeric_value(&self) -> Option<f64> {
        if !self.is_numeric_type() {
            return None;
        }
        parse_xsd_number(&self.lexical)
    }

    /// Lexical form decoded as a number regardless of the datatype.
    /// Plain literals like `"0.7"` are accepted by typed layers.
    pub fn lenient_numeric_value(&self) -> Option<f64> {
        self.numeric_value().or_else(|| {
            if self.datatype.is_none() || self.datatype.as_ref().map(Iri::as_str) == Some(XSD_STRING) {
                parse_xsd_number(self.lexical.trim())
            } else {
                None
            }
        })
    }

    /// Whether the lexical form is valid for a datatype this crate knows how
    /// to check. Unknown datatypes are always accepted.
    pub fn is_well_formed(&self) -> bool {
        match self.datatype.as_ref().map(Iri::as_str) {
            Some(XSD_BOOLEAN) => matches!(self.lexical.as_str(), "true" | "false" | "0" | "1"),
            Some(_) if self.is_numeric_type() => {
                let local = self.datatype.as_ref().unwrap().local_name();
                match local {
                    "decimal" => is_decimal_lexical(&self.lexical),
                    "double" | "float" => parse_xsd_number(&self.lexical).is_some(),
                    _ => is_integer_lexical(&self.lexical),
                }
            }
            _ => true,
        }
    }
}

fn parse_xsd_number(lexical: &str) -> Option<f64> {
    match lexical {
        "INF" | "+INF" => return Some(f64::INFINITY),
        "-INF" => return Some(f64::NEG_INFINITY),
        "NaN" => return Some(f64::NAN),
        _ => {}
    }
    let valid = lexical
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
    if !valid || lexical.is_empty() {
        return None;
    }
    lexical.parse::<f64>().ok()
}

fn is_integer_lexical(lexical: &str) -> bool {
    let digits = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

fn is_decimal_lexical(lexical: &str) -> bool {
    let body = lexical.strip_prefix(['+', '-']).unwrap_or(lexical);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    (!int.is_empty() || !frac.is_empty())
        && int.chars().all(|c| c.is_ascii_digit())
        && frac.chars().all(|c| c.is_ascii_digit())
}

/// An RDF term, or a query variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    BlankNode(String),
    Literal(Literal),
    Variable(String),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, GraphError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::BlankNode(label.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn as_variable(&self) -> Option<&str> {
        match self {
            Term::Variable(name) => Some(name),
            _ => None,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }

    /// N-Triples style rendering, used for deterministic ordering of query
    /// rows and for diagnostics.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::BlankNode(label) => write!(f, "_:{label}"),
            Term::Variable(name) => write!(f, "?{name}"),
            Term::Literal(lit) => {
                write!(f, "\"{}\"", escape_string(&lit.lexical))?;
                if let Some(lang) = &lit.language {
                    write!(f, "@{lang}")
                } else if let Some(dt) = &lit.datatype {
                    write!(f, "^^<{dt}>")
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&Term::Literal(self.clone()).canonical())
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical())
    }
}

pub(crate) fn escape_string(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 || c as u32 == 0x7f => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// A stored statement. Construct through [`Triple::new`] to enforce the
/// position constraints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, GraphError> {
        let triple = Triple {
            subject,
            predicate,
            object,
        };
        triple.check()?;
        Ok(triple)
    }

    pub(crate) fn check(&self) -> Result<(), GraphError> {
        match &self.subject {
            Term::Iri(_) | Term::BlankNode(_) => {}
            other => {
                return Err(GraphError::MalformedTerm(format!(
                    "subject {other} must be an IRI or blank node"
                )))
            }
        }
        if !matches!(self.predicate, Term::Iri(_)) {
            return Err(GraphError::MalformedTerm(format!(
                "predicate {} must be an IRI",
                self.predicate
            )));
        }
        if self.object.is_variable() {
            return Err(GraphError::MalformedTerm(format!(
                "object {} is a variable",
                self.object
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A triple whose positions may hold variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl TriplePattern {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    pub fn positions(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    /// Variable names in subject, predicate, object order (with repeats).
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.positions().into_iter().filter_map(Term::as_variable)
    }
}

impl From<&Triple> for TriplePattern {
    fn from(t: &Triple) -> Self {
        TriplePattern::new(t.subject.clone(), t.predicate.clone(), t.object.clone())
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
