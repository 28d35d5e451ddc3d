//! SELECT queries over basic graph patterns.
//!
//! Supported: `PREFIX`/`BASE` prologue, `SELECT ?v ...` or `SELECT *`, a
//! single `WHERE { ... }` block of triple patterns with `a`, `;` and `,`.
//! Everything else (FILTER, OPTIONAL, UNION, paths, modifiers) is rejected
//! with an error naming the construct.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{Binding, Graph, Iri, Literal, PrefixMap, Term, TriplePattern, RDF_TYPE};
use crate::graph::{XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER};
use crate::syntax::{Lexer, ParseError, ParseErrorKind, Pos, Tok, Token};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{line}:{column}: unsupported: {feature}")]
    Unsupported {
        feature: String,
        line: usize,
        column: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectQuery {
    pub projected: Vec<String>,
    pub patterns: Vec<TriplePattern>,
}

/// Query answer: `rows[i][j]` is the value of `header[j]` in solution `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl ResultTable {
    pub fn column(&self, var: &str) -> Option<usize> {
        self.header.iter().position(|h| h == var)
    }

    /// Values of one variable across all rows, in row order.
    pub fn values(&self, var: &str) -> Vec<&Term> {
        match self.column(var) {
            Some(i) => self.rows.iter().map(|r| &r[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

const UNSUPPORTED_KEYWORDS: &[&str] = &[
    "OPTIONAL",
    "FILTER",
    "UNION",
    "MINUS",
    "BIND",
    "VALUES",
    "GRAPH",
    "SERVICE",
    "DISTINCT",
    "REDUCED",
    "ORDER",
    "GROUP",
    "HAVING",
    "LIMIT",
    "OFFSET",
    "CONSTRUCT",
    "ASK",
    "DESCRIBE",
    "FROM",
    "NAMED",
    "INSERT",
    "DELETE",
    "LOAD",
    "CLEAR",
    "DROP",
    "CREATE",
    "EXISTS",
    "NOT",
];

/// Parses `text`. Prefixed names resolve against the query's own `PREFIX`
/// declarations first, then `defaults` (typically the graph's table).
pub fn parse_query(text: &str, defaults: &PrefixMap) -> Result<SelectQuery, QueryError> {
    QueryParser {
        lexer: Lexer::new(text),
        peeked: None,
        prefixes: defaults.clone(),
        base: None,
        blank_vars: 0,
    }
    .parse()
}

struct QueryParser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Token>,
    prefixes: PrefixMap,
    base: Option<String>,
    blank_vars: usize,
}

fn syntactic(pos: Pos, message: impl Into<String>) -> QueryError {
    ParseError::new(ParseErrorKind::Syntactic, pos, message).into()
}

fn unsupported(feature: impl Into<String>, pos: Pos) -> QueryError {
    QueryError::Unsupported {
        feature: feature.into(),
        line: pos.line,
        column: pos.column,
    }
}

/// Name reserved for `_:x` labels used inside patterns; never projected.
const BLANK_VAR_PREFIX: &str = "_bnode_";

impl<'a> QueryParser<'a> {
    fn peek(&mut self) -> Result<&Token, QueryError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn next(&mut self) -> Result<Token, QueryError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => Ok(self.lexer.next_token()?),
        }
    }

    fn reject_keyword(tok: &Tok, pos: Pos) -> Result<(), QueryError> {
        if let Tok::Word(w) = tok {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED_KEYWORDS.contains(&upper.as_str()) {
                return Err(unsupported(upper, pos));
            }
        }
        Ok(())
    }

    fn is_keyword(tok: &Tok, keyword: &str) -> bool {
        matches!(tok, Tok::Word(w) if w.eq_ignore_ascii_case(keyword))
    }

    fn parse(mut self) -> Result<SelectQuery, QueryError> {
        // prologue
        loop {
            let t = self.peek()?.clone();
            if Self::is_keyword(&t.tok, "PREFIX") {
                self.next()?;
                let label = self.next()?;
                let Tok::PName { prefix, local } = label.tok else {
                    return Err(syntactic(
                        label.pos,
                        format!("expected prefix label, found {}", label.tok),
                    ));
                };
                if !local.is_empty() {
                    return Err(syntactic(label.pos, "prefix label must end with ':'"));
                }
                let ns = self.next()?;
                let Tok::IriRef(iri) = ns.tok else {
                    return Err(syntactic(ns.pos, format!("expected namespace IRI, found {}", ns.tok)));
                };
                let iri = self.resolve(&iri, ns.pos)?;
                self.prefixes.insert(prefix, iri);
            } else if Self::is_keyword(&t.tok, "BASE") {
                self.next()?;
                let b = self.next()?;
                match b.tok {
                    Tok::IriRef(iri) if crate::graph::is_absolute_iri(&iri) => self.base = Some(iri),
                    other => return Err(syntactic(b.pos, format!("expected absolute base IRI, found {other}"))),
                }
            } else {
                break;
            }
        }

        let t = self.next()?;
        Self::reject_keyword(&t.tok, t.pos)?;
        if !Self::is_keyword(&t.tok, "SELECT") {
            return Err(syntactic(t.pos, format!("expected SELECT, found {}", t.tok)));
        }

        let mut projected = Vec::new();
        let mut star = false;
        loop {
            let t = self.peek()?.clone();
            Self::reject_keyword(&t.tok, t.pos)?;
            match t.tok {
                Tok::Var(name) => {
                    self.next()?;
                    projected.push(name);
                }
                Tok::Other('*') if projected.is_empty() && !star => {
                    self.next()?;
                    star = true;
                }
                Tok::LParen => return Err(unsupported("projection expressions", t.pos)),
                _ => break,
            }
        }
        if projected.is_empty() && !star {
            let t = self.peek()?.clone();
            return Err(syntactic(
                t.pos,
                format!("expected projection variables, found {}", t.tok),
            ));
        }

        let t = self.next()?;
        Self::reject_keyword(&t.tok, t.pos)?;
        let open = if Self::is_keyword(&t.tok, "WHERE") {
            self.next()?
        } else {
            t
        };
        if open.tok != Tok::LBrace {
            return Err(syntactic(open.pos, format!("expected '{{', found {}", open.tok)));
        }

        let patterns = self.group()?;

        let t = self.next()?;
        if t.tok != Tok::Eof {
            Self::reject_keyword(&t.tok, t.pos)?;
            return Err(syntactic(t.pos, format!("unexpected {} after WHERE clause", t.tok)));
        }

        let mentioned: Vec<&str> = patterns.iter().flat_map(TriplePattern::variables).collect();
        if star {
            let mut seen = BTreeSet::new();
            for v in &mentioned {
                if !v.starts_with(BLANK_VAR_PREFIX) && seen.insert(*v) {
                    projected.push(v.to_string());
                }
            }
        } else {
            for v in &projected {
                if !mentioned.contains(&v.as_str()) {
                    return Err(syntactic(
                        Pos { line: 1, column: 1 },
                        format!("projected variable ?{v} does not occur in the WHERE clause"),
                    ));
                }
            }
        }
        Ok(SelectQuery { projected, patterns })
    }

    fn resolve(&self, iri: &str, pos: Pos) -> Result<String, QueryError> {
        if crate::graph::is_absolute_iri(iri) {
            return Ok(iri.to_string());
        }
        match &self.base {
            Some(base) => Ok(format!("{base}{iri}")),
            None => Err(syntactic(pos, format!("relative IRI <{iri}> without BASE"))),
        }
    }

    fn group(&mut self) -> Result<Vec<TriplePattern>, QueryError> {
        let mut patterns = Vec::new();
        loop {
            let t = self.peek()?.clone();
            match t.tok {
                Tok::RBrace => {
                    self.next()?;
                    return Ok(patterns);
                }
                Tok::Dot if !patterns.is_empty() => {
                    self.next()?;
                }
                Tok::LBrace => return Err(unsupported("nested group patterns", t.pos)),
                Tok::Eof => return Err(syntactic(t.pos, "unterminated WHERE clause")),
                _ => {
                    self.triples(&mut patterns)?;
                    let t = self.peek()?.clone();
                    match t.tok {
                        Tok::Dot | Tok::RBrace => {}
                        _ => {
                            Self::reject_keyword(&t.tok, t.pos)?;
                            return Err(syntactic(t.pos, format!("expected '.' or '}}', found {}", t.tok)));
                        }
                    }
                }
            }
        }
    }

    fn triples(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.term("subject")?;
        loop {
            let t = self.peek()?.clone();
            let predicate = if matches!(&t.tok, Tok::Word(w) if w == "a") {
                self.next()?;
                Term::Iri(Iri::new_unchecked(RDF_TYPE))
            } else {
                let p = self.term("predicate")?;
                if matches!(p, Term::Literal(_) | Term::BlankNode(_)) {
                    return Err(syntactic(t.pos, "predicate must be an IRI or variable"));
                }
                p
            };
            if let Tok::Other(c @ ('/' | '|' | '*' | '+' | '?')) = self.peek()?.tok {
                let pos = self.peek()?.pos;
                return Err(unsupported(format!("property path '{c}'"), pos));
            }
            loop {
                let object = self.term("object")?;
                out.push(TriplePattern::new(subject.clone(), predicate.clone(), object));
                if self.peek()?.tok == Tok::Comma {
                    self.next()?;
                } else {
                    break;
                }
            }
            if self.peek()?.tok != Tok::Semicolon {
                return Ok(());
            }
            while self.peek()?.tok == Tok::Semicolon {
                self.next()?;
            }
            if matches!(self.peek()?.tok, Tok::Dot | Tok::RBrace) {
                return Ok(());
            }
        }
    }

    fn term(&mut self, role: &str) -> Result<Term, QueryError> {
        let t = self.next()?;
        Self::reject_keyword(&t.tok, t.pos)?;
        let typed = |lex: &str, dt: &str| Term::Literal(Literal::typed(lex, Iri::new_unchecked(dt)));
        Ok(match t.tok {
            Tok::Var(name) => Term::Variable(name),
            Tok::IriRef(iri) => Term::Iri(Iri::new_unchecked(self.resolve(&iri, t.pos)?)),
            Tok::PName { prefix, local } => self.expand(&prefix, &local, t.pos)?,
            Tok::BlankLabel(label) => {
                self.blank_vars += 1;
                Term::Variable(format!("{BLANK_VAR_PREFIX}{label}"))
            }
            Tok::Integer(n) => typed(&n, XSD_INTEGER),
            Tok::Decimal(n) => typed(&n, XSD_DECIMAL),
            Tok::Double(n) => typed(&n, XSD_DOUBLE),
            Tok::Word(w) if w == "true" || w == "false" => typed(&w, XSD_BOOLEAN),
            Tok::Str(value) => match self.peek()?.tok.clone() {
                Tok::LangTag(lang) => {
                    self.next()?;
                    Term::Literal(Literal::lang(value, lang))
                }
                Tok::DatatypeMark => {
                    self.next()?;
                    let dt = self.next()?;
                    let iri = match dt.tok {
                        Tok::IriRef(i) => Iri::new_unchecked(self.resolve(&i, dt.pos)?),
                        Tok::PName { prefix, local } => match self.expand(&prefix, &local, dt.pos)? {
                            Term::Iri(i) => i,
                            _ => unreachable!(),
                        },
                        other => return Err(syntactic(dt.pos, format!("expected datatype IRI, found {other}"))),
                    };
                    Term::Literal(Literal::typed(value, iri))
                }
                _ => Term::Literal(Literal::plain(value)),
            },
            Tok::LBracket => return Err(unsupported("blank node property lists", t.pos)),
            Tok::LParen => return Err(unsupported("collections", t.pos)),
            Tok::LBrace => return Err(unsupported("nested group patterns", t.pos)),
            Tok::Other(c @ ('^' | '!')) => return Err(unsupported(format!("property path '{c}'"), t.pos)),
            other => return Err(syntactic(t.pos, format!("expected {role}, found {other}"))),
        })
    }

    fn expand(&self, prefix: &str, local: &str, pos: Pos) -> Result<Term, QueryError> {
        match self.prefixes.get(prefix) {
            Some(ns) => Ok(Term::Iri(Iri::new_unchecked(format!("{ns}{local}")))),
            None => Err(ParseError::new(
                ParseErrorKind::UnknownPrefix,
                pos,
                format!("prefix '{prefix}:' is not declared"),
            )
            .into()),
        }
    }
}

fn substitute(pattern: &TriplePattern, binding: &Binding) -> TriplePattern {
    let bind = |t: &Term| match t {
        Term::Variable(name) => binding.get(name).cloned().unwrap_or_else(|| t.clone()),
        other => other.clone(),
    };
    TriplePattern::new(bind(&pattern.subject), bind(&pattern.predicate), bind(&pattern.object))
}

/// All solutions of `patterns` evaluated strictly left to right with
/// index lookups. Exposed so join-order independence can be checked.
pub fn solutions(graph: &Graph, patterns: &[TriplePattern]) -> Vec<Binding> {
    let mut current = vec![Binding::new()];
    for pattern in patterns {
        let mut next = Vec::new();
        for binding in &current {
            let bound = substitute(pattern, binding);
            for extension in graph.match_pattern(&bound) {
                let mut merged = binding.clone();
                merged.extend(extension);
                next.push(merged);
            }
        }
        if next.is_empty() {
            return next;
        }
        current = next;
    }
    current
}

/// Evaluation order: ascending count of triples matching each pattern's
/// constants, original position breaking ties.
pub fn join_order(graph: &Graph, patterns: &[TriplePattern]) -> Vec<usize> {
    let mut order: Vec<(usize, usize)> = patterns
        .iter()
        .enumerate()
        .map(|(i, p)| (graph.estimate(p), i))
        .collect();
    order.sort();
    order.into_iter().map(|(_, i)| i).collect()
}

/// Runs `query`: joins all patterns (bag semantics), projects, and sorts
/// rows by the canonical forms of the projected terms.
pub fn execute(graph: &Graph, query: &SelectQuery) -> ResultTable {
    let ordered: Vec<TriplePattern> = join_order(graph, &query.patterns)
        .into_iter()
        .map(|i| query.patterns[i].clone())
        .collect();
    let mut rows: Vec<Vec<Term>> = solutions(graph, &ordered)
        .into_iter()
        .map(|b| {
            query
                .projected
                .iter()
                .map(|v| b.get(v).cloned().expect("projected variables occur in patterns"))
                .collect()
        })
        .collect();
    rows.sort_by_cached_key(|row| row.iter().map(Term::canonical).collect::<Vec<_>>());
    ResultTable {
        header: query.projected.clone(),
        rows,
    }
}

/// Parses and executes in one step, using the graph's prefixes as defaults.
pub fn run(graph: &Graph, text: &str) -> Result<ResultTable, QueryError> {
    let query = parse_query(text, graph.prefixes())?;
    Ok(execute(graph, &query))
}
