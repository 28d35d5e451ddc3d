//! Turtle reader and writer for the subset used by the model files:
//! prefix and base directives, prefixed names, absolute and base-relative
//! IRIs, `a`, string / numeric / boolean literals, predicate-object lists
//! and object lists. Collections and `[ ]` property lists are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::graph::{
    escape_string, Graph, Iri, Literal, PrefixMap, Term, Triple, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE,
    XSD_INTEGER,
};
use crate::syntax::{Lexer, ParseError, ParseErrorKind, Pos, Tok, Token};

/// Parses a Turtle document into a graph carrying the document's prefixes.
pub fn parse_turtle(text: &str) -> Result<Graph, ParseError> {
    TurtleParser::new(text).parse()
}

struct TurtleParser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Token>,
    base: Option<String>,
    graph: Graph,
}

fn syntactic(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::new(ParseErrorKind::Syntactic, pos, message)
}

impl<'a> TurtleParser<'a> {
    fn new(text: &'a str) -> Self {
        TurtleParser {
            lexer: Lexer::new(text),
            peeked: None,
            base: None,
            graph: Graph::new(),
        }
    }

    fn peek(&mut self) -> Result<&Token, ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next_token()?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn next(&mut self) -> Result<Token, ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lexer.next_token(),
        }
    }

    fn expect_dot(&mut self, context: &str) -> Result<(), ParseError> {
        let t = self.next()?;
        if t.tok == Tok::Dot {
            Ok(())
        } else {
            Err(syntactic(t.pos, format!("expected '.' {context}, found {}", t.tok)))
        }
    }

    fn parse(mut self) -> Result<Graph, ParseError> {
        loop {
            let t = self.peek()?.clone();
            match &t.tok {
                Tok::Eof => break,
                Tok::AtPrefix => {
                    self.next()?;
                    self.prefix_body()?;
                    self.expect_dot("after @prefix directive")?;
                }
                Tok::AtBase => {
                    self.next()?;
                    self.base_body(t.pos)?;
                    self.expect_dot("after @base directive")?;
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("prefix") => {
                    self.next()?;
                    self.prefix_body()?;
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("base") => {
                    self.next()?;
                    self.base_body(t.pos)?;
                }
                _ => {
                    self.triples()?;
                    self.expect_dot("at end of statement")?;
                }
            }
        }
        Ok(self.graph)
    }

    fn prefix_body(&mut self) -> Result<(), ParseError> {
        let t = self.next()?;
        let label = match t.tok {
            Tok::PName { prefix, local } if local.is_empty() => prefix,
            other => {
                return Err(syntactic(
                    t.pos,
                    format!("expected prefix label ending in ':', found {other}"),
                ))
            }
        };
        let t = self.next()?;
        let ns = match t.tok {
            Tok::IriRef(iri) => self.resolve(&iri, t.pos)?,
            other => return Err(syntactic(t.pos, format!("expected namespace IRI, found {other}"))),
        };
        self.graph.prefixes_mut().insert(label, ns);
        Ok(())
    }

    fn base_body(&mut self, directive: Pos) -> Result<(), ParseError> {
        if self.base.is_some() {
            return Err(syntactic(directive, "only one base declaration is supported"));
        }
        let t = self.next()?;
        match t.tok {
            Tok::IriRef(iri) if crate::graph::is_absolute_iri(&iri) => {
                self.base = Some(iri);
                Ok(())
            }
            Tok::IriRef(_) => Err(syntactic(t.pos, "base IRI must be absolute")),
            other => Err(syntactic(t.pos, format!("expected base IRI, found {other}"))),
        }
    }

    fn resolve(&self, iri: &str, pos: Pos) -> Result<String, ParseError> {
        if crate::graph::is_absolute_iri(iri) {
            return Ok(iri.to_string());
        }
        let Some(base) = &self.base else {
            return Err(syntactic(pos, format!("relative IRI <{iri}> without a base")));
        };
        Ok(resolve_relative(base, iri))
    }

    fn iri_from(&self, tok: &Tok, pos: Pos) -> Result<Option<Iri>, ParseError> {
        let value = match tok {
            Tok::IriRef(iri) => self.resolve(iri, pos)?,
            Tok::PName { prefix, local } => match self.graph.prefixes().get(prefix) {
                Some(ns) => format!("{ns}{local}"),
                None => {
                    return Err(ParseError::new(
                        ParseErrorKind::UnknownPrefix,
                        pos,
                        format!("prefix '{prefix}:' is not declared"),
                    ))
                }
            },
            _ => return Ok(None),
        };
        Iri::new(value).map(Some).map_err(|e| syntactic(pos, e.to_string()))
    }

    fn unsupported(tok: &Tok, pos: Pos, role: &str) -> ParseError {
        match tok {
            Tok::LBracket => syntactic(pos, "blank node property lists '[ ]' are not supported"),
            Tok::LParen => syntactic(pos, "collections '( )' are not supported"),
            other => syntactic(pos, format!("expected {role}, found {other}")),
        }
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        let t = self.next()?;
        let subject = match &t.tok {
            Tok::BlankLabel(label) => Term::BlankNode(label.clone()),
            tok => match self.iri_from(tok, t.pos)? {
                Some(iri) => Term::Iri(iri),
                None => return Err(Self::unsupported(tok, t.pos, "subject")),
            },
        };
        loop {
            let t = self.next()?;
            let predicate = match &t.tok {
                Tok::Word(w) if w == "a" => Term::Iri(Iri::new_unchecked(RDF_TYPE)),
                tok => match self.iri_from(tok, t.pos)? {
                    Some(iri) => Term::Iri(iri),
                    None => return Err(Self::unsupported(tok, t.pos, "predicate")),
                },
            };
            loop {
                let object = self.object()?;
                self.graph
                    .insert(&Triple {
                        subject: subject.clone(),
                        predicate: predicate.clone(),
                        object,
                    })
                    .expect("parser only builds well-formed triples");
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
            if matches!(self.peek()?.tok, Tok::Dot | Tok::Eof) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        let t = self.next()?;
        let typed = |lex: &str, dt: &str| Term::Literal(Literal::typed(lex, Iri::new_unchecked(dt)));
        Ok(match &t.tok {
            Tok::BlankLabel(label) => Term::BlankNode(label.clone()),
            Tok::Integer(n) => typed(n, XSD_INTEGER),
            Tok::Decimal(n) => typed(n, XSD_DECIMAL),
            Tok::Double(n) => typed(n, XSD_DOUBLE),
            Tok::Word(w) if w == "true" || w == "false" => typed(w, XSD_BOOLEAN),
            Tok::Str(value) => match self.peek()?.tok.clone() {
                Tok::LangTag(lang) => {
                    self.next()?;
                    Term::Literal(Literal::lang(value.clone(), lang))
                }
                Tok::DatatypeMark => {
                    self.next()?;
                    let dt = self.next()?;
                    match self.iri_from(&dt.tok, dt.pos)? {
                        Some(iri) => Term::Literal(Literal::typed(value.clone(), iri)),
                        None => return Err(syntactic(dt.pos, format!("expected datatype IRI, found {}", dt.tok))),
                    }
                }
                _ => Term::Literal(Literal::plain(value.clone())),
            },
            tok => match self.iri_from(tok, t.pos)? {
                Some(iri) => Term::Iri(iri),
                None => return Err(Self::unsupported(tok, t.pos, "object")),
            },
        })
    }
}

fn resolve_relative(base: &str, rel: &str) -> String {
    let without_fragment = base.split('#').next().unwrap_or(base);
    if rel.is_empty() {
        return without_fragment.to_string();
    }
    if rel.starts_with('#') {
        return format!("{without_fragment}{rel}");
    }
    let scheme_end = base.find(':').map(|i| i + 1).unwrap_or(0);
    if rel.starts_with("//") {
        return format!("{}{rel}", &base[..scheme_end]);
    }
    if rel.starts_with('/') {
        let after_scheme = &base[scheme_end..];
        let authority_end = after_scheme
            .strip_prefix("//")
            .map(|rest| 2 + rest.find('/').unwrap_or(rest.len()))
            .unwrap_or(0);
        return format!("{}{rel}", &base[..scheme_end + authority_end]);
    }
    let dir_end = without_fragment
        .rfind('/')
        .map(|i| i + 1)
        .unwrap_or(without_fragment.len());
    format!("{}{rel}", &without_fragment[..dir_end])
}

/// Writes `graph` as Turtle: prefix declarations, then one statement per
/// subject with triples sorted by subject, predicate and object.
pub fn serialize_turtle(graph: &Graph) -> String {
    let prefixes = graph.prefixes();
    let mut out = String::new();
    for (label, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {label}: <{}> .", escape_iri(ns));
    }
    let mut grouped: BTreeMap<Term, BTreeMap<Term, Vec<Term>>> = BTreeMap::new();
    for t in graph.iter() {
        grouped
            .entry(t.subject)
            .or_default()
            .entry(t.predicate)
            .or_default()
            .push(t.object);
    }
    if !grouped.is_empty() && !prefixes.is_empty() {
        out.push('\n');
    }
    for (subject, predicates) in grouped {
        out.push_str(&write_term(&subject, prefixes, false));
        let count = predicates.len();
        for (i, (predicate, mut objects)) in predicates.into_iter().enumerate() {
            objects.sort();
            out.push_str(if i == 0 { " " } else { "    " });
            out.push_str(&write_term(&predicate, prefixes, true));
            out.push(' ');
            let rendered: Vec<String> = objects.iter().map(|o| write_term(o, prefixes, false)).collect();
            out.push_str(&rendered.join(" , "));
            out.push_str(if i + 1 == count { " .\n" } else { " ;\n" });
        }
    }
    out
}

fn escape_iri(iri: &str) -> String {
    let mut out = String::with_capacity(iri.len());
    for c in iri.chars() {
        if c.is_whitespace() || "<>\"{}|^`\\".contains(c) || (c as u32) < 0x20 {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out
}

fn write_iri(iri: &str, prefixes: &PrefixMap) -> String {
    prefixes
        .try_compact(iri)
        .unwrap_or_else(|| format!("<{}>", escape_iri(iri)))
}

fn write_term(term: &Term, prefixes: &PrefixMap, predicate: bool) -> String {
    match term {
        Term::Iri(iri) if predicate && iri.as_str() == RDF_TYPE => "a".to_string(),
        Term::Iri(iri) => write_iri(iri.as_str(), prefixes),
        Term::BlankNode(label) => format!("_:{label}"),
        Term::Variable(name) => format!("?{name}"),
        Term::Literal(lit) => write_literal(lit, prefixes),
    }
}

fn write_literal(lit: &Literal, prefixes: &PrefixMap) -> String {
    let lex = lit.lexical();
    if let Some(dt) = lit.datatype() {
        let shorthand = match dt.as_str() {
            XSD_INTEGER => is_integer_shorthand(lex),
            XSD_DECIMAL => is_decimal_shorthand(lex),
            XSD_DOUBLE => is_double_shorthand(lex),
            XSD_BOOLEAN => lex == "true" || lex == "false",
            _ => false,
        };
        if shorthand {
            return lex.to_string();
        }
    }
    let mut out = format!("\"{}\"", escape_string(lex));
    if let Some(lang) = lit.language() {
        let _ = write!(out, "@{lang}");
    } else if let Some(dt) = lit.datatype() {
        let _ = write!(out, "^^{}", write_iri(dt.as_str(), prefixes));
    }
    out
}

fn split_sign(lex: &str) -> &str {
    lex.strip_prefix(['+', '-']).unwrap_or(lex)
}

fn is_integer_shorthand(lex: &str) -> bool {
    let digits = split_sign(lex);
    !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
}

fn is_decimal_shorthand(lex: &str) -> bool {
    let Some((int, frac)) = split_sign(lex).split_once('.') else {
        return false;
    };
    !frac.is_empty() && int.chars().all(|c| c.is_ascii_digit()) && frac.chars().all(|c| c.is_ascii_digit())
}

fn is_double_shorthand(lex: &str) -> bool {
    let body = split_sign(lex);
    let Some(e) = body.find(['e', 'E']) else {
        return false;
    };
    let (mantissa, exp) = (&body[..e], &body[e + 1..]);
    let exp_digits = split_sign(exp);
    let mantissa_ok = match mantissa.split_once('.') {
        Some((i, f)) => {
            (!i.is_empty() || !f.is_empty())
                && i.chars().all(|c| c.is_ascii_digit())
                && f.chars().all(|c| c.is_ascii_digit())
        }
        None => !mantissa.is_empty() && mantissa.chars().all(|c| c.is_ascii_digit()),
    };
    mantissa_ok && !exp_digits.is_empty() && exp_digits.chars().all(|c| c.is_ascii_digit())
}
