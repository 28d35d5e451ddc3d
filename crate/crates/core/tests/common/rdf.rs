//! Random small graphs, basic graph patterns and the all-assignments query
//! oracle.

use std::collections::BTreeSet;

use proptest::collection::vec;
use proptest::prelude::*;

use sis_core::graph::{Binding, Graph, Iri, Literal, Term, Triple, TriplePattern};

fn node() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0..5u8).prop_map(|i| Term::iri(format!("urn:e{i}")).unwrap()),
        (0..2u8).prop_map(|i| Term::blank(format!("b{i}"))),
    ]
}

fn predicate() -> impl Strategy<Value = Term> {
    (0..3u8).prop_map(|i| Term::iri(format!("urn:p{i}")).unwrap())
}

fn object() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => node(),
        1 => prop_oneof![Just("a"), Just("b")].prop_map(|s| Term::Literal(Literal::plain(s))),
        1 => (0..3i64).prop_map(|i| Term::Literal(Literal::integer(i))),
    ]
}

/// Up to 25 triples over a handful of IRIs, blank nodes and literals, so
/// that joins hit often.
pub fn small_graph() -> impl Strategy<Value = Graph> {
    vec((node(), predicate(), object()), 0..25).prop_map(|triples| {
        let mut g = Graph::new();
        for (s, p, o) in triples {
            g.add(s, p, o).unwrap();
        }
        g
    })
}

/// Any single pattern, blank nodes included.
pub fn any_pattern() -> impl Strategy<Value = TriplePattern> {
    prop_oneof![
        query_pattern(),
        (node(), predicate(), object()).prop_map(|(s, p, o)| TriplePattern::new(s, p, o)),
    ]
}

fn var() -> impl Strategy<Value = Term> {
    (0..3u8).prop_map(|i| Term::var(format!("v{i}")))
}

/// A pattern over IRIs, integers and variables, so it can be written as
/// query text.
pub fn query_pattern() -> impl Strategy<Value = TriplePattern> {
    let iri_node = (0..5u8).prop_map(|i| Term::iri(format!("urn:e{i}")).unwrap());
    let subject = prop_oneof![2 => var(), 1 => iri_node.clone()];
    let pred = prop_oneof![1 => var(), 3 => predicate()];
    let obj = prop_oneof![
        3 => var(),
        1 => iri_node,
        1 => (0..3i64).prop_map(|i| Term::Literal(Literal::integer(i))),
    ];
    (subject, pred, obj).prop_map(|(s, p, o)| TriplePattern::new(s, p, o))
}

pub fn bgp() -> impl Strategy<Value = Vec<TriplePattern>> {
    vec(query_pattern(), 1..=3)
}

pub fn query_text(patterns: &[TriplePattern]) -> String {
    let body: Vec<String> = patterns
        .iter()
        .map(|p| format!("{} {} {} .", p.subject, p.predicate, p.object))
        .collect();
    format!("SELECT * WHERE {{ {} }}", body.join(" "))
}

/// Binds the pattern's variables against one triple, or `None` when the
/// triple does not fit.
pub fn unify(pattern: &TriplePattern, triple: &Triple) -> Option<Binding> {
    let mut binding = Binding::new();
    for (slot, value) in pattern
        .positions()
        .into_iter()
        .zip([&triple.subject, &triple.predicate, &triple.object])
    {
        match slot {
            Term::Variable(name) => match binding.get(name) {
                Some(bound) if bound != value => return None,
                Some(_) => {}
                None => {
                    binding.insert(name.clone(), value.clone());
                }
            },
            constant if constant != value => return None,
            _ => {}
        }
    }
    Some(binding)
}

/// Every assignment of the query variables to graph terms that turns all
/// patterns into stored triples.
pub fn all_assignments(graph: &Graph, patterns: &[TriplePattern]) -> BTreeSet<Binding> {
    let vars: BTreeSet<String> = patterns
        .iter()
        .flat_map(|p| p.variables().map(String::from).collect::<Vec<_>>())
        .collect();
    let vars: Vec<String> = vars.into_iter().collect();
    let domain: BTreeSet<Term> = graph.iter().flat_map(|t| [t.subject, t.predicate, t.object]).collect();
    let domain: Vec<Term> = domain.into_iter().collect();
    let mut out = BTreeSet::new();
    if domain.is_empty() && !vars.is_empty() {
        return out;
    }
    let total = domain.len().pow(vars.len() as u32);
    for mut code in 0..total {
        let mut binding = Binding::new();
        for v in &vars {
            binding.insert(v.clone(), domain[code % domain.len()].clone());
            code /= domain.len();
        }
        let all = patterns.iter().all(|p| {
            let ground = |t: &Term| match t {
                Term::Variable(n) => binding[n].clone(),
                other => other.clone(),
            };
            Triple::new(ground(&p.subject), ground(&p.predicate), ground(&p.object))
                .map(|t| graph.contains(&t))
                .unwrap_or(false)
        });
        if all {
            out.insert(binding);
        }
    }
    out
}

/// Runs the patterns as query text and compares the rows with
/// [`all_assignments`], also requiring that no row repeats.
pub fn check_query(graph: &Graph, patterns: &[TriplePattern]) -> Result<(), String> {
    let table = sis_core::query::run(graph, &query_text(patterns)).map_err(|e| e.to_string())?;
    let got: Vec<Binding> = table
        .rows
        .iter()
        .map(|row| table.header.iter().cloned().zip(row.iter().cloned()).collect())
        .collect();
    let distinct: BTreeSet<Binding> = got.iter().cloned().collect();
    if distinct.len() != got.len() {
        return Err("duplicate rows".into());
    }
    let expected = all_assignments(graph, patterns);
    if distinct != expected {
        return Err(format!("engine {distinct:?} != oracle {expected:?}"));
    }
    Ok(())
}

fn iri() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0..6u8).prop_map(|i| Term::iri(format!("http://e.org/ns#n{i}")).unwrap()),
        (0..3u8).prop_map(|i| Term::iri(format!("http://other.org/x/{i}-y")).unwrap()),
        Just(Term::iri("urn:isbn:0451450523").unwrap()),
    ]
}

fn text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z ]{0,8}",
        Just("quote \" and \\ backslash".to_string()),
        Just("line\nbreak\ttab\r".to_string()),
        Just("grüße ✓".to_string()),
        Just(String::new()),
    ]
}

fn literal() -> impl Strategy<Value = Term> {
    let xsd = |l: &str| Iri::new(format!("http://www.w3.org/2001/XMLSchema#{l}")).unwrap();
    prop_oneof![
        text().prop_map(Literal::plain),
        (text(), prop_oneof![Just("en"), Just("de-DE")]).prop_map(|(s, l)| Literal::lang(s, l)),
        any::<i32>().prop_map(|i| Literal::integer(i64::from(i))),
        (0u32..100_000, 0u32..1000).prop_map(|(a, b)| Literal::decimal(format!("{a}.{b}"))),
        Just(Literal::typed("true", xsd("boolean"))),
        Just(Literal::typed("1.5E3", xsd("double"))),
        text().prop_map(|s| Literal::typed(s, Iri::new("http://e.org/ns#custom").unwrap())),
    ]
    .prop_map(Term::Literal)
}

/// Blank-node-free graphs with awkward literals, optionally with a prefix
/// that covers some of the IRIs.
pub fn serializable_graph() -> impl Strategy<Value = Graph> {
    (vec((iri(), iri(), prop_oneof![iri(), literal()]), 0..30), any::<bool>()).prop_map(|(ts, with_prefix)| {
        let mut g = Graph::new();
        if with_prefix {
            g.prefixes_mut().insert("e", "http://e.org/ns#");
        }
        for (s, p, o) in ts {
            g.add(s, p, o).unwrap();
        }
        g
    })
}

pub fn triples(g: &Graph) -> BTreeSet<Triple> {
    g.iter().collect()
}

/// Serializes, parses back and serializes again.
pub fn check_round_trip(g: &Graph) -> Result<(), String> {
    use sis_core::turtle::{parse_turtle, serialize_turtle};
    let text = serialize_turtle(g);
    let back = parse_turtle(&text).map_err(|e| format!("{e}\n{text}"))?;
    if triples(&back) != triples(g) {
        return Err(format!("triples differ after round trip:\n{text}"));
    }
    if serialize_turtle(&back) != text {
        return Err("second serialization differs".into());
    }
    Ok(())
}
