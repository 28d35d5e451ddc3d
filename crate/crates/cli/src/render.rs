use serde_json::{json, Map, Value};

use sis_core::graph::{Literal, PrefixMap, Term};
use sis_core::query::ResultTable;

const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

/// Short human-readable form: CURIEs where possible, bare numbers.
pub fn term(prefixes: &PrefixMap, t: &Term) -> String {
    match t {
        Term::Iri(iri) => prefixes.compact(iri.as_str()),
        Term::Literal(lit) => literal(prefixes, lit),
        other => other.to_string(),
    }
}

fn literal(prefixes: &PrefixMap, lit: &Literal) -> String {
    if lit.is_numeric_type() {
        return lit.lexical().to_string();
    }
    let quoted = serde_json::to_string(lit.lexical()).expect("strings serialize");
    match (lit.language(), lit.datatype()) {
        (Some(lang), _) => format!("{quoted}@{lang}"),
        (None, Some(dt)) if dt.as_str() != XSD_STRING => format!("{quoted}^^{}", prefixes.compact(dt.as_str())),
        _ => quoted,
    }
}

/// Shortest decimal rendering that reads back as the same `f64`.
pub fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        "-".to_string()
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut out = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                out.push_str(cell);
            } else {
                out.push_str(&format!("{cell:<w$}  "));
            }
        }
        out.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// SPARQL 1.1 JSON results format.
pub fn sparql_json(result: &ResultTable) -> Value {
    let bindings: Vec<Value> = result
        .rows
        .iter()
        .map(|row| {
            let mut b = Map::new();
            for (var, t) in result.header.iter().zip(row) {
                b.insert(var.clone(), sparql_term(t));
            }
            Value::Object(b)
        })
        .collect();
    json!({
        "head": { "vars": result.header },
        "results": { "bindings": bindings },
    })
}

fn sparql_term(t: &Term) -> Value {
    match t {
        Term::Iri(iri) => json!({ "type": "uri", "value": iri.as_str() }),
        Term::BlankNode(label) => json!({ "type": "bnode", "value": label }),
        Term::Literal(lit) => {
            let mut v = Map::new();
            v.insert("type".into(), "literal".into());
            v.insert("value".into(), lit.lexical().into());
            if let Some(lang) = lit.language() {
                v.insert("xml:lang".into(), lang.into());
            } else if let Some(dt) = lit.datatype() {
                v.insert("datatype".into(), dt.as_str().into());
            }
            Value::Object(v)
        }
        Term::Variable(name) => json!({ "type": "literal", "value": format!("?{name}") }),
    }
}
