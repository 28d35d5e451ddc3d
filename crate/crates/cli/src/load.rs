use std::fs;
use std::path::Path;

use sis_core::graph::{Graph, Iri, PrefixMap};
use sis_core::turtle::parse_turtle;

use crate::args::Common;
use crate::error::CliError;

/// Names a Turtle file whose prefix declarations serve as defaults.
pub const PREFIX_ENV: &str = "SIS_PREFIXES";

pub struct Loaded {
    pub graph: Graph,
    /// Prefixes for resolving flag values and compacting output.
    pub prefixes: PrefixMap,
}

impl Loaded {
    pub fn resolve(&self, text: &str) -> Result<Iri, CliError> {
        resolve(&self.prefixes, text)
    }

    pub fn compact(&self, iri: &Iri) -> String {
        self.prefixes.compact(iri.as_str())
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_file(path: &Path) -> Result<Graph, CliError> {
    parse_turtle(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Accepts `prefix:local`, `<iri>`, or a bare absolute IRI.
pub fn resolve(prefixes: &PrefixMap, text: &str) -> Result<Iri, CliError> {
    let text = text.trim();
    if text.contains("://") && !text.starts_with('<') {
        return Iri::new(text).map_err(|e| CliError::usage(format!("'{text}': {e}")));
    }
    prefixes
        .expand(text)
        .map_err(|e| CliError::usage(format!("cannot resolve '{text}': {e}")))
}

/// Loads and merges every input file. Two files binding one prefix label to
/// different namespaces is an error.
pub fn load(common: &Common) -> Result<Loaded, CliError> {
    let mut graph = Graph::new();
    for path in &common.files {
        let part = parse_file(path)?;
        graph
            .extend_from(&part)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    }

    let mut prefixes = match std::env::var_os(PREFIX_ENV) {
        Some(p) if !p.is_empty() => parse_file(Path::new(&p))?.prefixes().clone(),
        _ => PrefixMap::new(),
    };
    for (label, ns) in graph.prefixes().iter() {
        prefixes.insert(label, ns);
    }
    for binding in &common.prefixes {
        let (label, ns) = binding
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("--prefix expects LABEL=IRI, got '{binding}'")))?;
        let ns = ns.trim().trim_start_matches('<').trim_end_matches('>');
        Iri::new(ns).map_err(|e| CliError::usage(format!("--prefix {label}: {e}")))?;
        prefixes.insert(label.trim(), ns);
    }
    Ok(Loaded { graph, prefixes })
}
