use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ABGraph, Edge};
use crate::perm::Generator;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("malformed catalog JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry {index}: unknown edge label {label:?}")]
    Label { index: usize, label: String },
    #[error("entry {index}: {violation}")]
    Invalid { index: usize, violation: super::Violation },
}

/// One tree of a catalog, in the on-disk field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub vcount: usize,
    pub edges: Vec<(usize, usize, String)>,
    pub fixed: Vec<usize>,
    pub aut: u64,
    pub p: usize,
    pub l: usize,
    pub min_power: u64,
}

impl CatalogEntry {
    pub fn new(graph: &ABGraph, fixed: Vec<usize>, aut: u64, min_power: u64) -> Self {
        let (p, l) = graph.delta_exponents();
        let mut edges: Vec<Edge> = graph.edges().to_vec();
        edges.sort_by_key(|e| (e.src, e.label, e.dst));
        CatalogEntry {
            vcount: graph.vcount(),
            edges: edges.iter().map(|e| (e.src, e.dst, e.label.symbol().to_string())).collect(),
            fixed,
            aut,
            p,
            l,
            min_power,
        }
    }

    /// Rebuilds the graph, adding any loops the entry leaves implicit.
    pub fn graph(&self, index: usize) -> Result<ABGraph, CatalogError> {
        let edges = self
            .edges
            .iter()
            .map(|(s, d, lab)| {
                let label = match lab.as_str() {
                    "a" => Generator::Alpha,
                    "b" => Generator::Beta,
                    other => return Err(CatalogError::Label { index, label: other.to_string() }),
                };
                Ok(Edge::new(*s, *d, label))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let g = ABGraph::with_implied_loops(self.vcount, edges);
        g.validate().map_err(|violation| CatalogError::Invalid { index, violation })?;
        Ok(g)
    }
}

/// One entry per line inside a JSON array, LF line endings.
pub fn write_catalog(entries: &[CatalogEntry]) -> String {
    let mut s = String::from("[\n");
    for (i, e) in entries.iter().enumerate() {
        s.push_str(&serde_json::to_string(e).expect("catalog entries serialize"));
        if i + 1 < entries.len() {
            s.push(',');
        }
        s.push('\n');
    }
    s.push_str("]\n");
    s
}

pub fn read_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = ABGraph::with_implied_loops(2, vec![Edge::new(0, 1, Generator::Alpha)]);
        let e = CatalogEntry::new(&g, vec![1], 1, 1);
        let text = write_catalog(&[e.clone()]);
        assert_eq!(
            text,
            "[\n{\"vcount\":2,\"edges\":[[0,1,\"a\"],[0,0,\"b\"],[1,1,\"b\"]],\"fixed\":[1],\"aut\":1,\"p\":1,\"l\":2,\"min_power\":1}\n]\n"
        );
        let back = read_catalog(&text).unwrap();
        assert_eq!(back, vec![e]);
        assert_eq!(write_catalog(&back), text);
        assert_eq!(back[0].graph(0).unwrap().canonical_certificate(), g.canonical_certificate());
    }
}
