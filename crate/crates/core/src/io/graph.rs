use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::At;
use crate::error::Result;
use crate::group::GroupModel;
use crate::sofic::{build_cycle, build_quotient, build_torus, LabeledGraph};

/// An explicit edge list `{"vertices": n, "edges": [[v, label, w], ...]}`
/// or one of the built-in families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GraphFile {
    Explicit { vertices: usize, edges: Vec<(usize, String, usize)> },
    Cycle { cycle: usize },
    Torus { torus: (usize, usize) },
    /// Permutation images of the generators of a free group, one per letter.
    Quotient { quotient: Vec<Vec<usize>> },
}

pub fn graph_from_file(group: &GroupModel, file: &GraphFile, context: &str) -> Result<LabeledGraph> {
    let at = At::root(context);
    match file {
        GraphFile::Explicit { vertices, edges } => {
            let mut labels = BTreeMap::new();
            let mut triples = Vec::with_capacity(edges.len());
            for (i, (v, label, w)) in edges.iter().enumerate() {
                let g = at.key("edges").index(i).element(group, label)?;
                let next = labels.len();
                let l = *labels.entry(g).or_insert(next);
                triples.push((*v, l, *w));
            }
            let mut order: Vec<_> = labels.into_iter().collect();
            order.sort_by_key(|(_, l)| *l);
            let labels = order.into_iter().map(|(g, _)| g).collect();
            at.wrap(LabeledGraph::new(*vertices, labels, triples))
        }
        GraphFile::Cycle { cycle } => at.key("cycle").wrap(build_cycle(*cycle)),
        GraphFile::Torus { torus } => at.key("torus").wrap(build_torus(torus.0, torus.1)),
        GraphFile::Quotient { quotient } => at.key("quotient").wrap(build_quotient(group, quotient)),
    }
}

pub fn graph_to_file(graph: &LabeledGraph) -> GraphFile {
    let labels = graph.labels();
    GraphFile::Explicit {
        vertices: graph.vertex_count(),
        edges: graph.edges().map(|(v, l, w)| (v, labels[l].to_string(), w)).collect(),
    }
}
