use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// A finite graph with edges labeled by generators. Each vertex has at most
/// one out-edge per label; distances ignore edge direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    labels: Vec<GroupElement>,
    out: Vec<Vec<Option<usize>>>,
    incoming: Vec<Vec<(usize, usize)>>,
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

impl LabeledGraph {
    /// Builds a graph on `0..vertices` from `(v, label index, w)` triples.
    /// Repeated identical triples collapse.
    pub fn new(vertices: usize, labels: Vec<GroupElement>, edges: Vec<(usize, usize, usize)>) -> Result<Self> {
        let mut out = vec![vec![None; labels.len()]; vertices];
        let mut edge_count = 0;
        for (v, l, w) in edges {
            if v >= vertices || w >= vertices {
                return Err(Error::Graph(format!("edge ({v}, {l}, {w}) leaves the vertex range")));
            }
            if l >= labels.len() {
                return Err(Error::Graph(format!("label index {l} out of range")));
            }
            match out[v][l] {
                None => {
                    out[v][l] = Some(w);
                    edge_count += 1;
                }
                Some(prev) if prev == w => {}
                Some(prev) => {
                    return Err(Error::Graph(format!(
                        "vertex {v} has two out-edges labeled {} (to {prev} and {w})",
                        labels[l]
                    )))
                }
            }
        }
        let mut neighbors = vec![Vec::new(); vertices];
        let mut incoming = vec![Vec::new(); vertices];
        for (v, row) in out.iter().enumerate() {
            for (l, w) in row.iter().enumerate() {
                if let Some(w) = *w {
                    neighbors[v].push(w);
                    neighbors[w].push(v);
                    incoming[w].push((v, l));
                }
            }
        }
        for n in &mut neighbors {
            n.sort_unstable();
            n.dedup();
        }
        Ok(LabeledGraph { labels, out, incoming, neighbors, edge_count })
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[GroupElement] {
        &self.labels
    }

    pub fn label_index(&self, label: &GroupElement) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The endpoint of the out-edge of `v` with the given label index.
    pub fn out(&self, v: usize, label: usize) -> Option<usize> {
        self.out[v][label]
    }

    /// In-edges of `v` as `(source, label index)`.
    pub fn incoming(&self, v: usize) -> &[(usize, usize)] {
        &self.incoming[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// All edges as `(v, label index, w)`, ordered by `v` then label.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(v, row)| row.iter().enumerate().filter_map(move |(l, w)| w.map(|w| (v, l, w))))
    }

    /// Vertices within undirected distance `r` of `v`, sorted.
    pub fn ball(&self, v: usize, r: usize) -> Vec<usize> {
        let dist = self.distances(v, r);
        let mut out: Vec<usize> = (0..self.vertex_count()).filter(|&u| dist[u].is_some()).collect();
        out.sort_unstable();
        out
    }

    /// Distances from `v`, truncated at `limit`.
    pub fn distances(&self, v: usize, limit: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices have a distance");
            if d == limit {
                continue;
            }
            for &w in &self.neighbors[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// True when every edge `(v, d, w)` has its reverse `(w, d^-1, v)`.
    pub fn is_symmetric(&self, group: &GroupModel) -> bool {
        let inverse: Vec<Option<usize>> = self.labels.iter().map(|l| self.label_index(&group.inv(l))).collect();
        self.edges().all(|(v, l, w)| inverse[l].is_some_and(|il| self.out[w][il] == Some(v)))
    }
}
