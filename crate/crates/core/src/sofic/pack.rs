use super::graph::LabeledGraph;
use super::interior::InteriorSet;
use crate::error::{Error, Result};

/// Centers `W` in `V(3r)` with pairwise disjoint `r`-balls whose
/// `2r`-balls cover `V(3r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingCover {
    pub radius: usize,
    pub centers: Vec<usize>,
    /// The balls `B(w, r)`, aligned with `centers`.
    pub balls: Vec<Vec<usize>>,
    pub disjoint: bool,
    pub covered: bool,
}

impl PackingCover {
    /// Every vertex of some `B(w, r)`, sorted.
    pub fn union(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.balls.iter().flatten().copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Greedy maximal packing in vertex order over `V(3r)`: a vertex joins `W`
/// when it is farther than `2r` from every center so far.
pub fn pack(graph: &LabeledGraph, v3r: &InteriorSet, r: usize) -> Result<PackingCover> {
    if v3r.radius != 3 * r {
        return Err(Error::Graph(format!("packing at radius {r} needs V({}), got V({})", 3 * r, v3r.radius)));
    }
    let mut centers: Vec<usize> = Vec::new();
    // distance to the nearest center, truncated at 2r
    let mut near = vec![false; graph.vertex_count()];
    for v in v3r.vertices() {
        if near[v] {
            continue;
        }
        centers.push(v);
        for (u, d) in graph.distances(v, 2 * r).into_iter().enumerate() {
            if d.is_some() {
                near[u] = true;
            }
        }
    }
    let balls: Vec<Vec<usize>> = centers.iter().map(|&w| graph.ball(w, r)).collect();
    let mut seen = vec![false; graph.vertex_count()];
    let mut disjoint = true;
    for b in &balls {
        for &u in b {
            disjoint &= !std::mem::replace(&mut seen[u], true);
        }
    }
    let mut cover = vec![false; graph.vertex_count()];
    for &w in &centers {
        for u in graph.ball(w, 2 * r) {
            cover[u] = true;
        }
    }
    let covered = v3r.vertices().into_iter().all(|v| cover[v]);
    Ok(PackingCover { radius: r, centers, balls, disjoint, covered })
}
