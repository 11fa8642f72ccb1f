use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;

use super::graph::LabeledGraph;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// The labeled isomorphism `psi_{v,r}` from the graph ball `B(v, r)` onto
/// the Cayley ball `B(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallIso {
    pub center: usize,
    /// `to_graph[i]` is the vertex sent to the `i`-th element of `B(r)`.
    pub to_graph: Vec<usize>,
    /// Vertex to index into `B(r)`.
    pub to_group: BTreeMap<usize, usize>,
}

impl BallIso {
    /// `psi^-1(g)`, for `g` in the ball.
    pub fn vertex(&self, ball: &[GroupElement], g: &GroupElement) -> Option<usize> {
        ball.binary_search(g).ok().map(|i| self.to_graph[i])
    }

    /// `psi(v)`, for `v` in the graph ball.
    pub fn element<'a>(&self, ball: &'a [GroupElement], v: usize) -> Option<&'a GroupElement> {
        self.to_group.get(&v).map(|&i| &ball[i])
    }
}

/// The interior `V(r)`: vertices whose `r`-ball is isomorphic to the Cayley
/// ball, with the isomorphisms.
#[derive(Clone, Debug)]
pub struct InteriorSet {
    pub radius: usize,
    /// The Cayley ball `B(r)`, canonically ordered.
    pub ball: Arc<Vec<GroupElement>>,
    pub isos: BTreeMap<usize, BallIso>,
}

impl InteriorSet {
    pub fn vertices(&self) -> Vec<usize> {
        self.isos.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.isos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.isos.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.isos.contains_key(&v)
    }

    pub fn iso(&self, v: usize) -> Option<&BallIso> {
        self.isos.get(&v)
    }

    /// `psi_{v,r}^-1(g)`.
    pub fn vertex(&self, v: usize, g: &GroupElement) -> Option<usize> {
        self.isos.get(&v)?.vertex(&self.ball, g)
    }

    /// `psi_{v,r}(u)`.
    pub fn element(&self, v: usize, u: usize) -> Option<&GroupElement> {
        self.isos.get(&v)?.element(&self.ball, u)
    }
}

/// Edges of the Cayley graph on `B(r)`, counted over the generators.
fn cayley_edge_count(group: &GroupModel, ball: &[GroupElement]) -> usize {
    ball.iter()
        .map(|g| group.generators().iter().filter(|d| ball.binary_search(&group.mul(g, d)).is_ok()).count())
        .sum()
}

/// Maps each graph label to its generator index; a label that is not a
/// generator is an error.
fn label_map(graph: &LabeledGraph, group: &GroupModel) -> Result<Vec<GroupElement>> {
    graph
        .labels()
        .iter()
        .map(|l| match group.generator_index(l) {
            Some(_) => Ok(l.clone()),
            None => Err(Error::Graph(format!("label {l} is not a generator of {group}"))),
        })
        .collect()
}

/// Tries to build `psi_{v,r}`.
///
/// Labels are functional, so propagating `psi(w) = psi(u) d` along edges
/// from `psi(v) = 1` determines the only candidate; it is accepted when it is
/// consistent, bijective onto `B(r)` and carries the induced edges of the
/// graph ball bijectively onto those of the Cayley ball.
fn ball_iso(
    graph: &LabeledGraph,
    group: &GroupModel,
    labels: &[GroupElement],
    ball: &[GroupElement],
    cayley_edges: usize,
    v: usize,
    r: usize,
) -> Option<BallIso> {
    let dist = graph.distances(v, r);
    let inside = |u: usize| dist[u].is_some();
    let members: Vec<usize> = (0..graph.vertex_count()).filter(|&u| inside(u)).collect();
    if members.len() != ball.len() {
        return None;
    }
    let mut image: BTreeMap<usize, GroupElement> = BTreeMap::new();
    image.insert(v, group.identity());
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let gu = image[&u].clone();
        let forward = labels.iter().enumerate().filter_map(|(l, d)| graph.out(u, l).map(|w| (w, group.mul(&gu, d))));
        let backward = graph.incoming(u).iter().map(|&(w, l)| (w, group.mul(&gu, &group.inv(&labels[l]))));
        for (w, gw) in forward.chain(backward).collect::<Vec<_>>() {
            if !inside(w) {
                continue;
            }
            match image.get(&w) {
                Some(prev) if *prev != gw => return None,
                Some(_) => {}
                None => {
                    image.insert(w, gw);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut to_graph = vec![usize::MAX; ball.len()];
    let mut to_group = BTreeMap::new();
    for (&u, g) in &image {
        let i = ball.binary_search(g).ok()?;
        if to_graph[i] != usize::MAX {
            return None;
        }
        to_graph[i] = u;
        to_group.insert(u, i);
    }
    if to_group.len() != ball.len() {
        return None;
    }
    // induced edges map into Cayley edges injectively by consistency; equal
    // counts make it onto
    let induced = members
        .iter()
        .map(|&u| (0..labels.len()).filter(|&l| graph.out(u, l).is_some_and(inside)).count())
        .sum::<usize>();
    (induced == cayley_edges).then_some(BallIso { center: v, to_graph, to_group })
}

/// Computes `V(r)` with every `psi_{v,r}`.
pub fn interior(graph: &LabeledGraph, group: &GroupModel, r: usize) -> Result<InteriorSet> {
    let labels = label_map(graph, group)?;
    let ball = group.ball_elements(r);
    let cayley_edges = cayley_edge_count(group, &ball);
    let isos: BTreeMap<usize, BallIso> = (0..graph.vertex_count())
        .into_par_iter()
        .filter_map(|v| ball_iso(graph, group, &labels, &ball, cayley_edges, v, r).map(|iso| (v, iso)))
        .collect();
    Ok(InteriorSet { radius: r, ball, isos })
}
