use std::collections::{BTreeMap, BTreeSet};

use super::graph::LabeledGraph;
use crate::error::{Error, Result};
use crate::group::{Coord, Factor, GroupElement, GroupModel};

/// The cycle `C_n` labeled by the default generators of `Z`: `+1` steps
/// forward, `-1` back, `0` loops.
pub fn build_cycle(n: usize) -> Result<LabeledGraph> {
    if n == 0 {
        return Err(Error::Graph("a cycle needs at least one vertex".into()));
    }
    let z = GroupModel::integers();
    let labels = z.generators().to_vec();
    let steps: Vec<i64> = labels.iter().map(|g| g.as_ints().expect("Z")[0]).collect();
    let mut edges = Vec::new();
    for v in 0..n {
        for (l, &d) in steps.iter().enumerate() {
            edges.push((v, l, (v as i64 + d).rem_euclid(n as i64) as usize));
        }
    }
    LabeledGraph::new(n, labels, edges)
}

/// The `n x m` torus labeled by the default generators of `Z^2`. Vertex
/// `(i, j)` is numbered `i * m + j`.
pub fn build_torus(n: usize, m: usize) -> Result<LabeledGraph> {
    if n == 0 || m == 0 {
        return Err(Error::Graph("torus sides must be positive".into()));
    }
    let z2 = GroupModel::free_abelian(2);
    let labels = z2.generators().to_vec();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..m {
            for (l, g) in labels.iter().enumerate() {
                let d = g.as_ints().expect("Z^2");
                let ti = (i as i64 + d[0]).rem_euclid(n as i64) as usize;
                let tj = (j as i64 + d[1]).rem_euclid(m as i64) as usize;
                edges.push((i * m + j, l, ti * m + tj));
            }
        }
    }
    LabeledGraph::new(n * m, labels, edges)
}

type Perm = Vec<usize>;

// apply p, then q
fn then(p: &Perm, q: &Perm) -> Perm {
    p.iter().map(|&i| q[i]).collect()
}

fn inverse(p: &Perm) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn power(p: &Perm, k: i64) -> Perm {
    let base = if k < 0 { inverse(p) } else { p.clone() };
    let mut out: Perm = (0..p.len()).collect();
    for _ in 0..k.unsigned_abs() {
        out = then(&out, &base);
    }
    out
}

/// Cayley graph of a finite quotient of `group`, given by one permutation
/// per basic generator: one for each `Z` or cyclic factor, and one per
/// letter of each free factor, in factor order.
///
/// The images must satisfy the defining relations: permutations from
/// different factors commute and a cyclic factor of order `n` maps to a
/// permutation whose `n`-th power is trivial.
pub fn build_quotient(group: &GroupModel, images: &[Vec<usize>]) -> Result<LabeledGraph> {
    let expected: usize = group
        .factors()
        .iter()
        .map(|f| match f {
            Factor::Integers | Factor::Cyclic(_) => 1,
            Factor::Free(k) => *k as usize,
        })
        .sum();
    if images.len() != expected {
        return Err(Error::Graph(format!("{group} needs {expected} generator images, got {}", images.len())));
    }
    let degree = images.first().map(Vec::len).unwrap_or(1);
    for p in images {
        let set: BTreeSet<usize> = p.iter().copied().collect();
        if p.len() != degree || set.len() != degree || set.iter().any(|&i| i >= degree) {
            return Err(Error::Graph("generator images must be permutations of one degree".into()));
        }
    }
    let identity: Perm = (0..degree).collect();
    let mut per_factor: Vec<Vec<&Perm>> = Vec::new();
    let mut next = images.iter();
    for f in group.factors() {
        let count = match f {
            Factor::Free(k) => *k as usize,
            _ => 1,
        };
        let perms: Vec<&Perm> = next.by_ref().take(count).collect();
        if let Factor::Cyclic(n) = f {
            if power(perms[0], *n as i64) != identity {
                return Err(Error::Graph(format!("image of the Z/{n} generator has order not dividing {n}")));
            }
        }
        per_factor.push(perms);
    }
    for (i, a) in per_factor.iter().enumerate() {
        for b in per_factor.iter().skip(i + 1) {
            for p in a {
                for q in b {
                    if then(p, q) != then(q, p) {
                        return Err(Error::Graph("images from different factors must commute".into()));
                    }
                }
            }
        }
    }
    let image_of = |g: &GroupElement| -> Perm {
        let mut acc = identity.clone();
        for (c, perms) in g.coords().iter().zip(&per_factor) {
            let part = match c {
                Coord::Int(k) => power(perms[0], *k),
                Coord::Residue(k) => power(perms[0], *k as i64),
                Coord::Word(w) => w.iter().fold(identity.clone(), |acc, &l| {
                    let p = perms[l.unsigned_abs() as usize - 1];
                    then(&acc, &if l > 0 { p.clone() } else { inverse(p) })
                }),
            };
            acc = then(&acc, &part);
        }
        acc
    };
    let steps: Vec<Perm> = group.generators().iter().map(image_of).collect();
    let mut elements = BTreeSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    while let Some(h) = frontier.pop() {
        for s in &steps {
            let k = then(&h, s);
            if elements.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    let index: BTreeMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut edges = Vec::new();
    for (v, h) in elements.iter().enumerate() {
        for (l, s) in steps.iter().enumerate() {
            edges.push((v, l, index[&then(h, s)]));
        }
    }
    LabeledGraph::new(elements.len(), group.generators().to_vec(), edges)
}
