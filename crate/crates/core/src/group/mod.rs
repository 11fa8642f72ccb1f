//! Finitely generated groups with solvable word problem.
//!
//! A [`GroupModel`] is a direct product of factors, each of which is `Z`, a
//! finite cyclic group, or a free group of finite rank. Elements are kept in
//! normal form so equality is structural. Every model carries an ordered
//! symmetric generating set that always contains the identity.

mod element;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

pub use element::{Coord, GroupElement};

use crate::error::{Error, Result};
use crate::sofic::LabeledGraph;

/// One factor of a direct product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Integers,
    Cyclic(u64),
    Free(u32),
}

/// A finitely generated group together with a symmetric generating set.
pub struct GroupModel {
    factors: Vec<Factor>,
    generators: Vec<GroupElement>,
    default_generators: bool,
    balls: RwLock<Vec<Arc<Vec<GroupElement>>>>,
}

impl Clone for GroupModel {
    fn clone(&self) -> Self {
        GroupModel {
            factors: self.factors.clone(),
            generators: self.generators.clone(),
            default_generators: self.default_generators,
            balls: RwLock::new(Vec::new()),
        }
    }
}

impl PartialEq for GroupModel {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors && self.generators == other.generators
    }
}

impl Eq for GroupModel {}

impl fmt::Debug for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupModel")
            .field("name", &self.to_string())
            .field("generators", &self.generators)
            .finish()
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let ints = self.factors.iter().filter(|x| **x == Factor::Integers).count();
        if ints == self.factors.len() {
            return if ints == 1 { f.write_str("Z") } else { write!(f, "Z^{ints}") };
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            match factor {
                Factor::Integers => f.write_str("Z")?,
                Factor::Cyclic(n) => write!(f, "Z/{n}")?,
                Factor::Free(k) => write!(f, "F_{k}")?,
            }
        }
        Ok(())
    }
}

/// A ball in the word metric, listed in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: GroupElement,
    pub radius: usize,
    pub elements: Vec<GroupElement>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

impl GroupModel {
    /// Builds a direct product with its default generating set: the unit
    /// steps of every factor, their inverses, and the identity.
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            match f {
                Factor::Cyclic(0) => {
                    return Err(Error::GroupDescriptor("cyclic order must be positive".into()))
                }
                Factor::Free(0) => {
                    return Err(Error::GroupDescriptor("free rank must be positive".into()))
                }
                Factor::Free(k) if *k > 26 => {
                    return Err(Error::GroupDescriptor("free rank is limited to 26 letters".into()))
                }
                _ => {}
            }
        }
        let mut model = GroupModel {
            factors,
            generators: Vec::new(),
            default_generators: true,
            balls: RwLock::new(Vec::new()),
        };
        let mut gens = BTreeSet::new();
        gens.insert(model.identity());
        for (i, f) in model.factors.iter().enumerate() {
            let steps: Vec<Coord> = match f {
                Factor::Integers => vec![Coord::Int(1), Coord::Int(-1)],
                Factor::Cyclic(n) => vec![Coord::Residue(1 % n), Coord::Residue((n - 1) % n)],
                Factor::Free(k) => (1..=*k as i32).flat_map(|l| [Coord::Word(vec![l]), Coord::Word(vec![-l])]).collect(),
            };
            for step in steps {
                let mut coords = model.identity().0;
                coords[i] = step;
                gens.insert(GroupElement(coords));
            }
        }
        model.generators = gens.into_iter().collect();
        Ok(model)
    }

    pub fn integers() -> Self {
        Self::new(vec![Factor::Integers]).expect("valid")
    }

    pub fn free_abelian(rank: usize) -> Self {
        Self::new(vec![Factor::Integers; rank]).expect("valid")
    }

    pub fn free(rank: u32) -> Result<Self> {
        Self::new(vec![Factor::Free(rank)])
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![Factor::Cyclic(n)])
    }

    /// Replaces the generating set. The set is symmetrized and the identity
    /// is added (with a warning) when missing.
    pub fn with_generators(mut self, gens: Vec<GroupElement>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for g in gens {
            self.check(&g)?;
            set.insert(self.inv(&g));
            set.insert(g);
        }
        if set.insert(self.identity()) {
            log::warn!("generating set of {self} did not contain the identity; added it");
        }
        let generated = self.generates(&set);
        if !generated {
            return Err(Error::GroupDescriptor(format!("generators do not generate {self}")));
        }
        self.generators = set.into_iter().collect();
        self.default_generators = false;
        self.balls = RwLock::new(Vec::new());
        Ok(self)
    }

    // Every default unit step must be a short word in the new generators.
    fn generates(&self, set: &BTreeSet<GroupElement>) -> bool {
        let defaults = GroupModel::new(self.factors.clone()).expect("valid factors");
        let mut reached: HashSet<GroupElement> = set.iter().cloned().collect();
        let mut frontier: Vec<GroupElement> = reached.iter().cloned().collect();
        for _ in 0..16 {
            if defaults.generators.iter().all(|g| reached.contains(g)) {
                return true;
            }
            let mut next = Vec::new();
            for g in &frontier {
                for d in set {
                    let h = self.mul(g, d);
                    if reached.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        defaults.generators.iter().all(|g| reached.contains(g))
    }

    /// False once [`GroupModel::with_generators`] replaced the defaults.
    pub fn has_default_generators(&self) -> bool {
        self.default_generators
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// The ordered symmetric generating set, including the identity.
    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|f| matches!(f, Factor::Cyclic(_)))
    }

    /// `Some(d)` when the group is `Z^d`.
    pub fn free_abelian_rank(&self) -> Option<usize> {
        self.factors
            .iter()
            .all(|f| *f == Factor::Integers)
            .then_some(self.factors.len())
    }

    pub fn is_integers(&self) -> bool {
        self.free_abelian_rank() == Some(1)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(
            self.factors
                .iter()
                .map(|f| match f {
                    Factor::Integers => Coord::Int(0),
                    Factor::Cyclic(_) => Coord::Residue(0),
                    Factor::Free(_) => Coord::Word(Vec::new()),
                })
                .collect(),
        )
    }

    /// Element of `Z^d` from its coordinates.
    pub fn int(&self, coords: &[i64]) -> GroupElement {
        debug_assert_eq!(coords.len(), self.factors.len());
        GroupElement(coords.iter().map(|&v| Coord::Int(v)).collect())
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.factors.len()
            && g.0.iter().zip(&self.factors).all(|(c, f)| match (c, f) {
                (Coord::Int(_), Factor::Integers) => true,
                (Coord::Residue(r), Factor::Cyclic(n)) => r < n,
                (Coord::Word(w), Factor::Free(k)) => {
                    w.iter().all(|&l| l != 0 && l.unsigned_abs() <= *k)
                        && w.windows(2).all(|p| p[0] != -p[1])
                }
                _ => false,
            })
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ForeignElement { element: format!("{g:?}"), group: self.to_string() })
        }
    }

    /// Product `gh`. Both arguments must belong to this model.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(g) && self.contains(h));
        GroupElement(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.factors)
                .map(|((a, b), f)| match (a, b, f) {
                    (Coord::Int(x), Coord::Int(y), _) => Coord::Int(x + y),
                    (Coord::Residue(x), Coord::Residue(y), Factor::Cyclic(n)) => Coord::Residue((x + y) % n),
                    (Coord::Word(x), Coord::Word(y), _) => Coord::Word(reduce_concat(x, y)),
                    _ => unreachable!("coordinate kinds are fixed by the model"),
                })
                .collect(),
        )
    }

    pub fn checked_mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        GroupElement(
            g.0.iter()
                .zip(&self.factors)
                .map(|(c, f)| match (c, f) {
                    (Coord::Int(x), _) => Coord::Int(-x),
                    (Coord::Residue(x), Factor::Cyclic(n)) => Coord::Residue((n - x) % n),
                    (Coord::Word(w), _) => Coord::Word(w.iter().rev().map(|l| -l).collect()),
                    _ => unreachable!(),
                })
                .collect(),
        )
    }

    /// Word length with respect to the generating set.
    pub fn word_length(&self, g: &GroupElement) -> usize {
        if self.default_generators {
            return g
                .0
                .iter()
                .zip(&self.factors)
                .map(|(c, f)| match (c, f) {
                    (Coord::Int(x), _) => x.unsigned_abs() as usize,
                    (Coord::Residue(x), Factor::Cyclic(n)) => (*x).min(n - x) as usize,
                    (Coord::Word(w), _) => w.len(),
                    _ => unreachable!(),
                })
                .sum();
        }
        let mut r = 0;
        loop {
            if self.ball_elements(r).binary_search(g).is_ok() {
                return r;
            }
            if self.is_finite() && r > 0 && self.ball_elements(r).len() == self.ball_elements(r - 1).len() {
                unreachable!("element of a finite group outside every ball");
            }
            r += 1;
        }
    }

    /// Canonically ordered elements of the ball of radius `r` around the
    /// identity. Results are cached.
    pub fn ball_elements(&self, r: usize) -> Arc<Vec<GroupElement>> {
        if let Some(b) = self.balls.read().expect("ball cache").get(r) {
            return b.clone();
        }
        let mut cache = self.balls.write().expect("ball cache");
        if cache.is_empty() {
            cache.push(Arc::new(vec![self.identity()]));
        }
        while cache.len() <= r {
            let prev = cache.last().expect("nonempty").clone();
            let mut set: BTreeSet<GroupElement> = prev.iter().cloned().collect();
            // Only the outer sphere can reach new elements.
            let sphere: Vec<&GroupElement> = if cache.len() >= 2 {
                let inner = &cache[cache.len() - 2];
                prev.iter().filter(|g| inner.binary_search(g).is_err()).collect()
            } else {
                prev.iter().collect()
            };
            let mut fresh = Vec::new();
            for g in sphere {
                for d in &self.generators {
                    let h = self.mul(g, d);
                    if !set.contains(&h) {
                        fresh.push(h);
                    }
                }
            }
            set.extend(fresh);
            cache.push(Arc::new(set.into_iter().collect()));
        }
        cache[r].clone()
    }

    /// Every element of a finite group, canonically ordered; `None` for
    /// infinite groups.
    pub fn elements(&self) -> Option<Arc<Vec<GroupElement>>> {
        if !self.is_finite() {
            return None;
        }
        let mut r = 0;
        loop {
            let next = self.ball_elements(r + 1);
            if next.len() == self.ball_elements(r).len() {
                return Some(next);
            }
            r += 1;
        }
    }

    /// The ball `B(r)` centered at the identity.
    pub fn ball(&self, r: usize) -> Ball {
        Ball { center: self.identity(), radius: r, elements: self.ball_elements(r).to_vec() }
    }

    /// The ball of radius `r` around `center`, i.e. `center * B(r)`.
    pub fn ball_at(&self, center: &GroupElement, r: usize) -> Ball {
        let mut elements: Vec<GroupElement> = self.ball_elements(r).iter().map(|h| self.mul(center, h)).collect();
        elements.sort();
        Ball { center: center.clone(), radius: r, elements }
    }

    /// `{ e f : e in E, f in F }`, deduplicated and canonically ordered.
    pub fn product_set(&self, left: &[GroupElement], right: &[GroupElement]) -> Vec<GroupElement> {
        let set: BTreeSet<GroupElement> = left.iter().flat_map(|e| right.iter().map(move |f| self.mul(e, f))).collect();
        set.into_iter().collect()
    }

    pub fn inverse_set(&self, set: &[GroupElement]) -> Vec<GroupElement> {
        let out: BTreeSet<GroupElement> = set.iter().map(|g| self.inv(g)).collect();
        out.into_iter().collect()
    }

    /// Least element in canonical order among the first ball that is not
    /// contained in `excluded`. `None` when the group is exhausted.
    pub fn first_outside(&self, excluded: &BTreeSet<GroupElement>) -> Option<GroupElement> {
        let mut r = 0;
        loop {
            let ball = self.ball_elements(r);
            if let Some(g) = ball.iter().find(|g| !excluded.contains(*g)) {
                return Some(g.clone());
            }
            if r > 0 && ball.len() == self.ball_elements(r - 1).len() {
                return None;
            }
            r += 1;
        }
    }

    /// Parses an element: comma-separated coordinates, one per factor.
    /// Free-group words use letters `a..z`, uppercase for inverses, and
    /// `1` for the empty word.
    pub fn parse_element(&self, input: &str) -> Result<GroupElement> {
        let fail = |reason: &str| Error::ParseElement { input: input.to_string(), reason: reason.to_string() };
        let text = input.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = if self.factors.is_empty() { Vec::new() } else { text.split(',').map(str::trim).collect() };
        if parts.len() != self.factors.len() {
            return Err(fail(&format!("expected {} coordinates", self.factors.len())));
        }
        let mut coords = Vec::with_capacity(parts.len());
        for (part, f) in parts.iter().zip(&self.factors) {
            coords.push(match f {
                Factor::Integers => Coord::Int(part.parse().map_err(|_| fail("not an integer"))?),
                Factor::Cyclic(n) => {
                    let v: i64 = part.parse().map_err(|_| fail("not an integer"))?;
                    Coord::Residue(v.rem_euclid(*n as i64) as u64)
                }
                Factor::Free(k) => {
                    let mut word: Vec<i32> = Vec::new();
                    if *part != "1" && *part != "e" {
                        for ch in part.chars() {
                            let letter = match ch {
                                'a'..='z' => (ch as u8 - b'a' + 1) as i32,
                                'A'..='Z' => -((ch as u8 - b'A' + 1) as i32),
                                _ => return Err(fail("words use letters a-z and A-Z")),
                            };
                            if letter.unsigned_abs() > *k {
                                return Err(fail("letter beyond the free rank"));
                            }
                            word = reduce_concat(&word, &[letter]);
                        }
                    }
                    Coord::Word(word)
                }
            });
        }
        Ok(GroupElement(coords))
    }

    /// Cayley graph of the generating set restricted to `B(r)`: an edge
    /// `(g, d, g d)` for every generator `d` with both endpoints in the ball.
    pub fn cayley_ball_graph(&self, r: usize) -> LabeledGraph {
        let ball = self.ball_elements(r);
        let mut edges = Vec::new();
        for (i, g) in ball.iter().enumerate() {
            for (label, d) in self.generators.iter().enumerate() {
                if let Ok(j) = ball.binary_search(&self.mul(g, d)) {
                    edges.push((i, label, j));
                }
            }
        }
        LabeledGraph::new(ball.len(), self.generators.clone(), edges).expect("Cayley edges are functional")
    }

    /// Index of `g` in the generating set.
    pub fn generator_index(&self, g: &GroupElement) -> Option<usize> {
        self.generators.iter().position(|d| d == g)
    }
}

fn reduce_concat(x: &[i32], y: &[i32]) -> Vec<i32> {
    let mut out = x.to_vec();
    for &l in y {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_cyclic_arithmetic() {
        let z = GroupModel::integers();
        assert_eq!(z.mul(&z.int(&[3]), &z.int(&[-5])), z.int(&[-2]));
        let c6 = GroupModel::cyclic(6).unwrap();
        let four = c6.parse_element("4").unwrap();
        let five = c6.parse_element("5").unwrap();
        assert_eq!(c6.mul(&four, &five), c6.parse_element("3").unwrap());
        assert_eq!(c6.parse_element("-1").unwrap(), five);
    }

    #[test]
    fn free_reduction() {
        let f2 = GroupModel::free(2).unwrap();
        let a = f2.parse_element("a").unwrap();
        let a_inv = f2.parse_element("A").unwrap();
        assert_eq!(f2.mul(&a, &a_inv), f2.identity());
        assert_eq!(f2.parse_element("abBA").unwrap(), f2.identity());
        assert_eq!(f2.inv(&f2.parse_element("ab").unwrap()), f2.parse_element("BA").unwrap());
    }

    #[test]
    fn small_balls() {
        let z = GroupModel::integers();
        assert_eq!(z.ball(2).elements, (-2..=2).map(|i| z.int(&[i])).collect::<Vec<_>>());
        assert_eq!(GroupModel::free(2).unwrap().ball(1).len(), 5);
        assert_eq!(GroupModel::free_abelian(2).ball(1).len(), 5);
        assert_eq!(GroupModel::cyclic(5).unwrap().ball(7).len(), 5);
    }

    #[test]
    fn product_sets() {
        let z = GroupModel::integers();
        let e = vec![z.int(&[0]), z.int(&[1])];
        assert_eq!(z.product_set(&e, &e), vec![z.int(&[0]), z.int(&[1]), z.int(&[2])]);
        assert_eq!(z.product_set(&e, &[z.identity()]), e);
        let f2 = GroupModel::free(2).unwrap();
        let p = |s: &str| f2.parse_element(s).unwrap();
        let mut expected = vec![p("ab"), p("aB")];
        expected.sort();
        assert_eq!(f2.product_set(&[p("a")], &[p("b"), p("B")]), expected);
    }

    #[test]
    fn custom_generators_get_identity() {
        let z = GroupModel::integers().with_generators(vec![GroupModel::integers().int(&[1])]).unwrap();
        assert_eq!(z.generators().len(), 3);
        assert_eq!(z.word_length(&z.int(&[-4])), 4);
        let bad = GroupModel::integers().with_generators(vec![GroupModel::integers().int(&[2])]);
        assert!(bad.is_err());
    }

    #[test]
    fn display_round_trip() {
        let g = GroupModel::new(vec![Factor::Integers, Factor::Cyclic(4), Factor::Free(2)]).unwrap();
        let x = g.parse_element("-3,2,aBB").unwrap();
        assert_eq!(x.to_string(), "-3,2,aBB");
        assert_eq!(g.parse_element(&x.to_string()).unwrap(), x);
        assert_eq!(g.identity().to_string(), "0,0,1");
    }

    #[test]
    fn cayley_ball_graph_edges() {
        let z = GroupModel::integers();
        let g0 = z.cayley_ball_graph(0);
        assert_eq!(g0.vertex_count(), 1);
        assert_eq!(g0.edge_count(), 1);
        let g1 = z.cayley_ball_graph(1);
        assert_eq!(g1.vertex_count(), 3);
        // 3 self-loops, 2 edges labeled +1, 2 labeled -1
        assert_eq!(g1.edge_count(), 7);
        assert_eq!(GroupModel::free(2).unwrap().cayley_ball_graph(2).vertex_count(), 17);
    }
}
