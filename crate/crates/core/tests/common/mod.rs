#![allow(dead_code)]

use std::collections::BTreeMap;

use nuca::engine::{Alphabet, Config, LocalRule, RuleField, Symbol};
use nuca::group::{GroupElement, GroupModel};

pub fn z() -> GroupModel {
    GroupModel::integers()
}

pub fn at(g: &GroupModel, i: i64) -> GroupElement {
    g.int(&[i])
}

pub fn bin() -> Alphabet {
    Alphabet::binary()
}

/// `x |-> x(by)` on `Z`.
pub fn shift(g: &GroupModel, by: i64) -> LocalRule {
    LocalRule::projection(bin(), at(g, by))
}

pub fn xor(g: &GroupModel) -> LocalRule {
    LocalRule::from_fn(bin(), vec![at(g, 0), at(g, 1)], |p| p[0] ^ p[1]).unwrap()
}

pub fn and(g: &GroupModel) -> LocalRule {
    LocalRule::from_fn(bin(), vec![at(g, 0), at(g, 1)], |p| p[0] & p[1]).unwrap()
}

/// `x |-> 1 - x(by)`.
pub fn not_at(g: &GroupModel, by: i64) -> LocalRule {
    LocalRule::from_fn(bin(), vec![at(g, by)], |p| 1 - p[0]).unwrap()
}

pub fn field(base: LocalRule, exceptions: Vec<(GroupElement, LocalRule)>) -> RuleField {
    RuleField::asymptotic(base, exceptions.into_iter().collect::<BTreeMap<_, _>>()).unwrap()
}

pub fn constant(rule: LocalRule) -> RuleField {
    RuleField::Constant(rule)
}

pub fn finite(g: &GroupModel, background: Symbol, ones: &[i64]) -> Config {
    Config::finite(background, ones.iter().map(|&i| (at(g, i), 1 - background)))
}

/// Direct evaluation of `s(g)((g^-1 x)|_M)`: the table entry at the
/// big-endian code of `x(g m)` over the sorted memory.
pub fn direct_eval(group: &GroupModel, s: &RuleField, x: &Config, g: &GroupElement) -> Symbol {
    let rule = s.rule_at(g);
    let q = rule.alphabet().size() as usize;
    let mut idx = 0usize;
    for m in rule.memory().iter() {
        let gm = group.mul(g, m);
        idx = idx * q + x.at(&gm) as usize;
    }
    rule.table()[idx]
}

/// `sigma_t(sigma_s(x))(g)` by nesting [`direct_eval`] over the memory of `t`.
pub fn direct_compose(group: &GroupModel, t: &RuleField, s: &RuleField, x: &Config, g: &GroupElement) -> Symbol {
    let rule = t.rule_at(g);
    let q = rule.alphabet().size() as usize;
    let mut idx = 0usize;
    for n in rule.memory().iter() {
        idx = idx * q + direct_eval(group, s, x, &group.mul(g, n)) as usize;
    }
    rule.table()[idx]
}

/// Number of labeled isomorphisms from the graph ball `B(v, r)` onto the
/// Cayley ball `B(r)` sending `v` to `1_G`, by backtracking.
pub fn count_ball_isos(graph: &nuca::sofic::LabeledGraph, group: &GroupModel, v: usize, r: usize) -> usize {
    // undirected BFS, independent of the library's distance routine
    let n = graph.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (a, _, b) in graph.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut dist = vec![usize::MAX; n];
    dist[v] = 0;
    let mut order = vec![v];
    let mut head = 0;
    while head < order.len() {
        let a = order[head];
        head += 1;
        if dist[a] == r {
            continue;
        }
        for &b in &adj[a] {
            if dist[b] == usize::MAX {
                dist[b] = dist[a] + 1;
                order.push(b);
            }
        }
    }
    let ball = group.ball_elements(r).to_vec();
    if ball.len() != order.len() {
        return 0;
    }
    let gens = group.generators().to_vec();
    let has_edge = |a: usize, d: &GroupElement, b: usize| match graph.label_index(d) {
        Some(l) => graph.out(a, l) == Some(b),
        None => false,
    };
    fn go(
        k: usize,
        order: &[usize],
        ball: &[GroupElement],
        gens: &[GroupElement],
        group: &GroupModel,
        assigned: &mut Vec<GroupElement>,
        used: &mut Vec<bool>,
        has_edge: &dyn Fn(usize, &GroupElement, usize) -> bool,
    ) -> usize {
        if k == order.len() {
            return 1;
        }
        let mut total = 0;
        let candidates: Vec<usize> = if k == 0 {
            vec![ball.binary_search(&group.identity()).unwrap()]
        } else {
            (0..ball.len()).filter(|&i| !used[i]).collect()
        };
        for i in candidates {
            let g = &ball[i];
            let ok = (0..=k).all(|j| {
                let (a, ga) = if j == k { (order[k], g) } else { (order[j], &assigned[j]) };
                gens.iter().all(|d| {
                    has_edge(a, d, order[k]) == (group.mul(ga, d) == *g)
                        && has_edge(order[k], d, a) == (group.mul(g, d) == *ga)
                })
            });
            if ok {
                used[i] = true;
                assigned.push(g.clone());
                total += go(k + 1, order, ball, gens, group, assigned, used, has_edge);
                assigned.pop();
                used[i] = false;
            }
        }
        total
    }
    let mut used = vec![false; ball.len()];
    go(0, &order, &ball, &gens, group, &mut Vec::new(), &mut used, &has_edge)
}

pub mod ring {
    use nuca::engine::{Config, Symbol};
    use nuca::group::{GroupElement, GroupModel};
    use nuca::twisted::{Beta, GroupRingElt, Ring, TwistedElement, TwistedMatrix};
    use rand::Rng;

    /// Random element with coefficients on `B(radius)`, each nonzero with
    /// probability one half.
    pub fn gr_elt(ring: &Ring, rng: &mut impl Rng, radius: usize) -> GroupRingElt {
        let q = ring.field.order() as i64;
        let ball = ring.group.ball_elements(radius);
        let mut terms: Vec<(GroupElement, i64)> = Vec::new();
        for g in ball.iter() {
            if rng.gen_bool(0.5) {
                terms.push((g.clone(), rng.gen_range(1..q)));
            }
        }
        GroupRingElt::from_terms(&ring.field, terms)
    }

    /// Random twisted element: `alpha` and up to `sites` beta sites, all
    /// supported in `B(radius)`.
    pub fn element(ring: &Ring, rng: &mut impl Rng, radius: usize, sites: usize) -> TwistedElement {
        let alpha = gr_elt(ring, rng, radius);
        let ball = ring.group.ball_elements(radius);
        let count = rng.gen_range(0..=sites);
        let beta = Beta::from_sites(
            (0..count).map(|_| (ball[rng.gen_range(0..ball.len())].clone(), gr_elt(ring, rng, radius))),
        );
        TwistedElement::new(alpha, beta)
    }

    pub fn matrix(ring: &Ring, rng: &mut impl Rng, n: usize, radius: usize, sites: usize) -> TwistedMatrix {
        TwistedMatrix::new(n, (0..n * n).map(|_| element(ring, rng, radius, sites)).collect()).unwrap()
    }

    /// `(c e_g, 0)`.
    pub fn mono(ring: &Ring, g: i64, c: i64) -> TwistedElement {
        TwistedElement::new(GroupRingElt::monomial(&ring.field, ring.group.int(&[g]), c), Beta::zero())
    }

    /// `A = E_1 ... E_k D` and `B = D^-1 E_k^-1 ... E_1^-1` for random
    /// elementary `E_i` and a diagonal of shifts `D`.
    pub fn elementary_pair(ring: &Ring, rng: &mut impl Rng, n: usize, factors: usize) -> (TwistedMatrix, TwistedMatrix) {
        let mut a = ring.tm_unit(n);
        let mut b = ring.tm_unit(n);
        for _ in 0..factors {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let c = element(ring, rng, 1, 1);
            let e = ring.tm_elementary(n, i, j, c.clone()).unwrap();
            let inv = ring.tm_elementary(n, i, j, ring.d1_neg(&c)).unwrap();
            a = ring.tm_mul(&a, &e).unwrap();
            b = ring.tm_mul(&inv, &b).unwrap();
        }
        let shifts: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        let d = ring.tm_diagonal(shifts.iter().map(|&k| mono(ring, k, 1)).collect()).unwrap();
        let d_inv = ring.tm_diagonal(shifts.iter().map(|&k| mono(ring, -k, 1)).collect()).unwrap();
        (ring.tm_mul(&a, &d).unwrap(), ring.tm_mul(&d_inv, &b).unwrap())
    }

    /// `sum_{t in B(span)} alpha(t) beta(g t)(t^-1 h)`, summed literally.
    pub fn naive_alpha_beta(ring: &Ring, alpha: &GroupRingElt, beta: &Beta, g: &GroupElement, h: &GroupElement, span: usize) -> u32 {
        let grp = &ring.group;
        grp.ball_elements(span).iter().fold(0, |acc, t| {
            let b = beta.at(&grp.mul(g, t)).map_or(0, |b| b.coeff(&grp.mul(&grp.inv(t), h)));
            ring.field.add(acc, ring.field.mul(alpha.coeff(t), b))
        })
    }

    /// `sum_{t in B(span)} beta(g)(t) gamma(g t)(t^-1 h)`, summed literally.
    pub fn naive_beta_gamma(ring: &Ring, beta: &Beta, gamma: &Beta, g: &GroupElement, h: &GroupElement, span: usize) -> u32 {
        let grp = &ring.group;
        grp.ball_elements(span).iter().fold(0, |acc, t| {
            let b = beta.at(g).map_or(0, |b| b.coeff(t));
            let c = gamma.at(&grp.mul(g, t)).map_or(0, |c| c.coeff(&grp.mul(&grp.inv(t), h)));
            ring.field.add(acc, ring.field.mul(b, c))
        })
    }

    /// `tau_A(x)(g)` straight from the action formula, with vector
    /// symbols decoded as base-`q` digits, component 0 least significant.
    pub fn direct_tau(ring: &Ring, a: &TwistedMatrix, x: &Config, g: &GroupElement, span: usize) -> Symbol {
        let q = ring.field.order();
        let n = a.size();
        let digits = |v: Symbol| -> Vec<u32> { (0..n).map(|i| (v / q.pow(i as u32)) % q).collect() };
        let mut out = vec![0u32; n];
        for h in ring.group.ball_elements(span).iter() {
            let z = digits(x.at(&ring.group.mul(g, h)));
            for (i, o) in out.iter_mut().enumerate() {
                for (j, &zj) in z.iter().enumerate() {
                    let e = a.get(i, j);
                    let c = ring.field.add(e.alpha.coeff(h), e.beta.at(g).map_or(0, |b| b.coeff(h)));
                    *o = ring.field.add(*o, ring.field.mul(c, zj));
                }
            }
        }
        out.iter().rev().fold(0, |acc, &d| acc * q + d)
    }

    pub fn random_config(group: &GroupModel, rng: &mut impl Rng, size: u32, radius: i64) -> Config {
        let background = rng.gen_range(0..size);
        Config::finite(background, (-radius..=radius).map(|i| (group.int(&[i]), rng.gen_range(0..size))))
    }
}

pub mod random {
    use std::collections::BTreeMap;

    use nuca::engine::{Alphabet, Config, LocalRule, RuleField};
    use nuca::group::{GroupElement, GroupModel};
    use rand::seq::SliceRandom;
    use rand::Rng;

    pub fn memory(group: &GroupModel, rng: &mut impl Rng, max_len: usize, radius: usize) -> Vec<GroupElement> {
        let ball = group.ball_elements(radius);
        let k = rng.gen_range(1..=max_len.min(ball.len()));
        ball.choose_multiple(rng, k).cloned().collect()
    }

    pub fn rule(alphabet: Alphabet, memory: &[GroupElement], rng: &mut impl Rng) -> LocalRule {
        let q = alphabet.size();
        LocalRule::from_fn(alphabet, memory.to_vec(), |_| rng.gen_range(0..q)).unwrap()
    }

    /// A random base rule with up to `max_exceptions` perturbed sites in
    /// `B(site_radius)`, all on one memory.
    pub fn field(
        group: &GroupModel,
        rng: &mut impl Rng,
        alphabet: Alphabet,
        max_memory: usize,
        max_exceptions: usize,
        site_radius: usize,
    ) -> RuleField {
        let m = memory(group, rng, max_memory, 2);
        let base = rule(alphabet, &m, rng);
        let ball = group.ball_elements(site_radius);
        let count = rng.gen_range(0..=max_exceptions);
        let exceptions: BTreeMap<GroupElement, LocalRule> =
            ball.choose_multiple(rng, count).map(|g| (g.clone(), rule(alphabet, &m, rng))).collect();
        RuleField::asymptotic(base, exceptions).unwrap()
    }

    /// Random background with random values on `B(radius)`.
    pub fn config(group: &GroupModel, rng: &mut impl Rng, alphabet: Alphabet, radius: usize) -> Config {
        let q = alphabet.size();
        let background = rng.gen_range(0..q);
        let ball = group.ball_elements(radius);
        Config::finite(background, ball.iter().map(|g| (g.clone(), rng.gen_range(0..q))).collect::<Vec<_>>())
    }
}
