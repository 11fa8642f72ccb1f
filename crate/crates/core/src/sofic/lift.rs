use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::graph::LabeledGraph;
use super::interior::{interior, InteriorSet};
use super::pack::{pack, PackingCover};
use crate::engine::{decode_index, Alphabet, LocalRule, RuleField, Symbol};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// Exhaustive claim verification up to this many inputs.
pub const EXHAUSTIVE_CAP: u128 = 1 << 20;
/// Sample size beyond the exhaustive cap.
pub const SAMPLE_SIZE: u64 = 10_000;

/// Interiors and packing for the lifting construction with `R = 4r`.
#[derive(Clone, Debug)]
pub struct SoficSetup {
    pub graph: LabeledGraph,
    pub group: GroupModel,
    pub r: usize,
    pub big_r: usize,
    pub v_r: InteriorSet,
    pub v_big: InteriorSet,
    pub v_2big: InteriorSet,
    pub v_3big: InteriorSet,
    /// Packing at radius `R` over `V(3R)`.
    pub packing: PackingCover,
    /// For `v` in some `B(w, R)`: the center `w` and `psi_{w,R}(v)`.
    pub owner: BTreeMap<usize, (usize, GroupElement)>,
}

impl SoficSetup {
    pub fn new(graph: LabeledGraph, group: GroupModel, r: usize) -> Result<Self> {
        let big_r = 4 * r;
        let v_r = interior(&graph, &group, r)?;
        let v_big = interior(&graph, &group, big_r)?;
        let v_2big = interior(&graph, &group, 2 * big_r)?;
        let v_3big = interior(&graph, &group, 3 * big_r)?;
        let packing = pack(&graph, &v_3big, big_r)?;
        let mut owner = BTreeMap::new();
        for (&w, ball) in packing.centers.iter().zip(&packing.balls) {
            for &v in ball {
                let g = v_big.element(w, v).expect("W lies in V(R)").clone();
                owner.insert(v, (w, g));
            }
        }
        Ok(SoficSetup { graph, group, r, big_r, v_r, v_big, v_2big, v_3big, packing, owner })
    }

    /// The rule placed at `v`: the field's rule at `psi_{w,R}(v)` inside a
    /// packing ball, the base rule elsewhere.
    pub fn rule_at(&self, field: &RuleField, v: usize) -> LocalRule {
        match self.owner.get(&v) {
            Some((_, g)) => field.rule_at(g),
            None => field.base().clone(),
        }
    }

    /// Whether every exception of `field` sits deep enough inside `B(R)`
    /// for the lifted rules to match the field around each center.
    pub fn exceptions_inside(&self, field: &RuleField) -> bool {
        let reach = field.memory().iter().map(|m| self.group.word_length(m)).max().unwrap_or(0);
        field.exception_sites().iter().all(|g| self.group.word_length(g) + 2 * reach <= self.big_r)
    }
}

/// A rule field lifted to the graph: `out(v) = rule(v)(m |-> x(psi_{v,r}^-1(m)))`.
#[derive(Clone, Debug)]
pub struct LiftedMap {
    alphabet: Alphabet,
    domain: Vec<usize>,
    targets: Vec<usize>,
    rules: Vec<LocalRule>,
    taps: Vec<Vec<usize>>,
}

impl LiftedMap {
    /// Lifts `field` from `A^{domain}` to `A^{targets}`. The field's memory
    /// must lie in `B(r)` and every neighborhood must stay in the domain.
    pub fn new(setup: &SoficSetup, field: &RuleField, domain: Vec<usize>, targets: Vec<usize>) -> Result<Self> {
        if field.is_ubs() {
            return Err(Error::Unsupported("lifting needs a finitely described field".into()));
        }
        let memory = field.memory();
        if let Some(m) = memory.iter().find(|m| setup.v_r.ball.binary_search(m).is_err()) {
            return Err(Error::DomainMismatch(format!("memory element {m} lies outside B({})", setup.r)));
        }
        let mut taps = Vec::with_capacity(targets.len());
        let mut rules = Vec::with_capacity(targets.len());
        for &v in &targets {
            let row = memory
                .iter()
                .map(|m| {
                    let u = setup
                        .v_r
                        .vertex(v, m)
                        .ok_or_else(|| Error::DomainMismatch(format!("vertex {v} lies outside V({})", setup.r)))?;
                    domain
                        .binary_search(&u)
                        .map_err(|_| Error::DomainMismatch(format!("vertex {u} read by {v} lies outside the domain")))
                })
                .collect::<Result<Vec<usize>>>()?;
            taps.push(row);
            rules.push(setup.rule_at(field, v));
        }
        Ok(LiftedMap { alphabet: field.alphabet(), domain, targets, rules, taps })
    }

    /// `Phi: A^{V(R)} -> A^{V(2R)}`, or onto `V(3R)` with `to_3r`.
    pub fn phi(setup: &SoficSetup, s: &RuleField, to_3r: bool) -> Result<Self> {
        let target = if to_3r { &setup.v_3big } else { &setup.v_2big };
        Self::new(setup, s, setup.v_big.vertices(), target.vertices())
    }

    /// `Psi: A^{V(2R)} -> A^{V(3R)}`.
    pub fn psi(setup: &SoficSetup, t: &RuleField) -> Result<Self> {
        Self::new(setup, t, setup.v_2big.vertices(), setup.v_3big.vertices())
    }

    /// Replaces the rule at target position `i`; used for negative controls.
    pub fn with_rule(mut self, i: usize, rule: LocalRule) -> Result<Self> {
        if rule.memory() != self.rules[i].memory() || rule.alphabet() != self.alphabet {
            return Err(Error::MemoryMismatch("replacement rule must keep memory and alphabet".into()));
        }
        self.rules[i] = rule;
        Ok(self)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn rules(&self) -> &[LocalRule] {
        &self.rules
    }

    /// Domain positions read by target `i`.
    pub fn taps(&self, i: usize) -> &[usize] {
        &self.taps[i]
    }

    pub fn eval_target(&self, i: usize, input: &[Symbol]) -> Symbol {
        let q = self.alphabet.size() as usize;
        let idx = self.taps[i].iter().fold(0usize, |acc, &p| acc * q + input[p] as usize);
        self.rules[i].eval_index(idx)
    }

    /// Evaluates on values aligned with [`LiftedMap::domain`].
    pub fn eval(&self, input: &[Symbol]) -> Vec<Symbol> {
        (0..self.targets.len()).map(|i| self.eval_target(i, input)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimMode {
    /// All of `A^{V(R)}`.
    Exhaustive,
    /// A seeded uniform sample.
    Sampled,
    /// For each target, every pattern on the inputs it depends on.
    LocalCone,
}

/// Outcome of checking `Psi(Phi(x)) = x|_{V(3R)}`.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub mode: ClaimMode,
    pub passed: bool,
    /// No targets, so the claim holds vacuously.
    pub vacuous: bool,
    pub checked: u64,
    pub seed: Option<u64>,
    /// A failing input on `V(R)` (or on the failing target's cone).
    pub failure: Option<Vec<Symbol>>,
    /// The target vertex where the failure shows.
    pub failing_vertex: Option<usize>,
}

fn compatible(phi: &LiftedMap, psi: &LiftedMap) -> Result<Vec<usize>> {
    if phi.targets != psi.domain {
        return Err(Error::DomainMismatch("Psi must read exactly the targets of Phi".into()));
    }
    psi.targets
        .iter()
        .map(|v| {
            phi.domain
                .binary_search(v)
                .map_err(|_| Error::DomainMismatch(format!("target {v} of Psi lies outside the domain of Phi")))
        })
        .collect()
}

fn first_mismatch(phi: &LiftedMap, psi: &LiftedMap, restrict: &[usize], x: &[Symbol]) -> Option<usize> {
    let z = phi.eval(x);
    (0..psi.targets.len()).find(|&i| psi.eval_target(i, &z) != x[restrict[i]])
}

/// Checks `Psi . Phi = pi` exhaustively when `|A|^{|V(R)|}` is at most
/// [`EXHAUSTIVE_CAP`], otherwise on [`SAMPLE_SIZE`] seeded samples.
pub fn verify_claim(phi: &LiftedMap, psi: &LiftedMap, seed: u64) -> Result<ClaimReport> {
    let restrict = compatible(phi, psi)?;
    let q = phi.alphabet.size();
    let n = phi.domain.len();
    let vacuous = psi.targets.is_empty();
    let total = phi.alphabet.pow(n).filter(|&t| t <= EXHAUSTIVE_CAP);
    let report = |mode, checked, seed, failure: Option<(Vec<Symbol>, usize)>| ClaimReport {
        mode,
        passed: failure.is_none(),
        vacuous,
        checked,
        seed,
        failing_vertex: failure.as_ref().map(|(_, i)| psi.targets[*i]),
        failure: failure.map(|(x, _)| x),
    };
    if let Some(total) = total {
        let failure = (0..total as usize).into_par_iter().find_map_first(|idx| {
            let mut x = vec![0; n];
            decode_index(q, idx, &mut x);
            first_mismatch(phi, psi, &restrict, &x).map(|i| (x, i))
        });
        return Ok(report(ClaimMode::Exhaustive, total as u64, None, failure));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for _ in 0..SAMPLE_SIZE {
        let x: Vec<Symbol> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        checked += 1;
        if let Some(i) = first_mismatch(phi, psi, &restrict, &x) {
            return Ok(report(ClaimMode::Sampled, checked, Some(seed), Some((x, i))));
        }
    }
    Ok(report(ClaimMode::Sampled, checked, Some(seed), None))
}

/// Exact check target by target: `Psi(Phi(x))(v)` depends only on `x` over
/// the cone of `v`, and every pattern on that cone is tried. A failure is
/// reported as a full input that is zero off the cone.
pub fn verify_claim_local(phi: &LiftedMap, psi: &LiftedMap) -> Result<ClaimReport> {
    let restrict = compatible(phi, psi)?;
    let q = phi.alphabet.size();
    let n = phi.domain.len();
    let mut checked = 0u64;
    for i in 0..psi.targets.len() {
        let mut cone: Vec<usize> = psi.taps[i].iter().flat_map(|&j| phi.taps[j].iter().copied()).collect();
        cone.push(restrict[i]);
        cone.sort_unstable();
        cone.dedup();
        let total = phi
            .alphabet
            .pow(cone.len())
            .filter(|&t| t <= EXHAUSTIVE_CAP)
            .ok_or(Error::TooLarge { entries: u128::MAX, cap: EXHAUSTIVE_CAP })?;
        let mut x = vec![0; n];
        let mut local = vec![0; cone.len()];
        for idx in 0..total as usize {
            decode_index(q, idx, &mut local);
            for (&p, &v) in cone.iter().zip(&local) {
                x[p] = v;
            }
            checked += 1;
            let z: Vec<Symbol> = psi.taps[i].iter().map(|&j| phi.eval_target(j, &x)).collect();
            let qz = q as usize;
            let out = psi.rules[i].eval_index(z.iter().fold(0usize, |acc, &v| acc * qz + v as usize));
            if out != x[restrict[i]] {
                return Ok(ClaimReport {
                    mode: ClaimMode::LocalCone,
                    passed: false,
                    vacuous: false,
                    checked,
                    seed: None,
                    failure: Some(x),
                    failing_vertex: Some(psi.targets[i]),
                });
            }
        }
    }
    Ok(ClaimReport {
        mode: ClaimMode::LocalCone,
        passed: true,
        vacuous: psi.targets.is_empty(),
        checked,
        seed: None,
        failure: None,
        failing_vertex: None,
    })
}
