use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use super::alphabet::{decode_index, pattern_index, Odometer, Symbol};
use super::config::{box_points, Config, Pattern};
use super::field::RuleField;
use super::rule::{table_len, LocalRule};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

const PARALLEL_TABLE: usize = 1 << 15;

/// The translate `g x`, with `(g x)(h) = x(g^-1 h)`.
pub fn translate_config(group: &GroupModel, g: &GroupElement, x: &Config) -> Config {
    match x {
        Config::Finite { background, exceptions } => Config::Finite {
            background: *background,
            exceptions: exceptions.iter().map(|(h, v)| (group.mul(g, h), *v)).collect(),
        },
        Config::Periodic { periods, .. } => {
            let shift = g.as_ints().expect("periodic configs live on Z^d");
            let values = box_points(periods)
                .map(|pt| {
                    let src: Vec<i64> = pt.iter().zip(&shift).map(|(a, b)| a - b).collect();
                    x.at(&group.int(&src))
                })
                .collect();
            Config::Periodic { periods: periods.clone(), values }
        }
    }
}

/// The translate `g s`, with `(g s)(h) = s(g^-1 h)`.
pub fn translate_rule_field(group: &GroupModel, g: &GroupElement, s: &RuleField) -> Result<RuleField> {
    match s {
        RuleField::Constant(_) => Ok(s.clone()),
        RuleField::Asymptotic { base, exceptions } => Ok(RuleField::Asymptotic {
            base: base.clone(),
            exceptions: exceptions.iter().map(|(h, r)| (group.mul(g, h), r.clone())).collect(),
        }),
        RuleField::Ubs(_) => Err(Error::Unsupported("translation of chart-described fields".into())),
    }
}

/// `sigma_s(x)(g) = s(g)((g^-1 x)|_M)`, evaluated directly at one site.
pub fn eval_at(group: &GroupModel, s: &RuleField, x: &Config, g: &GroupElement) -> Symbol {
    s.rule_at(g).eval_with(|m| x.at(&group.mul(g, m)))
}

/// The global map `sigma_s` on a finitely described configuration.
///
/// Finite configurations are supported for constant and asymptotically
/// constant fields, periodic ones for constant fields only.
pub fn apply(group: &GroupModel, s: &RuleField, x: &Config) -> Result<Config> {
    x.check(group, s.alphabet())?;
    match (x, s) {
        (_, RuleField::Ubs(_)) => Err(Error::Unsupported(
            "the image of a chart-described field has no finite description; evaluate on a window".into(),
        )),
        (Config::Periodic { periods, .. }, RuleField::Constant(rule)) => {
            let values = box_points(periods)
                .map(|pt| rule.eval_with(|m| x.at(&group.mul(&group.int(&pt), m))))
                .collect();
            Config::periodic(periods.clone(), values)
        }
        (Config::Periodic { .. }, RuleField::Asymptotic { .. }) => Err(Error::Unsupported(
            "periodic configurations require a constant rule field".into(),
        )),
        (Config::Finite { background, exceptions }, _) => {
            let base = s.base();
            let new_background = base.eval_with(|_| *background);
            let inverse_memory = group.inverse_set(base.memory());
            let support: Vec<GroupElement> = exceptions.keys().cloned().collect();
            // sites reading a non-background value, plus every exception site
            let mut candidates: BTreeSet<GroupElement> = group.product_set(&support, &inverse_memory).into_iter().collect();
            candidates.extend(s.exception_sites());
            let out = candidates
                .into_iter()
                .map(|g| {
                    let v = eval_at(group, s, x, &g);
                    (g, v)
                })
                .collect::<Vec<_>>();
            Ok(Config::finite(new_background, out))
        }
    }
}

/// The induced local map `A^{EM} -> A^E` of a family of rules over `E`.
#[derive(Clone, Debug)]
pub struct InducedMap {
    sites: Vec<GroupElement>,
    domain: Vec<GroupElement>,
    rules: Vec<LocalRule>,
    taps: Vec<Vec<usize>>,
    base: u32,
}

impl InducedMap {
    /// Induced map of `w` over `E`. All rules share the memory `M`.
    pub fn new(group: &GroupModel, sites: &[GroupElement], rules: Vec<LocalRule>) -> Result<Self> {
        if sites.len() != rules.len() {
            return Err(Error::DomainMismatch("one rule per site is required".into()));
        }
        let memory = match rules.first() {
            Some(r) => r.memory().clone(),
            None => Vec::new().into(),
        };
        if rules.iter().any(|r| r.memory() != &memory) {
            return Err(Error::MemoryMismatch("induced map rules must share one memory".into()));
        }
        let base = rules.first().map(|r| r.alphabet().size()).unwrap_or(1);
        let domain = group.product_set(sites, &memory);
        let taps = sites
            .iter()
            .map(|g| memory.iter().map(|m| domain.binary_search(&group.mul(g, m)).expect("gm lies in EM")).collect())
            .collect();
        Ok(InducedMap { sites: sites.to_vec(), domain, rules, taps, base })
    }

    /// Induced map of the field's restriction to `E`.
    pub fn from_field(group: &GroupModel, s: &RuleField, sites: &[GroupElement]) -> Result<Self> {
        let mut sorted: Vec<GroupElement> = sites.to_vec();
        sorted.sort();
        sorted.dedup();
        let rules = sorted.iter().map(|g| s.rule_at(g)).collect();
        Self::new(group, &sorted, rules)
    }

    /// The window `E`.
    pub fn sites(&self) -> &[GroupElement] {
        &self.sites
    }

    /// The input domain `EM`, sorted.
    pub fn domain(&self) -> &[GroupElement] {
        &self.domain
    }

    /// Evaluates on values aligned with [`InducedMap::domain`].
    pub fn eval(&self, input: &[Symbol]) -> Vec<Symbol> {
        let mut out = vec![0; self.sites.len()];
        self.eval_into(input, &mut out);
        out
    }

    pub fn eval_into(&self, input: &[Symbol], out: &mut [Symbol]) {
        let base = self.base as usize;
        for ((slot, rule), taps) in out.iter_mut().zip(&self.rules).zip(&self.taps) {
            let idx = taps.iter().fold(0usize, |acc, &t| acc * base + input[t] as usize);
            *slot = rule.eval_index(idx);
        }
    }

    /// Big-endian index of the output for an input given by index.
    pub fn eval_index(&self, input_index: usize, scratch: &mut [Symbol], out: &mut [Symbol]) -> usize {
        decode_index(self.base, input_index, scratch);
        self.eval_into(scratch, out);
        pattern_index(self.base, out)
    }

    pub fn alphabet_size(&self) -> u32 {
        self.base
    }

    pub fn rules(&self) -> &[LocalRule] {
        &self.rules
    }

    /// Restriction of the field's image: the pattern map on patterns.
    pub fn apply_pattern(&self, p: &Pattern) -> Result<Pattern> {
        if p.domain() != self.domain.as_slice() {
            return Err(Error::DomainMismatch("input pattern must live on EM".into()));
        }
        let values = self.eval(p.values());
        Pattern::from_parts(self.sites.clone(), values)
    }
}

/// The composed local rule `u(g)(z) = t(g)(n |-> s(gn)(m |-> z(nm)))` over
/// memory `NM`; `s_rules[i]` is the rule at `g * N[i]`.
pub fn compose_local(group: &GroupModel, t: &LocalRule, s_rules: &[LocalRule]) -> Result<LocalRule> {
    let n_mem = t.memory();
    if s_rules.len() != n_mem.len() {
        return Err(Error::MemoryMismatch("one inner rule per outer memory element is required".into()));
    }
    let Some(first) = s_rules.first() else {
        return Ok(t.clone());
    };
    let m_mem = first.memory().clone();
    let alphabet = t.alphabet();
    for r in s_rules {
        if r.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch("composed rules use different alphabets".into()));
        }
        if r.memory() != &m_mem {
            return Err(Error::MemoryMismatch("inner rules must share one memory".into()));
        }
    }
    let nm = group.product_set(n_mem, &m_mem);
    let len = table_len(alphabet, nm.len())?;
    let taps: Vec<Vec<usize>> = n_mem
        .iter()
        .map(|n| m_mem.iter().map(|m| nm.binary_search(&group.mul(n, m)).expect("nm in NM")).collect())
        .collect();
    let base = alphabet.size() as usize;
    let cell = |idx: usize, z: &mut Vec<Symbol>, y: &mut Vec<Symbol>| {
        decode_index(alphabet.size(), idx, z);
        for ((slot, rule), tap) in y.iter_mut().zip(s_rules).zip(&taps) {
            let i = tap.iter().fold(0usize, |acc, &p| acc * base + z[p] as usize);
            *slot = rule.eval_index(i);
        }
        t.eval(y)
    };
    let table: Vec<Symbol> = if len >= PARALLEL_TABLE {
        (0..len)
            .into_par_iter()
            .map_init(|| (vec![0; nm.len()], vec![0; n_mem.len()]), |(z, y), idx| cell(idx, z, y))
            .collect()
    } else {
        let (mut z, mut y) = (vec![0; nm.len()], vec![0; n_mem.len()]);
        (0..len).map(|idx| cell(idx, &mut z, &mut y)).collect()
    };
    LocalRule::new(alphabet, nm, table)
}

/// The field `u` with `sigma_u = sigma_t . sigma_s`, over memory `NM`.
pub fn compose(group: &GroupModel, t: &RuleField, s: &RuleField) -> Result<RuleField> {
    if t.alphabet() != s.alphabet() {
        return Err(Error::AlphabetMismatch("composed fields use different alphabets".into()));
    }
    if t.is_ubs() || s.is_ubs() {
        let shared = Arc::new(group.clone());
        return RuleField::composite(shared, t.clone(), s.clone());
    }
    let n_mem = t.memory();
    let at = |g: &GroupElement| -> Result<LocalRule> {
        let s_rules: Vec<LocalRule> = n_mem.iter().map(|n| s.rule_at(&group.mul(g, n))).collect();
        compose_local(group, &t.rule_at(g), &s_rules)
    };
    let base = compose_local(group, t.base(), &vec![s.base().clone(); n_mem.len()])?;
    // u(g) differs from the base only where t(g) does or s deviates on gN
    let mut sites: BTreeSet<GroupElement> = t.exception_sites().into_iter().collect();
    let inverse_n = group.inverse_set(n_mem);
    sites.extend(group.product_set(&s.exception_sites(), &inverse_n));
    let mut exceptions = BTreeMap::new();
    for g in sites {
        exceptions.insert(g.clone(), at(&g)?);
    }
    RuleField::asymptotic(base, exceptions)
}

/// `gamma_{g,K}`: re-indexes a pattern on `gK` to `K` via `a |-> g^-1 a`.
pub fn translation_conjugate(group: &GroupModel, g: &GroupElement, k: &[GroupElement], p: &Pattern) -> Result<Pattern> {
    let gk: BTreeSet<GroupElement> = k.iter().map(|h| group.mul(g, h)).collect();
    if !p.domain().iter().eq(gk.iter()) {
        return Err(Error::DomainMismatch("pattern domain is not gK".into()));
    }
    Ok(Pattern::new(k.iter().map(|h| (h.clone(), p.get(&group.mul(g, h)).expect("in gK"))).collect()))
}

/// Inverse of [`translation_conjugate`]: a pattern on `K` moved to `gK`.
pub fn translation_deconjugate(group: &GroupModel, g: &GroupElement, k: &[GroupElement], p: &Pattern) -> Result<Pattern> {
    let ks: BTreeSet<&GroupElement> = k.iter().collect();
    if !p.domain().iter().eq(ks.iter().copied()) {
        return Err(Error::DomainMismatch("pattern domain is not K".into()));
    }
    Ok(Pattern::new(k.iter().map(|h| (group.mul(g, h), p.get(h).expect("in K"))).collect()))
}

/// Finite surrogate for the orbit closure: the field itself, its translates
/// over `B(rho)` in canonical order, then the constant limit; deduplicated.
pub fn orbit_sample(group: &GroupModel, s: &RuleField, rho: usize) -> Result<Vec<RuleField>> {
    match s {
        RuleField::Ubs(_) => Err(Error::Unsupported("orbit sampling of chart-described fields".into())),
        RuleField::Constant(_) => Ok(vec![s.clone()]),
        RuleField::Asymptotic { .. } => {
            let mut out = vec![s.clone()];
            for g in group.ball_elements(rho).iter() {
                let t = translate_rule_field(group, g, s)?;
                if !out.contains(&t) {
                    out.push(t);
                }
            }
            let limit = s.limit();
            if !out.contains(&limit) {
                out.push(limit);
            }
            Ok(out)
        }
    }
}

/// Every pattern over `domain`, in canonical index order.
pub(crate) fn all_patterns(base: u32, len: usize) -> impl Iterator<Item = Vec<Symbol>> {
    let mut odo = Odometer::new(base, len);
    std::iter::from_fn(move || odo.next_pattern().map(|p| p.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Alphabet;

    #[test]
    fn shift_image() {
        let z = GroupModel::integers();
        let s = RuleField::Constant(LocalRule::projection(Alphabet::binary(), z.int(&[1])));
        let x = Config::finite(0, vec![(z.int(&[0]), 1)]);
        assert_eq!(apply(&z, &s, &x).unwrap(), Config::finite(0, vec![(z.int(&[-1]), 1)]));
    }

    #[test]
    fn shift_compose() {
        let z = GroupModel::integers();
        let s = RuleField::Constant(LocalRule::projection(Alphabet::binary(), z.int(&[1])));
        let u = compose(&z, &s, &s).unwrap();
        assert!(u.base().equivalent(&LocalRule::projection(Alphabet::binary(), z.int(&[2]))));
        assert_eq!(u.memory().len(), 1);
    }

    #[test]
    fn xor_induced_map() {
        let z = GroupModel::integers();
        let xor = LocalRule::from_fn(Alphabet::binary(), vec![z.int(&[0]), z.int(&[1])], |p| p[0] ^ p[1]).unwrap();
        let f = InducedMap::from_field(&z, &RuleField::Constant(xor), &[z.int(&[0]), z.int(&[1])]).unwrap();
        assert_eq!(f.domain().len(), 3);
        assert_eq!(f.eval(&[1, 0, 1]), vec![1, 1]);
    }

    #[test]
    fn conjugate_round_trip() {
        let z = GroupModel::integers();
        let k = vec![z.int(&[0]), z.int(&[1])];
        let p = Pattern::new(vec![(z.int(&[5]), 1), (z.int(&[6]), 0)]);
        let q = translation_conjugate(&z, &z.int(&[5]), &k, &p).unwrap();
        assert_eq!(q.values(), &[1, 0]);
        assert_eq!(translation_deconjugate(&z, &z.int(&[5]), &k, &q).unwrap(), p);
        assert!(translation_conjugate(&z, &z.int(&[4]), &k, &p).is_err());
    }
}
