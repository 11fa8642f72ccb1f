use std::collections::BTreeMap;

use super::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// A finitely described configuration `x: G -> A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Config {
    /// Constant `background` except at finitely many sites.
    Finite {
        background: Symbol,
        exceptions: BTreeMap<GroupElement, Symbol>,
    },
    /// A configuration on `Z^d` periodic along each axis. `values` lists the
    /// box `[0, p_1) x ... x [0, p_d)` with the first axis most significant.
    Periodic { periods: Vec<u64>, values: Vec<Symbol> },
}

impl Config {
    pub fn constant(background: Symbol) -> Self {
        Config::Finite { background, exceptions: BTreeMap::new() }
    }

    /// A finitely supported configuration; exceptions equal to the
    /// background are dropped.
    pub fn finite(background: Symbol, exceptions: impl IntoIterator<Item = (GroupElement, Symbol)>) -> Self {
        let exceptions = exceptions.into_iter().filter(|(_, v)| *v != background).collect();
        Config::Finite { background, exceptions }
    }

    /// A periodic configuration reduced to its minimal periods.
    pub fn periodic(periods: Vec<u64>, values: Vec<Symbol>) -> Result<Self> {
        if periods.is_empty() || periods.iter().any(|&p| p == 0) {
            return Err(Error::Config("periods must be positive".into()));
        }
        let cells = periods.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p));
        if cells != Some(values.len() as u64) {
            return Err(Error::Config(format!("periodic box needs {:?} values, got {}", cells, values.len())));
        }
        Ok(Config::Periodic { periods, values }.reduced())
    }

    fn reduced(self) -> Self {
        let Config::Periodic { mut periods, mut values } = self else {
            return self;
        };
        for axis in 0..periods.len() {
            let p = periods[axis];
            let best = (1..=p).filter(|d| p % d == 0).find(|&d| {
                let cand = Config::Periodic { periods: periods.clone(), values: values.clone() };
                box_points(&periods).all(|pt| {
                    let mut shifted = pt.clone();
                    shifted[axis] += d as i64;
                    cand.at_ints(&pt) == cand.at_ints(&shifted)
                })
            });
            let d = best.unwrap_or(p);
            if d < p {
                let mut new_periods = periods.clone();
                new_periods[axis] = d;
                let old = Config::Periodic { periods: periods.clone(), values: values.clone() };
                values = box_points(&new_periods).map(|pt| old.at_ints(&pt)).collect();
                periods = new_periods;
            }
        }
        if periods.iter().all(|&p| p == 1) {
            return Config::constant(values[0]);
        }
        Config::Periodic { periods, values }
    }

    /// Value at `g`.
    pub fn at(&self, g: &GroupElement) -> Symbol {
        match self {
            Config::Finite { background, exceptions } => *exceptions.get(g).unwrap_or(background),
            Config::Periodic { .. } => self.at_ints(&g.as_ints().expect("periodic configs live on Z^d")),
        }
    }

    fn at_ints(&self, coords: &[i64]) -> Symbol {
        match self {
            Config::Finite { background, .. } => *background,
            Config::Periodic { periods, values } => {
                let idx = coords
                    .iter()
                    .zip(periods)
                    .fold(0u64, |acc, (&c, &p)| acc * p + c.rem_euclid(p as i64) as u64);
                values[idx as usize]
            }
        }
    }

    pub fn background(&self) -> Option<Symbol> {
        match self {
            Config::Finite { background, .. } => Some(*background),
            Config::Periodic { .. } => None,
        }
    }

    /// Sites that differ from the background.
    pub fn support(&self) -> Vec<GroupElement> {
        match self {
            Config::Finite { exceptions, .. } => exceptions.keys().cloned().collect(),
            Config::Periodic { .. } => Vec::new(),
        }
    }

    /// Validates the configuration against a group and alphabet.
    pub fn check(&self, group: &GroupModel, alphabet: Alphabet) -> Result<()> {
        match self {
            Config::Finite { background, exceptions } => {
                if !alphabet.contains(*background) {
                    return Err(Error::Config(format!("background {background} outside the alphabet")));
                }
                for (g, v) in exceptions {
                    group.check(g)?;
                    if !alphabet.contains(*v) {
                        return Err(Error::Config(format!("value {v} at {g} outside the alphabet")));
                    }
                }
                Ok(())
            }
            Config::Periodic { periods, values } => {
                if group.free_abelian_rank() != Some(periods.len()) {
                    return Err(Error::Config(format!("periodic configuration with {} axes on {group}", periods.len())));
                }
                if let Some(v) = values.iter().find(|v| !alphabet.contains(**v)) {
                    return Err(Error::Config(format!("value {v} outside the alphabet")));
                }
                Ok(())
            }
        }
    }

    /// Restriction to a finite domain.
    pub fn restrict(&self, domain: &[GroupElement]) -> Pattern {
        Pattern::new(domain.iter().map(|g| (g.clone(), self.at(g))).collect())
    }
}

pub(crate) fn box_points(periods: &[u64]) -> impl Iterator<Item = Vec<i64>> + '_ {
    let total: u64 = periods.iter().product();
    (0..total).map(move |mut idx| {
        let mut pt = vec![0i64; periods.len()];
        for (slot, &p) in pt.iter_mut().zip(periods).rev() {
            *slot = (idx % p) as i64;
            idx /= p;
        }
        pt
    })
}

/// A finite pattern: a total map from an ordered domain to symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    domain: Vec<GroupElement>,
    values: Vec<Symbol>,
}

impl Pattern {
    /// Builds a pattern from `(site, value)` pairs; the domain is sorted.
    /// A repeated site keeps its last value.
    pub fn new(entries: Vec<(GroupElement, Symbol)>) -> Self {
        let map: BTreeMap<GroupElement, Symbol> = entries.into_iter().collect();
        let (domain, values) = map.into_iter().unzip();
        Pattern { domain, values }
    }

    /// Pattern over a sorted domain with aligned values.
    pub fn from_parts(domain: Vec<GroupElement>, values: Vec<Symbol>) -> Result<Self> {
        if domain.len() != values.len() {
            return Err(Error::DomainMismatch(format!("{} sites but {} values", domain.len(), values.len())));
        }
        if !domain.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::DomainMismatch("pattern domain must be sorted and duplicate-free".into()));
        }
        Ok(Pattern { domain, values })
    }

    pub fn domain(&self) -> &[GroupElement] {
        &self.domain
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn get(&self, g: &GroupElement) -> Option<Symbol> {
        self.domain.binary_search(g).ok().map(|i| self.values[i])
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// The configuration equal to the pattern on its domain and to
    /// `background` elsewhere.
    pub fn extend(&self, background: Symbol) -> Config {
        Config::finite(background, self.domain.iter().cloned().zip(self.values.iter().copied()))
    }
}
