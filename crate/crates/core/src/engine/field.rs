use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::alphabet::Alphabet;
use super::ops::compose_local;
use super::rule::{sorted_memory, LocalRule, Memory};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// Largest annulus the singularity witness will enumerate.
const ANNULUS_CAP: usize = 1 << 20;

/// A configuration `s: G -> S` of local rules over one shared memory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleField {
    Constant(LocalRule),
    /// Equal to `base` outside the finitely many exception sites.
    Asymptotic {
        base: LocalRule,
        exceptions: BTreeMap<GroupElement, LocalRule>,
    },
    Ubs(UbsField),
}

/// A field with uniformly bounded singularity, described by charts or as a
/// composite of two fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UbsField {
    group: Arc<GroupModel>,
    base: LocalRule,
    kind: UbsKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum UbsKind {
    Charts(Vec<Chart>),
    Composite {
        outer: Box<RuleField>,
        inner: Box<RuleField>,
        memory: Memory,
    },
}

/// A rule applied on a region. The first chart containing a site wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub region: Region,
    pub rule: LocalRule,
}

/// A decidable set of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Sites(BTreeSet<GroupElement>),
    /// Elements whose word length is within `width` of `first * ratio^n`
    /// for some `n >= 0`.
    Shells { first: usize, ratio: usize, width: usize },
    /// `{ g : g * by in region }`.
    Shifted { region: Box<Region>, by: GroupElement },
}

impl Region {
    pub fn contains(&self, group: &GroupModel, g: &GroupElement) -> bool {
        match self {
            Region::Sites(set) => set.contains(g),
            Region::Shells { first, ratio, width } => {
                let len = group.word_length(g);
                let mut center = *first;
                loop {
                    if len + width >= center && len <= center + width {
                        return true;
                    }
                    if center > len + width || *ratio < 2 {
                        return false;
                    }
                    center *= ratio;
                }
            }
            Region::Shifted { region, by } => region.contains(group, &group.mul(g, by)),
        }
    }
}

fn check_alphabet(a: &LocalRule, b: &LocalRule) -> Result<()> {
    if a.alphabet() == b.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!("alphabet of size {} vs {}", a.alphabet().size(), b.alphabet().size())))
    }
}

fn union_memory<'a>(rules: impl Iterator<Item = &'a LocalRule>) -> Vec<GroupElement> {
    let set: BTreeSet<GroupElement> = rules.flat_map(|r| r.memory().iter().cloned()).collect();
    set.into_iter().collect()
}

impl RuleField {
    /// An asymptotically constant field. Rules are widened to their union
    /// memory and exceptions equal to the base are dropped.
    pub fn asymptotic(base: LocalRule, exceptions: BTreeMap<GroupElement, LocalRule>) -> Result<Self> {
        for r in exceptions.values() {
            check_alphabet(&base, r)?;
        }
        let memory = union_memory(std::iter::once(&base).chain(exceptions.values()));
        let base = base.widen(&memory)?;
        let mut normalized = BTreeMap::new();
        for (g, r) in exceptions {
            let r = r.widen(&memory)?;
            if r != base {
                normalized.insert(g, r);
            }
        }
        Ok(if normalized.is_empty() {
            RuleField::Constant(base)
        } else {
            RuleField::Asymptotic { base, exceptions: normalized }
        })
    }

    /// A field given by charts over a base rule.
    pub fn charts(group: Arc<GroupModel>, base: LocalRule, charts: Vec<Chart>) -> Result<Self> {
        for c in &charts {
            check_alphabet(&base, &c.rule)?;
        }
        let memory = union_memory(std::iter::once(&base).chain(charts.iter().map(|c| &c.rule)));
        let base = base.widen(&memory)?;
        let charts = charts
            .into_iter()
            .map(|c| Ok(Chart { region: c.region, rule: c.rule.widen(&memory)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(RuleField::Ubs(UbsField { group, base, kind: UbsKind::Charts(charts) }))
    }

    pub(crate) fn composite(group: Arc<GroupModel>, outer: RuleField, inner: RuleField) -> Result<Self> {
        let base = compose_local(&group, outer.base(), &vec![inner.base().clone(); outer.memory().len()])?;
        let memory = base.memory().clone();
        Ok(RuleField::Ubs(UbsField {
            group,
            base,
            kind: UbsKind::Composite { outer: Box::new(outer), inner: Box::new(inner), memory },
        }))
    }

    pub fn base(&self) -> &LocalRule {
        match self {
            RuleField::Constant(b) | RuleField::Asymptotic { base: b, .. } => b,
            RuleField::Ubs(u) => &u.base,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.base().alphabet()
    }

    pub fn memory(&self) -> &Memory {
        self.base().memory()
    }

    pub fn is_ubs(&self) -> bool {
        matches!(self, RuleField::Ubs(_))
    }

    /// Exception sites of an asymptotically constant field; empty for
    /// constant fields and `None` for UBS fields.
    pub fn exceptions(&self) -> Option<&BTreeMap<GroupElement, LocalRule>> {
        static EMPTY: BTreeMap<GroupElement, LocalRule> = BTreeMap::new();
        match self {
            RuleField::Constant(_) => Some(&EMPTY),
            RuleField::Asymptotic { exceptions, .. } => Some(exceptions),
            RuleField::Ubs(_) => None,
        }
    }

    pub fn exception_sites(&self) -> Vec<GroupElement> {
        self.exceptions().map(|e| e.keys().cloned().collect()).unwrap_or_default()
    }

    /// The rule `s(g)`.
    pub fn rule_at(&self, g: &GroupElement) -> LocalRule {
        match self {
            RuleField::Constant(b) => b.clone(),
            RuleField::Asymptotic { base, exceptions } => exceptions.get(g).unwrap_or(base).clone(),
            RuleField::Ubs(u) => u.rule_at(g),
        }
    }

    /// Re-expresses every rule over a larger memory.
    pub fn widen(&self, superset: &[GroupElement]) -> Result<Self> {
        let memory = sorted_memory(superset)?;
        if memory[..] == self.memory()[..] {
            return Ok(self.clone());
        }
        Ok(match self {
            RuleField::Constant(b) => RuleField::Constant(b.widen(&memory)?),
            RuleField::Asymptotic { base, exceptions } => RuleField::Asymptotic {
                base: base.widen(&memory)?,
                exceptions: exceptions.iter().map(|(g, r)| Ok((g.clone(), r.widen(&memory)?))).collect::<Result<_>>()?,
            },
            RuleField::Ubs(u) => RuleField::Ubs(u.widen(&memory)?),
        })
    }

    /// Widens the memory to contain `1_G`.
    pub fn padded(&self, group: &GroupModel) -> Result<Self> {
        let id = group.identity();
        if self.memory().binary_search(&id).is_ok() {
            return Ok(self.clone());
        }
        let mut m = self.memory().to_vec();
        m.push(id);
        self.widen(&m)
    }

    /// The constant field equal to the base rule.
    pub fn limit(&self) -> RuleField {
        RuleField::Constant(self.base().clone())
    }

    /// `Some(rule)` when the field is constant on `{ g : lo < |g| <= hi }`.
    /// An empty annulus yields the base rule.
    pub fn constant_on_annulus(&self, group: &GroupModel, lo: usize, hi: usize) -> Result<Option<LocalRule>> {
        match self {
            RuleField::Constant(b) => Ok(Some(b.clone())),
            RuleField::Asymptotic { base, exceptions } => {
                if exceptions.keys().all(|g| {
                    let len = group.word_length(g);
                    len <= lo || len > hi
                }) {
                    return Ok(Some(base.clone()));
                }
                enumerate_annulus(group, lo, hi, base, |g| self.rule_at(g))
            }
            RuleField::Ubs(u) => u.constant_on_annulus(lo, hi),
        }
    }
}

fn enumerate_annulus(
    group: &GroupModel,
    lo: usize,
    hi: usize,
    fallback: &LocalRule,
    mut rule: impl FnMut(&GroupElement) -> LocalRule,
) -> Result<Option<LocalRule>> {
    let outer = group.ball_elements(hi);
    if outer.len() > ANNULUS_CAP {
        return Err(Error::TooLarge { entries: outer.len() as u128, cap: ANNULUS_CAP as u128 });
    }
    let inner = group.ball_elements(lo);
    let mut found: Option<LocalRule> = None;
    for g in outer.iter().filter(|g| inner.binary_search(g).is_err()) {
        let r = rule(g);
        match &found {
            None => found = Some(r),
            Some(f) if *f != r => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(Some(found.unwrap_or_else(|| fallback.clone())))
}

impl UbsField {
    pub fn group(&self) -> &Arc<GroupModel> {
        &self.group
    }

    pub fn charts(&self) -> Option<&[Chart]> {
        match &self.kind {
            UbsKind::Charts(c) => Some(c),
            UbsKind::Composite { .. } => None,
        }
    }

    pub fn rule_at(&self, g: &GroupElement) -> LocalRule {
        match &self.kind {
            UbsKind::Charts(charts) => charts
                .iter()
                .find(|c| c.region.contains(&self.group, g))
                .map(|c| c.rule.clone())
                .unwrap_or_else(|| self.base.clone()),
            UbsKind::Composite { outer, inner, memory } => {
                let t = outer.rule_at(g);
                let s: Vec<LocalRule> = t.memory().iter().map(|n| inner.rule_at(&self.group.mul(g, n))).collect();
                compose_local(&self.group, &t, &s)
                    .and_then(|u| u.widen(memory))
                    .expect("composite table size was checked at construction")
            }
        }
    }

    fn widen(&self, memory: &[GroupElement]) -> Result<Self> {
        let kind = match &self.kind {
            UbsKind::Charts(charts) => UbsKind::Charts(
                charts
                    .iter()
                    .map(|c| Ok(Chart { region: c.region.clone(), rule: c.rule.widen(memory)? }))
                    .collect::<Result<_>>()?,
            ),
            UbsKind::Composite { outer, inner, .. } => UbsKind::Composite {
                outer: outer.clone(),
                inner: inner.clone(),
                memory: memory.to_vec().into(),
            },
        };
        Ok(UbsField { group: self.group.clone(), base: self.base.widen(memory)?, kind })
    }

    fn constant_on_annulus(&self, lo: usize, hi: usize) -> Result<Option<LocalRule>> {
        match &self.kind {
            UbsKind::Charts(_) => enumerate_annulus(&self.group, lo, hi, &self.base, |g| self.rule_at(g)),
            UbsKind::Composite { outer, inner, memory } => {
                // u(g) depends on t(g) and s on gN, which lies within |N| of g
                let reach = outer.memory().iter().map(|n| self.group.word_length(n)).max().unwrap_or(0);
                if lo < reach {
                    return Ok(None);
                }
                let Some(t) = outer.constant_on_annulus(&self.group, lo, hi)? else {
                    return Ok(None);
                };
                let Some(s) = inner.constant_on_annulus(&self.group, lo - reach, hi + reach)? else {
                    return Ok(None);
                };
                let u = compose_local(&self.group, &t, &vec![s; t.memory().len()])?;
                Ok(Some(u.widen(memory)?))
            }
        }
    }

    /// Smallest `R >= e`, at most `cap`, such that the field is constant on
    /// `B(R + e) \ B(R)`, together with that constant rule.
    pub fn singularity_witness(&self, e: usize, cap: usize) -> Result<(usize, LocalRule)> {
        for radius in e..=cap {
            if let Some(rule) = self.constant_on_annulus(radius, radius + e)? {
                return Ok((radius, rule));
            }
        }
        Err(Error::Precondition(format!("no singularity witness for radius {e} up to {cap}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift(g: &GroupModel, by: i64) -> LocalRule {
        LocalRule::projection(Alphabet::binary(), g.int(&[by]))
    }

    #[test]
    fn normalization_drops_base_exceptions() {
        let g = GroupModel::integers();
        let mut ex = BTreeMap::new();
        ex.insert(g.int(&[0]), shift(&g, 1));
        let f = RuleField::asymptotic(shift(&g, 1), ex).unwrap();
        assert!(matches!(f, RuleField::Constant(_)));
    }

    #[test]
    fn exceptions_share_memory() {
        let g = GroupModel::integers();
        let mut ex = BTreeMap::new();
        ex.insert(g.int(&[0]), LocalRule::identity(&g, Alphabet::binary()));
        let f = RuleField::asymptotic(shift(&g, 1), ex).unwrap();
        assert_eq!(f.memory().len(), 2);
        assert!(f.rule_at(&g.int(&[0])).is_projection_to(&g.int(&[0])));
        assert!(f.rule_at(&g.int(&[5])).is_projection_to(&g.int(&[1])));
    }

    #[test]
    fn shells_membership() {
        let g = GroupModel::integers();
        let r = Region::Shells { first: 4, ratio: 2, width: 0 };
        let hits: Vec<i64> = (-20..=20).filter(|&i| r.contains(&g, &g.int(&[i]))).collect();
        assert_eq!(hits, vec![-16, -8, -4, 4, 8, 16]);
    }

    #[test]
    fn witness_on_shells() {
        let g = Arc::new(GroupModel::integers());
        let not = LocalRule::from_fn(Alphabet::binary(), vec![g.int(&[1])], |p| 1 - p[0]).unwrap();
        let f = RuleField::charts(g.clone(), shift(&g, 1), vec![Chart { region: Region::Shells { first: 4, ratio: 2, width: 0 }, rule: not }])
            .unwrap();
        let RuleField::Ubs(u) = &f else { unreachable!() };
        let (r, rule) = u.singularity_witness(2, 100).unwrap();
        assert_eq!(r, 4);
        assert!(rule.is_projection_to(&g.int(&[1])));
        assert!(u.constant_on_annulus(3, 5).unwrap().is_none());
    }
}
