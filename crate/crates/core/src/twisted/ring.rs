use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::field::PrimeField;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// A finitely supported map `G -> F_q`. No stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    terms: BTreeMap<GroupElement, u32>,
}

impl GroupRingElt {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c e_g`.
    pub fn monomial(field: &PrimeField, g: GroupElement, c: i64) -> Self {
        Self::from_terms(field, [(g, c)])
    }

    /// Sums the given terms, reducing coefficients and dropping zeros.
    pub fn from_terms(field: &PrimeField, terms: impl IntoIterator<Item = (GroupElement, i64)>) -> Self {
        let mut out = BTreeMap::new();
        for (g, c) in terms {
            let c = field.reduce(c);
            let e: &mut u32 = out.entry(g).or_default();
            *e = field.add(*e, c);
        }
        out.retain(|_, c| *c != 0);
        GroupRingElt { terms: out }
    }

    pub fn coeff(&self, g: &GroupElement) -> u32 {
        self.terms.get(g).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, u32> {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, field: &PrimeField, g: GroupElement, c: u32) {
        if c == 0 {
            return;
        }
        match self.terms.entry(g) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let sum = field.add(*slot.get(), c);
                if sum == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }
}

/// `beta in (k[G])[G]`: a finitely supported map from sites to group-ring
/// elements. No stored value is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Beta {
    sites: BTreeMap<GroupElement, GroupRingElt>,
}

impl Beta {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_sites(sites: impl IntoIterator<Item = (GroupElement, GroupRingElt)>) -> Self {
        let sites = sites.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Beta { sites }
    }

    pub fn at(&self, g: &GroupElement) -> Option<&GroupRingElt> {
        self.sites.get(g)
    }

    pub fn sites(&self) -> &BTreeMap<GroupElement, GroupRingElt> {
        &self.sites
    }

    pub fn is_zero(&self) -> bool {
        self.sites.is_empty()
    }
}

/// An element `(alpha, beta)` of the twisted ring `D^1(k[G])`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwistedElement {
    pub alpha: GroupRingElt,
    pub beta: Beta,
}

impl TwistedElement {
    pub fn new(alpha: GroupRingElt, beta: Beta) -> Self {
        TwistedElement { alpha, beta }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    /// Every group element read by the action: the support of `alpha` and
    /// of each `beta(g)`.
    pub fn reach(&self) -> impl Iterator<Item = &GroupElement> {
        self.alpha.support().chain(self.beta.sites.values().flat_map(|b| b.support()))
    }
}

/// Arithmetic context: the group and the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    pub group: GroupModel,
    pub field: PrimeField,
}

impl Ring {
    pub fn new(group: GroupModel, field: PrimeField) -> Self {
        Ring { group, field }
    }

    /// Largest word length among the elements an element reads.
    pub fn radius(&self, a: &TwistedElement) -> usize {
        a.reach().map(|g| self.group.word_length(g)).max().unwrap_or(0)
    }

    /// Checks that every element involved belongs to the group.
    pub fn check(&self, a: &TwistedElement) -> Result<()> {
        let sites = a.beta.sites.keys();
        for g in a.reach().chain(sites) {
            if !self.group.contains(g) {
                return Err(Error::Ring(format!("element {g} is not in {}", self.group)));
            }
        }
        Ok(())
    }

    pub fn gr_one(&self) -> GroupRingElt {
        GroupRingElt::monomial(&self.field, self.group.identity(), 1)
    }

    pub fn gr_add(&self, a: &GroupRingElt, b: &GroupRingElt) -> GroupRingElt {
        let mut out = a.clone();
        for (g, &c) in &b.terms {
            out.add_term(&self.field, g.clone(), c);
        }
        out
    }

    pub fn gr_neg(&self, a: &GroupRingElt) -> GroupRingElt {
        let terms = a.terms.iter().map(|(g, &c)| (g.clone(), self.field.neg(c))).collect();
        GroupRingElt { terms }
    }

    /// Convolution: `(a b)(m) = sum_h a(h) b(h^-1 m)`.
    pub fn gr_mul(&self, a: &GroupRingElt, b: &GroupRingElt) -> GroupRingElt {
        let mut out = GroupRingElt::zero();
        for (h, &ca) in &a.terms {
            for (k, &cb) in &b.terms {
                out.add_term(&self.field, self.group.mul(h, k), self.field.mul(ca, cb));
            }
        }
        out
    }

    pub fn beta_add(&self, a: &Beta, b: &Beta) -> Beta {
        let mut sites = a.sites.clone();
        for (g, v) in &b.sites {
            let sum = match sites.get(g) {
                Some(u) => self.gr_add(u, v),
                None => v.clone(),
            };
            sites.insert(g.clone(), sum);
        }
        Beta::from_sites(sites)
    }

    /// `(alpha beta)(g)(h) = sum_t alpha(t) beta(g t)(t^-1 h)`.
    pub fn alpha_beta(&self, alpha: &GroupRingElt, beta: &Beta) -> Beta {
        let mut sites: BTreeMap<GroupElement, GroupRingElt> = BTreeMap::new();
        for (t, &ct) in &alpha.terms {
            let t_inv = self.group.inv(t);
            for (u, bu) in &beta.sites {
                // u = g t
                let g = self.group.mul(u, &t_inv);
                let entry = sites.entry(g).or_default();
                for (k, &ck) in &bu.terms {
                    entry.add_term(&self.field, self.group.mul(t, k), self.field.mul(ct, ck));
                }
            }
        }
        Beta::from_sites(sites)
    }

    /// `(beta alpha)(g) = beta(g) alpha`.
    pub fn beta_alpha(&self, beta: &Beta, alpha: &GroupRingElt) -> Beta {
        Beta::from_sites(beta.sites.iter().map(|(g, b)| (g.clone(), self.gr_mul(b, alpha))))
    }

    /// `(beta gamma)(g)(h) = sum_t beta(g)(t) gamma(g t)(t^-1 h)`.
    pub fn beta_gamma(&self, beta: &Beta, gamma: &Beta) -> Beta {
        let mut sites: BTreeMap<GroupElement, GroupRingElt> = BTreeMap::new();
        for (g, bg) in &beta.sites {
            let mut value = GroupRingElt::zero();
            for (t, &ct) in &bg.terms {
                let Some(c) = gamma.sites.get(&self.group.mul(g, t)) else {
                    continue;
                };
                for (k, &ck) in &c.terms {
                    value.add_term(&self.field, self.group.mul(t, k), self.field.mul(ct, ck));
                }
            }
            sites.insert(g.clone(), value);
        }
        Beta::from_sites(sites)
    }

    /// `(e_1, 0)`.
    pub fn one(&self) -> TwistedElement {
        TwistedElement::new(self.gr_one(), Beta::zero())
    }

    pub fn d1_add(&self, a: &TwistedElement, b: &TwistedElement) -> TwistedElement {
        TwistedElement::new(self.gr_add(&a.alpha, &b.alpha), self.beta_add(&a.beta, &b.beta))
    }

    pub fn d1_neg(&self, a: &TwistedElement) -> TwistedElement {
        let beta = Beta::from_sites(a.beta.sites.iter().map(|(g, b)| (g.clone(), self.gr_neg(b))));
        TwistedElement::new(self.gr_neg(&a.alpha), beta)
    }

    pub fn d1_sub(&self, a: &TwistedElement, b: &TwistedElement) -> TwistedElement {
        self.d1_add(a, &self.d1_neg(b))
    }

    /// `(a1, b1) (a2, b2) = (a1 a2, a1 b2 + b1 a2 + b1 b2)`.
    pub fn d1_mul(&self, a: &TwistedElement, b: &TwistedElement) -> TwistedElement {
        let alpha = self.gr_mul(&a.alpha, &b.alpha);
        let beta = self.beta_add(
            &self.beta_add(&self.alpha_beta(&a.alpha, &b.beta), &self.beta_alpha(&a.beta, &b.alpha)),
            &self.beta_gamma(&a.beta, &b.beta),
        );
        TwistedElement::new(alpha, beta)
    }
}
