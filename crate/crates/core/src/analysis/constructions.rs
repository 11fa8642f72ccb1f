use std::collections::{BTreeMap, BTreeSet};

use super::identity::{check_identity, check_identity_on_ball};
use super::verdict::Verdict;
use crate::engine::{LocalRule, RuleField};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// Upper radius searched for a singularity witness.
pub const WITNESS_CAP: usize = 4096;

fn symmetric_with_identity(group: &GroupModel, set: &[GroupElement]) -> Vec<GroupElement> {
    let mut out: BTreeSet<GroupElement> = set.iter().cloned().collect();
    out.extend(group.inverse_set(set));
    out.insert(group.identity());
    out.into_iter().collect()
}

/// Truncates a left inverse `r` of an asymptotically constant `s` to an
/// asymptotically constant left inverse.
///
/// `E` must contain every exception site of `s`. With `N` the memory of
/// `r`, symmetrized and padded with `1_G`, the result is `r` on `EN` and
/// `r(g0)` elsewhere, `g0` being the canonical first element outside `EN`.
/// `r` may be any field; for chart-described `r` the precondition is only
/// checked on a ball, while the result is always verified exactly.
pub fn make_inverse_asymptotic(
    group: &GroupModel,
    s: &RuleField,
    r: &RuleField,
    e: &[GroupElement],
) -> Result<RuleField> {
    if s.is_ubs() {
        return Err(Error::Precondition("the field must be asymptotically constant".into()));
    }
    let e_set: BTreeSet<&GroupElement> = e.iter().collect();
    if let Some(g) = s.exception_sites().iter().find(|g| !e_set.contains(g)) {
        return Err(Error::Precondition(format!("exception site {g} lies outside E")));
    }
    let n = symmetric_with_identity(group, r.memory());
    let en = group.product_set(e, &n);
    let excluded: BTreeSet<GroupElement> = en.iter().cloned().collect();
    let g0 = group
        .first_outside(&excluded)
        .ok_or_else(|| Error::Unsupported("no site outside EN in a finite group".into()))?;
    let pre = if r.is_ubs() {
        let radius = en.iter().chain(std::iter::once(&g0)).map(|g| group.word_length(g)).max().unwrap_or(0);
        check_identity_on_ball(group, r, s, radius)?
    } else {
        check_identity(group, r, s)?
    };
    if pre.refuted() {
        return Err(Error::Precondition("r is not a left inverse of s".into()));
    }
    let exceptions: BTreeMap<GroupElement, LocalRule> = en.iter().map(|g| (g.clone(), r.rule_at(g))).collect();
    let t = RuleField::asymptotic(r.rule_at(&g0), exceptions)?;
    if !check_identity(group, &t, s)?.proven() {
        return Err(Error::Consistency("truncated inverse fails the identity check".into()));
    }
    Ok(t)
}

/// Output of [`localize_ubs`].
#[derive(Clone, Debug)]
pub struct Localization {
    pub p: RuleField,
    pub q: RuleField,
    /// Radius of the ball standing in for `E`.
    pub e: usize,
    /// `s` is constant on `B(radius + 3e) \ B(radius)`.
    pub radius: usize,
    /// The constant value of `s` there.
    pub constant: LocalRule,
    /// The site whose `t`-rule is used off `B(radius + e)`.
    pub g0: GroupElement,
    /// `sigma_q . sigma_p = Id`, decided exactly.
    pub identity: Verdict,
}

/// Replaces a pair with `sigma_t . sigma_s = Id` by asymptotically constant
/// fields `p`, `q` that agree with `s`, `t` on `E` and still satisfy
/// `sigma_q . sigma_p = Id`.
///
/// `E` is enlarged to a ball `B(e)` that also contains the common memory.
/// For `R >= 3e` with `s` constant (equal to `c`) on `B(R + 3e) \ B(R)`:
/// `p = s` on `B(R + e)` and `c` elsewhere; `q = t` on `B(R + e)` and
/// `t(g0)` elsewhere, `g0` the canonical first element of
/// `B(R + 2e) \ B(R + e)`. The identity for `(t, s)` is required on
/// `B(R + 2e)`, which is all the construction relies on.
pub fn localize_ubs(group: &GroupModel, s: &RuleField, t: &RuleField, e: &[GroupElement]) -> Result<Localization> {
    if group.is_finite() {
        return Err(Error::Unsupported("localization needs an infinite group".into()));
    }
    if s.alphabet() != t.alphabet() {
        return Err(Error::AlphabetMismatch("localized fields use different alphabets".into()));
    }
    let mut memory: Vec<GroupElement> = s.memory().iter().chain(t.memory().iter()).cloned().collect();
    memory = symmetric_with_identity(group, &memory);
    let s = s.widen(&memory)?;
    let t = t.widen(&memory)?;
    let radius_of = |set: &[GroupElement]| set.iter().map(|g| group.word_length(g)).max().unwrap_or(0);
    let e_radius = radius_of(&memory).max(radius_of(e)).max(1);
    let (radius, constant) = singularity(group, &s, 3 * e_radius)?;
    let pre = check_identity_on_ball(group, &t, &s, radius + 2 * e_radius)?;
    if pre.refuted() {
        return Err(Error::Precondition(format!("t . s is not the identity on B({})", radius + 2 * e_radius)));
    }
    let inner = group.ball_elements(radius + e_radius);
    let excluded: BTreeSet<GroupElement> = inner.iter().cloned().collect();
    let g0 = group.first_outside(&excluded).expect("infinite group");
    let p_exceptions = inner.iter().map(|g| (g.clone(), s.rule_at(g))).collect();
    let q_exceptions = inner.iter().map(|g| (g.clone(), t.rule_at(g))).collect();
    let p = RuleField::asymptotic(constant.clone(), p_exceptions)?;
    let q = RuleField::asymptotic(t.rule_at(&g0), q_exceptions)?;
    let identity = check_identity(group, &q, &p)?;
    let ball = group.ball_elements(e_radius);
    let agrees = |a: &RuleField, b: &RuleField| e.iter().chain(ball.iter()).all(|g| a.rule_at(g) == b.rule_at(g));
    if !agrees(&p, &s) || !agrees(&q, &t) || !identity.proven() {
        return Err(Error::Consistency("localized pair violates its postconditions".into()));
    }
    Ok(Localization { p, q, e: e_radius, radius, constant, g0, identity })
}

/// Smallest `R >= width` with the field constant on `B(R + width) \ B(R)`.
fn singularity(group: &GroupModel, s: &RuleField, width: usize) -> Result<(usize, LocalRule)> {
    match s {
        RuleField::Ubs(u) => u.singularity_witness(width, WITNESS_CAP),
        _ => {
            for radius in width..=WITNESS_CAP {
                if let Some(rule) = s.constant_on_annulus(group, radius, radius + width)? {
                    return Ok((radius, rule));
                }
            }
            Err(Error::Precondition(format!("no constant annulus of width {width} up to radius {WITNESS_CAP}")))
        }
    }
}
