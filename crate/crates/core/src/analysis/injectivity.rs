use std::collections::{BTreeMap, HashMap};

use super::identity::{check_identity, find_inverse};
use super::verdict::{Evidence, OrbitMember, Status, Verdict, Witness};
use crate::engine::{all_patterns, apply, eval_at, translate_rule_field, Config, RuleField, Symbol};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// Largest number of configurations a refutation search enumerates.
pub const ENUMERATION_CAP: u128 = 1 << 22;

/// Canonical description of an image, comparable across families.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ImageKey {
    /// Infinite groups: the normalized finite description.
    Finite(Config),
    /// Finite groups: the value at every element.
    Values(Vec<Symbol>),
    /// On `Z`: a periodic tail (minimal period at least 2) modified at the
    /// exception sites.
    Periodic { tail: Config, modified: BTreeMap<GroupElement, Symbol> },
}

fn finite_key(group: &GroupModel, image: Config) -> ImageKey {
    match group.elements() {
        Some(all) => ImageKey::Values(all.iter().map(|g| image.at(g)).collect()),
        None => ImageKey::Finite(image),
    }
}

fn distinct(group: &GroupModel, x: &Config, y: &Config) -> bool {
    match group.elements() {
        Some(all) => all.iter().any(|g| x.at(g) != y.at(g)),
        None => x != y,
    }
}

/// The image of a periodic configuration on `Z` under an asymptotically
/// constant field: the constant-rule image modified at exception sites.
fn periodic_key(group: &GroupModel, s: &RuleField, x: &Config) -> Result<ImageKey> {
    let tail = apply(group, &s.limit(), x)?;
    let mut modified = BTreeMap::new();
    for g in s.exception_sites() {
        let v = eval_at(group, s, x, &g);
        if v != tail.at(&g) {
            modified.insert(g, v);
        }
    }
    Ok(match tail {
        Config::Finite { background, .. } => ImageKey::Finite(Config::finite(background, modified)),
        tail => ImageKey::Periodic { tail, modified },
    })
}

/// Largest radius `<= cap` whose pattern count times `factor` stays within
/// the enumeration cap.
fn feasible_radius(group: &GroupModel, size: u32, cap: usize, factor: u128) -> Option<usize> {
    (0..=cap).rev().find(|&r| {
        let cells = group.ball_elements(r).len();
        (size as u128).checked_pow(cells as u32).and_then(|n| n.checked_mul(factor)).is_some_and(|n| n <= ENUMERATION_CAP)
    })
}

/// Finitely supported configurations on every background, with support in
/// `B(radius)`.
fn finite_family(group: &GroupModel, size: u32, radius: usize, background: Symbol) -> impl Iterator<Item = Config> + '_ {
    let ball = group.ball_elements(radius);
    all_patterns(size, ball.len()).map(move |p| Config::finite(background, ball.iter().cloned().zip(p)))
}

fn collision_search(group: &GroupModel, s: &RuleField, window_cap: usize, same_background: bool) -> Result<(Option<Witness>, u64, usize)> {
    let size = s.alphabet().size();
    let factor = if same_background { 1 } else { size as u128 };
    let Some(radius) = feasible_radius(group, size, window_cap, factor) else {
        return Ok((None, 0, 0));
    };
    let mut checked = 0u64;
    let mut seen: HashMap<ImageKey, Config> = HashMap::new();
    for b in 0..size {
        if same_background {
            seen.clear();
        }
        for x in finite_family(group, size, radius, b) {
            checked += 1;
            let key = finite_key(group, apply(group, s, &x)?);
            if let Some(y) = seen.get(&key) {
                if distinct(group, y, &x) {
                    return Ok((Some(Witness::Collision { x: y.clone(), y: x }), checked, radius));
                }
            } else {
                seen.insert(key, x);
            }
        }
    }
    if !same_background && group.is_integers() {
        for period in 2..=window_cap.max(1) {
            if (size as u128).pow(period as u32) > ENUMERATION_CAP {
                break;
            }
            for values in all_patterns(size, period) {
                let x = Config::periodic(vec![period as u64], values)?;
                // lower periods and constants were already covered
                if !matches!(&x, Config::Periodic { periods, .. } if periods[0] == period as u64) {
                    continue;
                }
                checked += 1;
                let key = periodic_key(group, s, &x)?;
                if let Some(y) = seen.get(&key) {
                    if distinct(group, y, &x) {
                        return Ok((Some(Witness::Collision { x: y.clone(), y: x }), checked, radius));
                    }
                } else {
                    seen.insert(key, x);
                }
            }
        }
    }
    Ok((None, checked, radius))
}

/// Bounded injectivity check.
///
/// Proven when a left inverse with memory within `B(n_cap)` exists.
/// Refuted when two distinct configurations collide: finitely supported
/// ones on `B(window_cap)` over every background, and on `Z` periodic ones
/// with period at most `window_cap`.
pub fn check_injectivity(group: &GroupModel, s: &RuleField, window_cap: usize, n_cap: usize) -> Result<Verdict> {
    if let Some(cert) = find_inverse(group, s, n_cap)? {
        return Ok(Verdict::new(Status::Proven(Evidence::Inverse(Box::new(cert))))
            .cap("window_cap", window_cap)
            .cap("n_cap", n_cap));
    }
    let (witness, checked, radius) = collision_search(group, s, window_cap, false)?;
    let status = match witness {
        Some(w) => Status::Refuted(w),
        None => Status::Unknown(format!("no inverse with memory in B({n_cap}) and no collision up to radius {radius}")),
    };
    Ok(Verdict::new(status)
        .cap("window_cap", window_cap)
        .cap("n_cap", n_cap)
        .cap("window_used", radius)
        .count("configs", checked))
}

/// The field's orbit sample with member labels, see
/// [`crate::engine::orbit_sample`].
pub fn orbit_members(group: &GroupModel, s: &RuleField, rho: usize) -> Result<Vec<(OrbitMember, RuleField)>> {
    if s.is_ubs() {
        return Err(Error::Unsupported("orbit sampling of chart-described fields".into()));
    }
    let mut out: Vec<(OrbitMember, RuleField)> = vec![(OrbitMember::Translate(group.identity()), s.clone())];
    if matches!(s, RuleField::Constant(_)) {
        return Ok(out);
    }
    for g in group.ball_elements(rho).iter() {
        let t = translate_rule_field(group, g, s)?;
        if !out.iter().any(|(_, f)| *f == t) {
            out.push((OrbitMember::Translate(g.clone()), t));
        }
    }
    let limit = s.limit();
    if !out.iter().any(|(_, f)| *f == limit) {
        out.push((OrbitMember::Limit, limit));
    }
    Ok(out)
}

/// Resolves an orbit member label against the field.
pub fn orbit_member(group: &GroupModel, s: &RuleField, member: &OrbitMember) -> Result<RuleField> {
    match member {
        OrbitMember::Translate(g) => translate_rule_field(group, g, s),
        OrbitMember::Limit => Ok(s.limit()),
    }
}

/// Injectivity of every member of the orbit sample over `B(rho)`, each
/// searched with window `rho`.
pub fn check_stable_injectivity(group: &GroupModel, s: &RuleField, rho: usize, n_cap: usize) -> Result<Verdict> {
    let members = orbit_members(group, s, rho)?;
    let mut unknown = None;
    let mut checked = 0;
    for (member, p) in members.iter() {
        let v = check_injectivity(group, p, rho, n_cap)?;
        checked += v.checked.get("configs").copied().unwrap_or(0);
        match v.status {
            Status::Refuted(w) => {
                return Ok(Verdict::new(Status::Refuted(Witness::InOrbit { member: member.clone(), inner: Box::new(w) }))
                    .cap("rho", rho)
                    .cap("n_cap", n_cap)
                    .count("configs", checked));
            }
            Status::Unknown(reason) if unknown.is_none() => unknown = Some(reason),
            _ => {}
        }
    }
    let status = match unknown {
        Some(reason) => Status::Unknown(reason),
        None => Status::Proven(Evidence::Orbit { members: members.len() }),
    };
    Ok(Verdict::new(status).cap("rho", rho).cap("n_cap", n_cap).count("members", members.len() as u64).count("configs", checked))
}

/// Stable invertibility: a two-sided inverse of the field, and for every
/// orbit member a two-sided inverse among the inverse's orbit members.
pub fn check_stable_invertibility(group: &GroupModel, s: &RuleField, rho: usize, n_cap: usize) -> Result<Verdict> {
    let tag = |v: Verdict| v.cap("rho", rho).cap("n_cap", n_cap);
    let Some(cert) = find_inverse(group, s, n_cap)? else {
        let inj = check_stable_injectivity(group, s, rho, n_cap)?;
        let status = match inj.status {
            Status::Refuted(w) => Status::Refuted(w),
            _ => Status::Unknown(format!("no left inverse with memory in B({n_cap})")),
        };
        return Ok(tag(Verdict::new(status)));
    };
    let t = cert.inverse;
    if let Status::Refuted(failure) = check_identity(group, s, &t)?.status {
        return Ok(tag(Verdict::new(Status::Refuted(Witness::LeftInverseOnly { inverse: t, failure: Box::new(failure) }))));
    }
    let own = orbit_members(group, s, rho)?;
    let theirs = orbit_members(group, &t, rho)?;
    let mut matches = Vec::with_capacity(own.len());
    let mut pairs = 0u64;
    for (member, p) in &own {
        // the matching translate is the natural first candidate
        let mut order: Vec<usize> = (0..theirs.len()).collect();
        if let Some(i) = theirs.iter().position(|(m, _)| m == member) {
            order.retain(|&j| j != i);
            order.insert(0, i);
        }
        let mut found = None;
        for j in order {
            pairs += 1;
            let q = &theirs[j].1;
            if check_identity(group, q, p)?.proven() && check_identity(group, p, q)?.proven() {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => matches.push(j),
            None => {
                return Ok(tag(Verdict::new(Status::Unknown(format!("no inverse in the sampled orbit for member {member:?}")))
                    .count("pairs", pairs)));
            }
        }
    }
    Ok(tag(Verdict::new(Status::Proven(Evidence::StableInverse { inverse: t, matches }))
        .count("members", own.len() as u64)
        .count("pairs", pairs)))
}

/// Searches for an asymptotic pair with equal images: two configurations on
/// the same background with supports in `B(support_cap)`. Never proves
/// pre-injectivity.
pub fn check_pre_injectivity(group: &GroupModel, s: &RuleField, support_cap: usize) -> Result<Verdict> {
    if s.is_ubs() {
        return Err(Error::Unsupported("pre-injectivity search needs a finite description".into()));
    }
    let (witness, checked, radius) = collision_search(group, s, support_cap, true)?;
    let status = match witness {
        Some(w) => Status::Refuted(w),
        None => Status::Unknown(format!("no asymptotic collision with support in B({radius})")),
    };
    Ok(Verdict::new(status).cap("support_cap", support_cap).cap("support_used", radius).count("configs", checked).count(
        "collisions",
        0,
    ))
}
