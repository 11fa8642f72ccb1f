use std::collections::{BTreeMap, BTreeSet};

use super::verdict::{Evidence, InverseCertificate, Status, Verdict, Witness};
use crate::engine::{compose, compose_local, decode_index, table_len, Config, LocalRule, RuleField, Symbol};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

fn require_finite_description(field: &RuleField, what: &str) -> Result<()> {
    if field.is_ubs() {
        return Err(Error::Unsupported(format!("{what} needs a constant or asymptotically constant field; localize first")));
    }
    Ok(())
}

/// A configuration carrying `pattern` (aligned with `domain`) at `site *
/// domain` on background 0.
pub(crate) fn place(group: &GroupModel, site: &GroupElement, domain: &[GroupElement], pattern: &[Symbol]) -> Config {
    Config::finite(0, domain.iter().zip(pattern).map(|(k, &v)| (group.mul(site, k), v)))
}

/// Decides `sigma_t . sigma_s = Id` exactly for finitely described fields.
///
/// The composite is computed at every site where it may deviate from its
/// base and compared with the projection `z |-> z(1_G)`; one more check
/// covers all remaining sites.
pub fn check_identity(group: &GroupModel, t: &RuleField, s: &RuleField) -> Result<Verdict> {
    if t.alphabet() != s.alphabet() {
        return Err(Error::AlphabetMismatch("identity check across different alphabets".into()));
    }
    require_finite_description(t, "exact identity check")?;
    require_finite_description(s, "exact identity check")?;
    let t = t.padded(group)?;
    let s = s.padded(group)?;
    let u = compose(group, &t, &s)?;
    let id = group.identity();
    let exceptions = u.exceptions().expect("finite description").clone();
    let excluded: BTreeSet<GroupElement> = exceptions.keys().cloned().collect();
    let generic = group.first_outside(&excluded);
    let sites: Vec<GroupElement> = exceptions.keys().cloned().collect();
    let checked = sites.len() as u64 + generic.is_some() as u64;
    let mut candidates: Vec<(GroupElement, &LocalRule)> = exceptions.iter().map(|(g, r)| (g.clone(), r)).collect();
    if let Some(g) = &generic {
        candidates.push((g.clone(), u.base()));
    }
    for (g, rule) in candidates {
        if let Some(z) = rule.projection_mismatch(&id) {
            let config = place(group, &g, rule.memory(), &z);
            return Ok(Verdict::new(Status::Refuted(Witness::IdentityFailure { site: g, config }))
                .count("sites", checked));
        }
    }
    Ok(Verdict::new(Status::Proven(Evidence::Identity { sites, generic: generic.is_some() })).count("sites", checked))
}

/// Checks the projection condition at every site of `B(radius)`, for any
/// kind of field. Never proves the identity; a clean pass is `Unknown`.
pub fn check_identity_on_ball(group: &GroupModel, t: &RuleField, s: &RuleField, radius: usize) -> Result<Verdict> {
    if t.alphabet() != s.alphabet() {
        return Err(Error::AlphabetMismatch("identity check across different alphabets".into()));
    }
    let t = t.padded(group)?;
    let s = s.padded(group)?;
    let id = group.identity();
    let ball = group.ball_elements(radius);
    for g in ball.iter() {
        let outer = t.rule_at(g);
        let inner: Vec<LocalRule> = outer.memory().iter().map(|n| s.rule_at(&group.mul(g, n))).collect();
        let rule = compose_local(group, &outer, &inner)?;
        if let Some(z) = rule.projection_mismatch(&id) {
            let config = place(group, g, rule.memory(), &z);
            return Ok(Verdict::new(Status::Refuted(Witness::IdentityFailure { site: g.clone(), config }))
                .cap("radius", radius)
                .count("sites", ball.len() as u64));
        }
    }
    Ok(Verdict::new(Status::Unknown(format!("projection condition holds on B({radius}) only")))
        .cap("radius", radius)
        .count("sites", ball.len() as u64))
}

/// Builds `t(g)` on memory `N` from the rules of `s` on `gN`, so that
/// `t(g)(F_g(z)) = z(1_G)`. `None` when `F_g` merges patterns with
/// different centers. Off-image entries are 0.
fn site_inverse(group: &GroupModel, n_mem: &[GroupElement], s_rules: &[LocalRule]) -> Result<Option<LocalRule>> {
    let alphabet = s_rules[0].alphabet();
    let m_mem = s_rules[0].memory().clone();
    let nm = group.product_set(n_mem, &m_mem);
    let Some(center) = nm.iter().position(|g| *g == group.identity()) else {
        return Err(Error::MemoryMismatch("inverse memory must contain the identity".into()));
    };
    let taps: Vec<Vec<usize>> = n_mem
        .iter()
        .map(|n| m_mem.iter().map(|m| nm.binary_search(&group.mul(n, m)).expect("nm in NM")).collect())
        .collect();
    let size = alphabet.size() as usize;
    let total = table_len(alphabet, nm.len())?;
    let mut table: Vec<Option<Symbol>> = vec![None; table_len(alphabet, n_mem.len())?];
    let mut z = vec![0; nm.len()];
    for idx in 0..total {
        decode_index(alphabet.size(), idx, &mut z);
        let y = s_rules.iter().zip(&taps).fold(0usize, |acc, (rule, tap)| {
            let i = tap.iter().fold(0usize, |a, &p| a * size + z[p] as usize);
            acc * size + rule.eval_index(i) as usize
        });
        match table[y] {
            None => table[y] = Some(z[center]),
            Some(v) if v == z[center] => {}
            Some(_) => return Ok(None),
        }
    }
    let table = table.into_iter().map(|v| v.unwrap_or(0)).collect();
    Ok(Some(LocalRule::new(alphabet, n_mem.to_vec(), table)?))
}

/// Searches for a left inverse with memory `B(k)` for `k = 0..=n_cap`.
///
/// Absence only means no inverse was found within the cap.
pub fn find_inverse(group: &GroupModel, s: &RuleField, n_cap: usize) -> Result<Option<InverseCertificate>> {
    require_finite_description(s, "inverse synthesis")?;
    let s = s.padded(group)?;
    let exc = s.exception_sites();
    for k in 0..=n_cap {
        let n_mem = group.ball_elements(k).to_vec();
        let inverse_n = group.inverse_set(&n_mem);
        let sites = group.product_set(&exc, &inverse_n);
        let excluded: BTreeSet<GroupElement> = sites.iter().cloned().collect();
        let attempt = (|| -> Result<Option<RuleField>> {
            let rules_at = |g: &GroupElement| -> Vec<LocalRule> { n_mem.iter().map(|n| s.rule_at(&group.mul(g, n))).collect() };
            let base = match group.first_outside(&excluded) {
                Some(g) => site_inverse(group, &n_mem, &rules_at(&g))?,
                None => match sites.first() {
                    Some(g) => site_inverse(group, &n_mem, &rules_at(g))?,
                    None => return Ok(None),
                },
            };
            let Some(base) = base else { return Ok(None) };
            let mut exceptions = BTreeMap::new();
            for g in &sites {
                let Some(rule) = site_inverse(group, &n_mem, &rules_at(g))? else {
                    return Ok(None);
                };
                exceptions.insert(g.clone(), rule);
            }
            Ok(Some(RuleField::asymptotic(base, exceptions)?))
        })();
        let candidate = match attempt {
            Ok(Some(t)) => t,
            Ok(None) => continue,
            Err(Error::TooLarge { entries, cap }) => {
                log::info!("inverse search stopped at radius {k}: {entries} patterns exceed {cap}");
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        let verdict = check_identity(group, &candidate, &s)?;
        if !verdict.proven() {
            return Err(Error::Consistency("constructed inverse fails the identity check".into()));
        }
        return Ok(Some(InverseCertificate { inverse: candidate, radius: k, sites }));
    }
    Ok(None)
}
