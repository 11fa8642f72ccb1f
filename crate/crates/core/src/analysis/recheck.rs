use super::identity::check_identity;
use super::injectivity::orbit_member;
use super::surjectivity::{check_surjectivity_window, modify};
use super::verdict::Witness;
use crate::engine::{apply, eval_at, Config, RuleField, Symbol};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

fn period(x: &Config) -> u64 {
    match x {
        Config::Finite { .. } => 1,
        Config::Periodic { periods, .. } => periods.iter().copied().fold(1, lcm),
    }
}

/// A finite set of sites on which agreement of `x`, `y` and of their images
/// implies agreement everywhere.
fn deciding_sites(group: &GroupModel, s: &RuleField, x: &Config, y: &Config) -> Result<Vec<GroupElement>> {
    if let Some(all) = group.elements() {
        return Ok(all.to_vec());
    }
    let p = lcm(period(x), period(y));
    if p == 1 {
        return Err(Error::Unsupported("finite configurations compare by description".into()));
    }
    if !group.is_integers() {
        return Err(Error::Unsupported("periodic witnesses are supported on Z only".into()));
    }
    let reach = s.memory().iter().map(|m| group.word_length(m)).max().unwrap_or(0);
    let mut zone = reach;
    for g in x.support().iter().chain(y.support().iter()).chain(s.exception_sites().iter()) {
        zone = zone.max(group.word_length(g) + reach);
    }
    Ok(group.ball_elements(zone + p as usize + reach).to_vec())
}

/// `sigma_t(sigma_s(x))(g)`, evaluated without building either image.
fn compose_at(group: &GroupModel, t: &RuleField, s: &RuleField, x: &Config, g: &GroupElement) -> Symbol {
    t.rule_at(g).eval_with(|n| eval_at(group, s, x, &group.mul(g, n)))
}

impl Witness {
    /// Re-validates the witness from scratch against the engine.
    ///
    /// `s` is the field the verdict was computed for. Identity failures
    /// additionally need the outer field of the composition.
    pub fn recheck(&self, group: &GroupModel, s: &RuleField, outer: Option<&RuleField>) -> Result<bool> {
        match self {
            Witness::IdentityFailure { site, config } => {
                let t = outer.ok_or_else(|| Error::Precondition("identity witnesses need the outer field".into()))?;
                Ok(compose_at(group, t, s, config, site) != config.at(site))
            }
            Witness::Collision { x, y } => {
                if s.is_ubs() {
                    return Err(Error::Unsupported("collisions are rechecked on finite descriptions".into()));
                }
                match deciding_sites(group, s, x, y) {
                    Ok(sites) => {
                        let distinct = sites.iter().any(|g| x.at(g) != y.at(g));
                        let equal = sites.iter().all(|g| eval_at(group, s, x, g) == eval_at(group, s, y, g));
                        Ok(distinct && equal)
                    }
                    Err(Error::Unsupported(_)) => Ok(x != y && apply(group, s, x)? == apply(group, s, y)?),
                    Err(e) => Err(e),
                }
            }
            Witness::Uncorrectable { x, site, y, window } => {
                let s = s.padded(group)?;
                let image = apply(group, &s, x)?;
                let value = y.at(site);
                if value == image.at(site) || modify(&image, site, value) != *y {
                    return Ok(false);
                }
                let sites = group.ball_at(site, *window).elements;
                let img = check_surjectivity_window(group, &s, &sites)?;
                let pattern: Vec<Symbol> = sites.iter().map(|g| y.at(g)).collect();
                Ok(!img.contains(&pattern))
            }
            Witness::InOrbit { member, inner } => {
                let p = orbit_member(group, s, member)?;
                inner.recheck(group, &p, outer)
            }
            Witness::LeftInverseOnly { inverse, failure } => {
                Ok(check_identity(group, inverse, s)?.proven() && failure.recheck(group, inverse, Some(s))?)
            }
        }
    }
}
