use std::collections::BTreeMap;

use crate::engine::{Config, RuleField};
use crate::group::GroupElement;

/// Outcome of a bounded decision procedure.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    /// The caps the procedure ran under.
    pub caps: BTreeMap<String, u64>,
    /// Counts of checked objects (sites, configurations, pairs, ...).
    pub checked: BTreeMap<String, u64>,
}

#[derive(Clone, Debug)]
pub enum Status {
    Proven(Evidence),
    Refuted(Witness),
    /// The caps were reached without a decision.
    Unknown(String),
}

/// Supporting data for a proof.
#[derive(Clone, Debug)]
pub enum Evidence {
    /// The composed rule is the projection at every listed site and at the
    /// generic site.
    Identity { sites: Vec<GroupElement>, generic: bool },
    Inverse(Box<InverseCertificate>),
    /// Every sampled orbit member was proven.
    Orbit { members: usize },
    /// `inverse` is a two-sided inverse of the field; `matches[i]` is the
    /// index in the inverse's orbit sample of a two-sided inverse of the
    /// `i`-th member of the field's orbit sample.
    StableInverse { inverse: RuleField, matches: Vec<usize> },
    /// Every single-site image modification corrects within `B(radius)`.
    Correction { radius: usize },
}

/// A left inverse `t` with `sigma_t . sigma_s = Id`.
#[derive(Clone, Debug)]
pub struct InverseCertificate {
    pub inverse: RuleField,
    /// Radius of the ball used as the inverse memory.
    pub radius: usize,
    /// Sites where the inverse was constructed individually.
    pub sites: Vec<GroupElement>,
}

/// Which member of an orbit sample a witness refers to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitMember {
    Translate(GroupElement),
    Limit,
}

/// A counterexample that can be re-validated from scratch.
#[derive(Clone, Debug)]
pub enum Witness {
    /// `sigma_t(sigma_s(config))(site) != config(site)`.
    IdentityFailure { site: GroupElement, config: Config },
    /// Distinct configurations with the same image.
    Collision { x: Config, y: Config },
    /// `y` differs from `sigma_s(x)` only at `site`, and its restriction to
    /// `site * B(window)` lies outside the image window, so `y` has no
    /// preimage at all.
    Uncorrectable { x: Config, site: GroupElement, y: Config, window: usize },
    /// The inner witness concerns the given orbit member instead of the
    /// field itself.
    InOrbit { member: OrbitMember, inner: Box<Witness> },
    /// `inverse` is a left inverse but not a right inverse; `failure` is an
    /// identity failure for the field followed by `inverse`.
    LeftInverseOnly { inverse: RuleField, failure: Box<Witness> },
}

impl Verdict {
    pub fn proven(&self) -> bool {
        matches!(self.status, Status::Proven(_))
    }

    pub fn refuted(&self) -> bool {
        matches!(self.status, Status::Refuted(_))
    }

    pub fn unknown(&self) -> bool {
        matches!(self.status, Status::Unknown(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            Status::Refuted(w) => Some(w),
            _ => None,
        }
    }

    pub fn evidence(&self) -> Option<&Evidence> {
        match &self.status {
            Status::Proven(e) => Some(e),
            _ => None,
        }
    }

    pub fn status_name(&self) -> &'static str {
        match self.status {
            Status::Proven(_) => "proven",
            Status::Refuted(_) => "refuted",
            Status::Unknown(_) => "unknown",
        }
    }

    pub(crate) fn new(status: Status) -> Self {
        Verdict { status, caps: BTreeMap::new(), checked: BTreeMap::new() }
    }

    pub(crate) fn cap(mut self, name: &str, value: usize) -> Self {
        self.caps.insert(name.to_string(), value as u64);
        self
    }

    pub(crate) fn count(mut self, name: &str, value: u64) -> Self {
        *self.checked.entry(name.to_string()).or_default() += value;
        self
    }
}

/// Aggregates verdicts: a refutation dominates, then unknown, then proven.
pub fn aggregate(verdicts: impl IntoIterator<Item = Verdict>) -> Option<Verdict> {
    verdicts.into_iter().reduce(|a, b| {
        let rank = |v: &Verdict| match v.status {
            Status::Refuted(_) => 2,
            Status::Unknown(_) => 1,
            Status::Proven(_) => 0,
        };
        let (mut keep, other) = if rank(&b) > rank(&a) { (b, a) } else { (a, b) };
        for (k, v) in other.checked {
            *keep.checked.entry(k).or_default() += v;
        }
        keep
    })
}
