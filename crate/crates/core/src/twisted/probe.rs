use serde::Serialize;

use super::action::to_lnuca;
use super::matrix::TwistedMatrix;
use super::ring::Ring;
use crate::analysis::{check_identity, Verdict};
use crate::error::{Error, Result};

/// Both routes to `BA = 1` for a pair with `AB = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct FinitenessReport {
    pub size: usize,
    /// `BA = 1` by ring arithmetic.
    pub ring_route: bool,
    /// `tau_A . tau_B = Id`, which `AB = 1` forces.
    pub nuca_forward: bool,
    /// `tau_B . tau_A = Id`.
    pub nuca_backward: bool,
    /// Sites examined by the two identity checks.
    pub sites_checked: u64,
    #[serde(skip)]
    pub backward: Option<Verdict>,
}

impl FinitenessReport {
    pub fn agree(&self) -> bool {
        self.ring_route == self.nuca_backward
    }
}

/// Checks `AB = 1`, then decides `BA = 1` in the ring and through the
/// linear fields. Any disagreement between the routes is a consistency
/// error.
pub fn stable_finiteness_probe(ring: &Ring, a: &TwistedMatrix, b: &TwistedMatrix) -> Result<FinitenessReport> {
    if !ring.is_unit_matrix(&ring.tm_mul(a, b)?) {
        return Err(Error::Precondition("AB is not the unit matrix".into()));
    }
    let ring_route = ring.is_unit_matrix(&ring.tm_mul(b, a)?);
    let tau_a = to_lnuca(ring, a)?;
    let tau_b = to_lnuca(ring, b)?;
    let forward = check_identity(&ring.group, &tau_a, &tau_b)?;
    let backward = check_identity(&ring.group, &tau_b, &tau_a)?;
    let sites_checked = forward.checked.get("sites").copied().unwrap_or(0) + backward.checked.get("sites").copied().unwrap_or(0);
    if !forward.proven() {
        return Err(Error::Consistency("AB = 1 in the ring but tau_A . tau_B is not the identity".into()));
    }
    let report = FinitenessReport {
        size: a.size(),
        ring_route,
        nuca_forward: true,
        nuca_backward: backward.proven(),
        sites_checked,
        backward: Some(backward),
    };
    if !report.agree() {
        return Err(Error::Consistency(format!(
            "BA = 1 is {} in the ring but {} for the linear fields",
            report.ring_route, report.nuca_backward
        )));
    }
    Ok(report)
}
