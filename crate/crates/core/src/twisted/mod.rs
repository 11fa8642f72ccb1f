//! The group ring `k[G]`, the twisted ring `D^1(k[G])`, matrices over it
//! and their action as linear fields on `(k^n)^G`.

mod action;
mod field;
mod matrix;
mod probe;
mod ring;

pub use action::{from_lnuca, linear_coefficients, linear_rule, to_lnuca};
pub use field::PrimeField;
pub use matrix::TwistedMatrix;
pub use probe::{stable_finiteness_probe, FinitenessReport};
pub use ring::{Beta, GroupRingElt, Ring, TwistedElement};
