//! Bounded decision procedures and constructions on rule fields.
//!
//! Every procedure runs under explicit caps. `Proven` and `Refuted` are
//! certain; `Unknown` only says the caps were reached.

mod constructions;
mod identity;
mod injectivity;
mod recheck;
mod surjectivity;
mod verdict;

pub use constructions::{localize_ubs, make_inverse_asymptotic, Localization, WITNESS_CAP};
pub use identity::{check_identity, check_identity_on_ball, find_inverse};
pub use injectivity::{
    check_injectivity, check_pre_injectivity, check_stable_injectivity, check_stable_invertibility, orbit_member,
    orbit_members, ENUMERATION_CAP,
};
pub use surjectivity::{check_post_surjectivity, check_surjectivity_window, WindowImage, CORRECTION_CAP};
pub use verdict::{aggregate, Evidence, InverseCertificate, OrbitMember, Status, Verdict, Witness};
