//! Finite labeled graphs approximating a group, and rule fields lifted to them.
//!
//! A vertex is interior at radius `r` when its `r`-ball is labeled
//! isomorphic to the Cayley ball `B(r)`. Lifted maps place the field's rules
//! on the graph through these isomorphisms, around the centers of a packing.

mod build;
mod counting;
mod graph;
mod interior;
mod lift;
mod pack;

pub use build::{build_cycle, build_quotient, build_torus};
pub use counting::{count_image, counting_experiment, CountingReport, Inequality, Target, BLOCK_CAP, IMAGE_INPUT_CAP};
pub use graph::LabeledGraph;
pub use interior::{interior, BallIso, InteriorSet};
pub use lift::{verify_claim, verify_claim_local, ClaimMode, ClaimReport, LiftedMap, SoficSetup, EXHAUSTIVE_CAP, SAMPLE_SIZE};
pub use pack::{pack, PackingCover};
