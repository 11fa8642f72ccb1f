//! Non-uniform cellular automata over finitely generated groups.
//!
//! Rule fields assign a local rule to every group element. The crate
//! evaluates the induced global maps on finitely described configurations,
//! runs bounded searches for inverses and counterexamples, lifts rule
//! fields to finite labeled graphs that approximate the group, and models
//! linear rule fields as matrices over a twisted group ring.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod group;
pub mod io;
pub mod sofic;
pub mod twisted;

pub use error::{Error, Result};
