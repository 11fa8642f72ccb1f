//! Alphabets, local rules, rule fields, configurations and the global map.

mod alphabet;
mod config;
mod field;
mod ops;
mod rule;

pub use alphabet::{Alphabet, Symbol};
pub(crate) use alphabet::{decode_index, is_prime, pattern_index};
pub use config::{Config, Pattern};
pub use field::{Chart, Region, RuleField, UbsField};
pub(crate) use ops::all_patterns;
pub use ops::{
    apply, compose, compose_local, eval_at, orbit_sample, translate_config, translate_rule_field, translation_conjugate,
    translation_deconjugate, InducedMap,
};
pub(crate) use rule::{linear_eval, table_len};
pub use rule::{LocalRule, Memory, TABLE_CAP};
