use std::fmt;

use serde::{Serialize, Serializer};

/// One coordinate of a normal form. A direct-product element carries one
/// coordinate per factor of its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    /// A coordinate of a free-abelian factor.
    Int(i64),
    /// A residue in `0..n` for a finite cyclic factor.
    Residue(u64),
    /// A freely reduced word. Letter `i` (1-based) is encoded as `i`, its
    /// inverse as `-i`.
    Word(Vec<i32>),
}

/// A group element in canonical normal form.
///
/// Equality and ordering are structural; the derived order is the canonical
/// (lexicographic) order used for every enumeration in the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub(crate) Vec<Coord>);

impl GroupElement {
    pub fn coords(&self) -> &[Coord] {
        &self.0
    }

    /// The integer coordinates when every factor is free abelian.
    pub fn as_ints(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| match c {
                Coord::Int(v) => Some(*v),
                _ => None,
            })
            .collect()
    }
}

pub(crate) fn letter_char(letter: i32) -> char {
    let base = if letter > 0 { b'a' } else { b'A' };
    (base + (letter.unsigned_abs() - 1) as u8) as char
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match c {
                Coord::Int(v) => write!(f, "{v}")?,
                Coord::Residue(r) => write!(f, "{r}")?,
                Coord::Word(w) if w.is_empty() => f.write_str("1")?,
                Coord::Word(w) => {
                    for &l in w {
                        write!(f, "{}", letter_char(l))?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
