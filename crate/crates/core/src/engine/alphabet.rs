use serde::Serialize;

use crate::error::{Error, Result};

/// A symbol of a finite alphabet, in `0..size`.
pub type Symbol = u32;

/// A finite alphabet, optionally carrying the structure of `F_q^n`.
///
/// Vector symbols are encoded in base `q` with component 0 as the least
/// significant digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet {
    size: u32,
    vector: Option<(u32, u32)>,
}

impl Alphabet {
    pub fn new(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::Alphabet("size must be at least 1".into()));
        }
        Ok(Alphabet { size, vector: None })
    }

    /// The alphabet `F_q^n` for a prime `q`.
    pub fn vector(q: u32, n: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Alphabet(format!("field order {q} is not prime")));
        }
        if n == 0 {
            return Err(Error::Alphabet("dimension must be positive".into()));
        }
        let size = (q as u64).checked_pow(n).filter(|s| *s <= u32::MAX as u64);
        let size = size.ok_or_else(|| Error::Alphabet(format!("{q}^{n} does not fit in a symbol")))?;
        Ok(Alphabet { size: size as u32, vector: Some((q, n)) })
    }

    pub fn binary() -> Self {
        Alphabet { size: 2, vector: None }
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// `(q, n)` when the alphabet is `F_q^n`.
    pub fn vector_structure(&self) -> Option<(u32, u32)> {
        self.vector
    }

    pub fn contains(&self, a: Symbol) -> bool {
        a < self.size
    }

    /// Components of a vector symbol.
    pub fn digits(&self, a: Symbol) -> Vec<u32> {
        let (q, n) = self.vector.unwrap_or((self.size, 1));
        let mut out = Vec::with_capacity(n as usize);
        let mut v = a;
        for _ in 0..n {
            out.push(v % q);
            v /= q;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> Symbol {
        let (q, _) = self.vector.unwrap_or((self.size, 1));
        digits.iter().rev().fold(0, |acc, d| acc * q + d)
    }

    /// `|A|^k`, or `None` on overflow.
    pub fn pow(&self, k: usize) -> Option<u128> {
        (self.size as u128).checked_pow(u32::try_from(k).ok()?)
    }
}

pub(crate) fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Mixed-radix odometer over `A^k` in canonical (big-endian) index order.
pub(crate) struct Odometer {
    base: u32,
    digits: Vec<Symbol>,
    started: bool,
}

impl Odometer {
    pub(crate) fn new(base: u32, len: usize) -> Self {
        Odometer { base, digits: vec![0; len], started: false }
    }

    /// Advances to the next pattern; `None` once exhausted.
    pub(crate) fn next_pattern(&mut self) -> Option<&[Symbol]> {
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.base {
                return Some(&self.digits);
            }
            self.digits[i] = 0;
        }
        None
    }
}

/// Big-endian index of a pattern: the first entry is the most significant.
pub(crate) fn pattern_index(base: u32, pattern: &[Symbol]) -> usize {
    pattern.iter().fold(0usize, |acc, &a| acc * base as usize + a as usize)
}

pub(crate) fn decode_index(base: u32, mut index: usize, out: &mut [Symbol]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % base as usize) as Symbol;
        index /= base as usize;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_digits_round_trip() {
        let a = Alphabet::vector(3, 2).unwrap();
        assert_eq!(a.size(), 9);
        assert_eq!(a.digits(7), vec![1, 2]);
        assert_eq!(a.from_digits(&[1, 2]), 7);
        assert!(Alphabet::vector(4, 2).is_err());
        assert!(Alphabet::new(0).is_err());
    }

    #[test]
    fn odometer_is_index_order() {
        let mut odo = Odometer::new(3, 2);
        let mut i = 0;
        let mut buf = [0; 2];
        while let Some(p) = odo.next_pattern() {
            assert_eq!(pattern_index(3, p), i);
            decode_index(3, i, &mut buf);
            assert_eq!(&buf, p);
            i += 1;
        }
        assert_eq!(i, 9);
    }
}
