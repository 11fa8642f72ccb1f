use serde::Serialize;

use crate::engine::is_prime;
use crate::error::{Error, Result};

/// The prime field `F_q`. Elements are residues in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Ring(format!("field order {q} is not prime")));
        }
        Ok(PrimeField { q })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Reduces any integer, negative ones included.
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.q as u64) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: u32) -> u32 {
        (self.q - a % self.q) % self.q
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a % self.q == 0 {
            return None;
        }
        let (mut base, mut exp, mut acc) = (a as u64 % self.q as u64, self.q as u64 - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.q as u64;
            }
            base = base * base % self.q as u64;
            exp >>= 1;
        }
        Some(acc as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.neg(0), 0);
        assert_eq!(f.reduce(-1), 6);
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
        assert!(PrimeField::new(9).is_err());
    }
}
