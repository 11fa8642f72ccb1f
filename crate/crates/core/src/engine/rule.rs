use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::alphabet::{decode_index, pattern_index, Alphabet, Odometer, Symbol};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupModel};

/// Largest dense table the engine will build.
pub const TABLE_CAP: u128 = 1 << 24;

/// A memory window: a sorted, duplicate-free set of group elements.
pub type Memory = Arc<[GroupElement]>;

/// A local transition map `A^M -> A` stored as a dense table.
///
/// The memory is kept sorted. Table index `i` encodes the pattern whose
/// value at `memory[0]` is the most significant base-`|A|` digit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalRule {
    alphabet: Alphabet,
    memory: Memory,
    table: Arc<[Symbol]>,
}

impl fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let memory: Vec<String> = self.memory.iter().map(|m| m.to_string()).collect();
        let mut s = f.debug_struct("LocalRule");
        s.field("alphabet", &self.alphabet.size()).field("memory", &memory);
        if self.table.len() <= 64 {
            s.field("table", &&self.table[..]);
        } else {
            s.field("table_len", &self.table.len());
        }
        s.finish()
    }
}

pub(crate) fn table_len(alphabet: Alphabet, k: usize) -> Result<usize> {
    match alphabet.pow(k) {
        Some(n) if n <= TABLE_CAP => Ok(n as usize),
        Some(n) => Err(Error::TooLarge { entries: n, cap: TABLE_CAP }),
        None => Err(Error::TooLarge { entries: u128::MAX, cap: TABLE_CAP }),
    }
}

pub(crate) fn sorted_memory(memory: &[GroupElement]) -> Result<Vec<GroupElement>> {
    let set: BTreeSet<&GroupElement> = memory.iter().collect();
    if set.len() != memory.len() {
        return Err(Error::MemoryMismatch("memory contains a repeated element".into()));
    }
    Ok(set.into_iter().cloned().collect())
}

impl LocalRule {
    /// Builds a rule from a table indexed in the order of `memory` as given.
    /// An unsorted memory is sorted and the table permuted accordingly.
    pub fn new(alphabet: Alphabet, memory: Vec<GroupElement>, table: Vec<Symbol>) -> Result<Self> {
        let expected = table_len(alphabet, memory.len())?;
        if table.len() != expected {
            return Err(Error::TableLength { expected, actual: table.len() });
        }
        if let Some(&value) = table.iter().find(|&&v| !alphabet.contains(v)) {
            return Err(Error::TableValue { value, size: alphabet.size() });
        }
        let sorted = sorted_memory(&memory)?;
        if sorted == memory {
            return Ok(LocalRule { alphabet, memory: sorted.into(), table: table.into() });
        }
        // position of each sorted element in the caller's order
        let order: Vec<usize> = sorted.iter().map(|m| memory.iter().position(|x| x == m).expect("same set")).collect();
        let mut given = vec![0; memory.len()];
        let permuted = Self::tabulate(alphabet, sorted.len(), |pattern| {
            for (i, &pos) in order.iter().enumerate() {
                given[pos] = pattern[i];
            }
            table[pattern_index(alphabet.size(), &given)]
        })?;
        Ok(LocalRule { alphabet, memory: sorted.into(), table: permuted.into() })
    }

    /// Builds a rule by evaluating `f` on every pattern. Patterns are
    /// aligned with the sorted memory, see [`LocalRule::memory`].
    pub fn from_fn(alphabet: Alphabet, memory: Vec<GroupElement>, f: impl FnMut(&[Symbol]) -> Symbol) -> Result<Self> {
        let sorted = sorted_memory(&memory)?;
        let table = Self::tabulate(alphabet, sorted.len(), f)?;
        if let Some(&value) = table.iter().find(|&&v| !alphabet.contains(v)) {
            return Err(Error::TableValue { value, size: alphabet.size() });
        }
        Ok(LocalRule { alphabet, memory: sorted.into(), table: table.into() })
    }

    fn tabulate(alphabet: Alphabet, k: usize, mut f: impl FnMut(&[Symbol]) -> Symbol) -> Result<Vec<Symbol>> {
        let len = table_len(alphabet, k)?;
        let mut table = Vec::with_capacity(len);
        let mut odo = Odometer::new(alphabet.size(), k);
        while let Some(p) = odo.next_pattern() {
            table.push(f(p));
        }
        Ok(table)
    }

    /// The rule `x |-> x(m)`.
    pub fn projection(alphabet: Alphabet, m: GroupElement) -> Self {
        let table: Vec<Symbol> = (0..alphabet.size()).collect();
        LocalRule { alphabet, memory: vec![m].into(), table: table.into() }
    }

    /// The identity rule `x |-> x(1_G)`.
    pub fn identity(group: &GroupModel, alphabet: Alphabet) -> Self {
        Self::projection(alphabet, group.identity())
    }

    pub fn constant(alphabet: Alphabet, memory: Vec<GroupElement>, value: Symbol) -> Result<Self> {
        if !alphabet.contains(value) {
            return Err(Error::TableValue { value, size: alphabet.size() });
        }
        Self::from_fn(alphabet, memory, |_| value)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// The sorted memory.
    pub fn memory(&self) -> &Memory {
        &self.memory
    }

    pub fn table(&self) -> &[Symbol] {
        &self.table
    }

    pub fn position(&self, m: &GroupElement) -> Option<usize> {
        self.memory.binary_search(m).ok()
    }

    /// Evaluates on a pattern aligned with the memory.
    pub fn eval(&self, pattern: &[Symbol]) -> Symbol {
        debug_assert_eq!(pattern.len(), self.memory.len());
        self.table[pattern_index(self.alphabet.size(), pattern)]
    }

    pub fn eval_index(&self, index: usize) -> Symbol {
        self.table[index]
    }

    /// Evaluates by reading the value at each memory element from `read`.
    pub fn eval_with(&self, mut read: impl FnMut(&GroupElement) -> Symbol) -> Symbol {
        let base = self.alphabet.size() as usize;
        let idx = self.memory.iter().fold(0usize, |acc, m| acc * base + read(m) as usize);
        self.table[idx]
    }

    /// Same map, re-expressed over a larger memory.
    pub fn widen(&self, superset: &[GroupElement]) -> Result<Self> {
        let sorted = sorted_memory(superset)?;
        if sorted[..] == self.memory[..] {
            return Ok(self.clone());
        }
        let positions: Vec<usize> = self
            .memory
            .iter()
            .map(|m| {
                sorted.binary_search(m).map_err(|_| Error::MemoryMismatch(format!("{m} missing from the widened memory")))
            })
            .collect::<Result<_>>()?;
        let base = self.alphabet.size() as usize;
        let table = Self::tabulate(self.alphabet, sorted.len(), |p| {
            let idx = positions.iter().fold(0usize, |acc, &i| acc * base + p[i] as usize);
            self.table[idx]
        })?;
        Ok(LocalRule { alphabet: self.alphabet, memory: sorted.into(), table: table.into() })
    }

    /// Equality as maps `A^G -> A`, independent of the chosen memories.
    pub fn equivalent(&self, other: &LocalRule) -> bool {
        if self.alphabet != other.alphabet {
            return false;
        }
        if self.memory == other.memory {
            return self.table == other.table;
        }
        let union: Vec<GroupElement> = self.memory.iter().chain(other.memory.iter()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
        match (self.widen(&union), other.widen(&union)) {
            (Ok(a), Ok(b)) => a.table == b.table,
            _ => false,
        }
    }

    /// True when the rule is `x |-> x(m)`.
    pub fn is_projection_to(&self, m: &GroupElement) -> bool {
        let Some(pos) = self.position(m) else {
            return false;
        };
        let mut buf = vec![0; self.memory.len()];
        (0..self.table.len()).all(|i| {
            decode_index(self.alphabet.size(), i, &mut buf);
            self.table[i] == buf[pos]
        })
    }

    /// A pattern (aligned with the memory) on which the rule differs from
    /// the projection to `m`, if one exists. `m` must belong to the memory.
    pub fn projection_mismatch(&self, m: &GroupElement) -> Option<Vec<Symbol>> {
        let pos = self.position(m)?;
        let mut buf = vec![0; self.memory.len()];
        (0..self.table.len()).find_map(|i| {
            decode_index(self.alphabet.size(), i, &mut buf);
            (self.table[i] != buf[pos]).then(|| buf.clone())
        })
    }

    /// Checks that the table is the action of the given coefficient
    /// matrices: `out_i = sum_m sum_j C_m[i][j] z(m)_j` over `F_q`.
    pub fn matches_linear(&self, coefficients: &[Vec<Vec<u32>>]) -> bool {
        let Some((q, n)) = self.alphabet.vector_structure() else {
            return false;
        };
        if coefficients.len() != self.memory.len() {
            return false;
        }
        let mut buf = vec![0; self.memory.len()];
        (0..self.table.len()).all(|i| {
            decode_index(self.alphabet.size(), i, &mut buf);
            self.table[i] == linear_eval(self.alphabet, q, n, coefficients, &buf)
        })
    }
}

pub(crate) fn linear_eval(alphabet: Alphabet, q: u32, n: u32, coefficients: &[Vec<Vec<u32>>], pattern: &[Symbol]) -> Symbol {
    let mut out = vec![0u64; n as usize];
    for (c, &z) in coefficients.iter().zip(pattern) {
        let digits = alphabet.digits(z);
        for (i, row) in c.iter().enumerate() {
            for (j, &cij) in row.iter().enumerate() {
                out[i] += cij as u64 * digits[j] as u64;
            }
        }
    }
    let out: Vec<u32> = out.iter().map(|v| (v % q as u64) as u32).collect();
    alphabet.from_digits(&out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> GroupModel {
        GroupModel::integers()
    }

    #[test]
    fn unsorted_memory_is_permuted() {
        let g = z();
        // out = x(1) AND NOT x(0), table given over memory [1, 0]
        let table = vec![0, 0, 1, 0];
        let rule = LocalRule::new(Alphabet::binary(), vec![g.int(&[1]), g.int(&[0])], table).unwrap();
        assert_eq!(rule.memory()[0], g.int(&[0]));
        assert_eq!(rule.eval(&[0, 1]), 1);
        assert_eq!(rule.eval(&[1, 1]), 0);
        assert_eq!(rule.eval(&[1, 0]), 0);
    }

    #[test]
    fn widen_preserves_map() {
        let g = z();
        let shift = LocalRule::projection(Alphabet::binary(), g.int(&[1]));
        let wide = shift.widen(&[g.int(&[-1]), g.int(&[0]), g.int(&[1])]).unwrap();
        assert!(wide.is_projection_to(&g.int(&[1])));
        assert!(wide.equivalent(&shift));
        assert_ne!(wide, shift);
    }

    #[test]
    fn table_checks() {
        let g = z();
        assert!(matches!(
            LocalRule::new(Alphabet::binary(), vec![g.int(&[0])], vec![0]),
            Err(Error::TableLength { .. })
        ));
        assert!(matches!(
            LocalRule::new(Alphabet::binary(), vec![g.int(&[0])], vec![0, 2]),
            Err(Error::TableValue { .. })
        ));
        let big: Vec<_> = (0..25).map(|i| g.int(&[i])).collect();
        assert!(matches!(LocalRule::constant(Alphabet::binary(), big, 0), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn linear_check() {
        let g = z();
        let a = Alphabet::vector(2, 1).unwrap();
        let xor = LocalRule::from_fn(a, vec![g.int(&[0]), g.int(&[1])], |p| p[0] ^ p[1]).unwrap();
        assert!(xor.matches_linear(&[vec![vec![1]], vec![vec![1]]]));
        assert!(!xor.matches_linear(&[vec![vec![1]], vec![vec![0]]]));
    }
}
