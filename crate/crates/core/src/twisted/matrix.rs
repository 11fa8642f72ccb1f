use rayon::prelude::*;

use super::ring::{Ring, TwistedElement};
use crate::error::{Error, Result};

/// A square matrix over `D^1(k[G])`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedMatrix {
    n: usize,
    entries: Vec<TwistedElement>,
}

impl TwistedMatrix {
    pub fn new(n: usize, entries: Vec<TwistedElement>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::Ring(format!("{} entries do not form a nonempty square matrix of size {n}", entries.len())));
        }
        Ok(TwistedMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<TwistedElement>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Ring("matrix rows differ in length from the row count".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn scalar(a: TwistedElement) -> Self {
        TwistedMatrix { n: 1, entries: vec![a] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &TwistedElement {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[TwistedElement] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[TwistedElement]> {
        self.entries.chunks(self.n)
    }
}

impl Ring {
    pub fn tm_zero(&self, n: usize) -> TwistedMatrix {
        TwistedMatrix { n, entries: vec![TwistedElement::zero(); n * n] }
    }

    pub fn tm_unit(&self, n: usize) -> TwistedMatrix {
        let mut m = self.tm_zero(n);
        for i in 0..n {
            m.entries[i * n + i] = self.one();
        }
        m
    }

    /// `I + c E_ij` for `i != j`; its inverse is `I - c E_ij`.
    pub fn tm_elementary(&self, n: usize, i: usize, j: usize, c: TwistedElement) -> Result<TwistedMatrix> {
        if i == j || i >= n || j >= n {
            return Err(Error::Ring(format!("no elementary matrix at ({i}, {j}) in size {n}")));
        }
        let mut m = self.tm_unit(n);
        m.entries[i * n + j] = c;
        Ok(m)
    }

    /// The diagonal matrix with the given entries.
    pub fn tm_diagonal(&self, diag: Vec<TwistedElement>) -> Result<TwistedMatrix> {
        let n = diag.len();
        let mut m = self.tm_zero(n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        TwistedMatrix::new(n, m.entries)
    }

    fn same_size(a: &TwistedMatrix, b: &TwistedMatrix) -> Result<()> {
        if a.n != b.n {
            return Err(Error::Ring(format!("matrix sizes {} and {} differ", a.n, b.n)));
        }
        Ok(())
    }

    pub fn tm_add(&self, a: &TwistedMatrix, b: &TwistedMatrix) -> Result<TwistedMatrix> {
        Self::same_size(a, b)?;
        let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| self.d1_add(x, y)).collect();
        Ok(TwistedMatrix { n: a.n, entries })
    }

    pub fn tm_mul(&self, a: &TwistedMatrix, b: &TwistedMatrix) -> Result<TwistedMatrix> {
        Self::same_size(a, b)?;
        let n = a.n;
        let entries = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (i, k) = (idx / n, idx % n);
                (0..n).fold(TwistedElement::zero(), |acc, j| self.d1_add(&acc, &self.d1_mul(a.get(i, j), b.get(j, k))))
            })
            .collect();
        Ok(TwistedMatrix { n, entries })
    }

    pub fn is_unit_matrix(&self, a: &TwistedMatrix) -> bool {
        *a == self.tm_unit(a.n)
    }

    /// Largest radius over the entries.
    pub fn tm_radius(&self, a: &TwistedMatrix) -> usize {
        a.entries.iter().map(|e| self.radius(e)).max().unwrap_or(0)
    }
}
