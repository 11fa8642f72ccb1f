use std::collections::{BTreeMap, BTreeSet};

use super::matrix::TwistedMatrix;
use super::ring::{Beta, GroupRingElt, Ring, TwistedElement};
use crate::engine::{linear_eval, Alphabet, LocalRule, RuleField};
use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Coefficient matrices `C_m` (one per memory element, `n x n` over `F_q`)
/// of a linear rule on `F_q^n`, checked against the whole table.
pub fn linear_coefficients(rule: &LocalRule) -> Result<Vec<Vec<Vec<u32>>>> {
    let alphabet = rule.alphabet();
    let (_, n) = alphabet
        .vector_structure()
        .ok_or_else(|| Error::NotLinear(format!("alphabet of size {} has no vector structure", alphabet.size())))?;
    let n = n as usize;
    let k = rule.memory().len();
    let mut pattern = vec![0; k];
    let mut coefficients = vec![vec![vec![0u32; n]; n]; k];
    for (p, c) in coefficients.iter_mut().enumerate() {
        for j in 0..n {
            let mut unit = vec![0; n];
            unit[j] = 1;
            pattern[p] = alphabet.from_digits(&unit);
            let out = alphabet.digits(rule.eval(&pattern));
            for (i, row) in c.iter_mut().enumerate() {
                row[j] = out[i];
            }
            pattern[p] = 0;
        }
    }
    if !rule.matches_linear(&coefficients) {
        return Err(Error::NotLinear("table is not the action of its coefficient matrices".into()));
    }
    Ok(coefficients)
}

/// The rule `z |-> sum_m C_m z(m)` over the sorted `memory`.
pub fn linear_rule(alphabet: Alphabet, memory: Vec<GroupElement>, coefficients: &[Vec<Vec<u32>>]) -> Result<LocalRule> {
    let (q, n) = alphabet
        .vector_structure()
        .ok_or_else(|| Error::NotLinear(format!("alphabet of size {} has no vector structure", alphabet.size())))?;
    let sorted: Vec<GroupElement> = memory.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if sorted != memory || coefficients.len() != memory.len() {
        return Err(Error::MemoryMismatch("linear rule needs a sorted memory with one matrix per element".into()));
    }
    let bad = coefficients.iter().flatten().any(|row| row.len() != n as usize || row.iter().any(|&c| c >= q));
    if bad || coefficients.iter().any(|c| c.len() != n as usize) {
        return Err(Error::NotLinear(format!("coefficient matrices must be {n} x {n} over F_{q}")));
    }
    LocalRule::from_fn(alphabet, memory, |p| linear_eval(alphabet, q, n, coefficients, p))
}

/// The linear field `tau_A`:
/// `tau_A(x)(g)_i = sum_j sum_h (A_ij.alpha(h) + A_ij.beta(g)(h)) x(g h)_j`.
///
/// The base rule carries the `alpha` parts; each site in some `beta`
/// support gets an exception.
pub fn to_lnuca(ring: &Ring, a: &TwistedMatrix) -> Result<RuleField> {
    let n = a.size();
    for e in a.entries() {
        ring.check(e)?;
    }
    let q = ring.field.order();
    let alphabet = Alphabet::vector(q, n as u32)?;
    let mut memory: BTreeSet<GroupElement> = a.entries().iter().flat_map(|e| e.reach().cloned()).collect();
    memory.insert(ring.group.identity());
    let memory: Vec<GroupElement> = memory.into_iter().collect();
    let sites: BTreeSet<&GroupElement> = a.entries().iter().flat_map(|e| e.beta.sites().keys()).collect();

    let coefficients = |site: Option<&GroupElement>| -> Vec<Vec<Vec<u32>>> {
        memory
            .iter()
            .map(|m| {
                a.rows()
                    .map(|row| {
                        row.iter()
                            .map(|e| {
                                let b = site.and_then(|g| e.beta.at(g)).map_or(0, |b| b.coeff(m));
                                ring.field.add(e.alpha.coeff(m), b)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    };
    let base = linear_rule(alphabet, memory.clone(), &coefficients(None))?;
    let mut exceptions = BTreeMap::new();
    for g in sites {
        exceptions.insert(g.clone(), linear_rule(alphabet, memory.clone(), &coefficients(Some(g)))?);
    }
    RuleField::asymptotic(base, exceptions)
}

/// Recovers the matrix of a linear field over `F_q^n`, inverting
/// [`to_lnuca`].
pub fn from_lnuca(ring: &Ring, s: &RuleField) -> Result<TwistedMatrix> {
    if s.is_ubs() {
        return Err(Error::Unsupported("only finitely described fields correspond to ring elements".into()));
    }
    let (q, n) = s
        .alphabet()
        .vector_structure()
        .ok_or_else(|| Error::NotLinear(format!("alphabet of size {} has no vector structure", s.alphabet().size())))?;
    if q != ring.field.order() {
        return Err(Error::Ring(format!("field has order {q}, the ring uses {}", ring.field.order())));
    }
    let n = n as usize;
    let memory = s.memory().clone();
    let base = linear_coefficients(s.base())?;
    let mut perturbations = Vec::new();
    for g in s.exception_sites() {
        perturbations.push((g.clone(), linear_coefficients(&s.rule_at(&g))?));
    }
    let field = ring.field;
    let entry = |i: usize, j: usize| -> TwistedElement {
        let alpha = GroupRingElt::from_terms(&field, memory.iter().zip(&base).map(|(m, c)| (m.clone(), c[i][j] as i64)));
        let beta = Beta::from_sites(perturbations.iter().map(|(g, coeffs)| {
            let terms = memory
                .iter()
                .zip(coeffs.iter().zip(&base))
                .map(|(m, (c, b))| (m.clone(), c[i][j] as i64 - b[i][j] as i64));
            (g.clone(), GroupRingElt::from_terms(&field, terms))
        }));
        TwistedElement::new(alpha, beta)
    };
    let entries = (0..n * n).map(|idx| entry(idx / n, idx % n)).collect();
    TwistedMatrix::new(n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupModel;
    use crate::twisted::PrimeField;

    #[test]
    fn xor_round_trip() {
        let ring = Ring::new(GroupModel::integers(), PrimeField::new(2).unwrap());
        let g = &ring.group;
        let alpha = GroupRingElt::from_terms(&ring.field, [(g.int(&[0]), 1), (g.int(&[1]), 1)]);
        let a = TwistedMatrix::scalar(TwistedElement::new(alpha, Beta::zero()));
        let s = to_lnuca(&ring, &a).unwrap();
        assert_eq!(s.base().table(), &[0, 1, 1, 0]);
        assert_eq!(from_lnuca(&ring, &s).unwrap(), a);
    }

    #[test]
    fn nonlinear_rule_is_rejected() {
        let g = GroupModel::integers();
        let alphabet = Alphabet::vector(2, 1).unwrap();
        let and = LocalRule::from_fn(alphabet, vec![g.int(&[0]), g.int(&[1])], |p| p[0] & p[1]).unwrap();
        assert!(matches!(linear_coefficients(&and), Err(Error::NotLinear(_))));
    }
}
