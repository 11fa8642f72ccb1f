mod common;

use common::ring::*;
use common::*;
use nuca::analysis::check_identity;
use nuca::engine::{apply, compose, Alphabet, LocalRule, RuleField};
use nuca::group::GroupModel;
use nuca::twisted::*;
use nuca::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring(q: u32) -> Ring {
    Ring::new(GroupModel::integers(), PrimeField::new(q).unwrap())
}

fn gr(ring: &Ring, terms: &[(i64, i64)]) -> GroupRingElt {
    GroupRingElt::from_terms(&ring.field, terms.iter().map(|&(g, c)| (ring.group.int(&[g]), c)))
}

#[test]
fn group_ring_products() {
    let r = ring(2);
    let a = gr(&r, &[(0, 1), (1, 1), (-2, 1)]);
    assert_eq!(r.gr_mul(&r.gr_one(), &a), a);
    assert_eq!(r.gr_mul(&a, &r.gr_one()), a);
    assert_eq!(r.gr_mul(&gr(&r, &[(0, 1), (1, 1)]), &gr(&r, &[(0, 1), (1, 1)])), gr(&r, &[(0, 1), (2, 1)]));
    let b = gr(&r, &[(3, 1), (-1, 1)]);
    assert_eq!(r.gr_mul(&a, &b), r.gr_mul(&b, &a));

    let free = Ring::new(GroupModel::free(2).unwrap(), PrimeField::new(2).unwrap());
    let x = GroupRingElt::monomial(&free.field, free.group.parse_element("a").unwrap(), 1);
    let y = GroupRingElt::monomial(&free.field, free.group.parse_element("b").unwrap(), 1);
    assert_ne!(free.gr_mul(&x, &y), free.gr_mul(&y, &x));
}

#[test]
fn twisted_products_match_literal_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [2, 3] {
        let r = ring(q);
        for _ in 0..20 {
            let alpha = gr_elt(&r, &mut rng, 2);
            let b = element(&r, &mut rng, 2, 3).beta;
            let c = element(&r, &mut rng, 2, 3).beta;
            let ab = r.alpha_beta(&alpha, &b);
            let bc = r.beta_gamma(&b, &c);
            let ba = r.beta_alpha(&b, &alpha);
            for g in -5..=5 {
                let g = r.group.int(&[g]);
                for h in -5..=5 {
                    let h = r.group.int(&[h]);
                    let got = ab.at(&g).map_or(0, |v| v.coeff(&h));
                    assert_eq!(got, naive_alpha_beta(&r, &alpha, &b, &g, &h, 8));
                    let got = bc.at(&g).map_or(0, |v| v.coeff(&h));
                    assert_eq!(got, naive_beta_gamma(&r, &b, &c, &g, &h, 8));
                    let expect = b.at(&g).map_or(0, |v| r.gr_mul(v, &alpha).coeff(&h));
                    assert_eq!(ba.at(&g).map_or(0, |v| v.coeff(&h)), expect);
                }
            }
        }
    }
}

#[test]
fn embedding_of_the_group_ring() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r = ring(3);
    for _ in 0..50 {
        let a = gr_elt(&r, &mut rng, 3);
        let b = gr_elt(&r, &mut rng, 3);
        let prod = r.d1_mul(&TwistedElement::new(a.clone(), Beta::zero()), &TwistedElement::new(b.clone(), Beta::zero()));
        assert_eq!(prod, TwistedElement::new(r.gr_mul(&a, &b), Beta::zero()));
    }
}

#[test]
fn matrix_ring_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let r = ring(2);
    for _ in 0..20 {
        let a = matrix(&r, &mut rng, 2, 1, 2);
        let b = matrix(&r, &mut rng, 2, 1, 2);
        let c = matrix(&r, &mut rng, 2, 1, 2);
        let ab_c = r.tm_mul(&r.tm_mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = r.tm_mul(&a, &r.tm_mul(&b, &c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
        assert_eq!(r.tm_mul(&a, &r.tm_unit(2)).unwrap(), a);
        assert_eq!(r.tm_mul(&r.tm_unit(2), &a).unwrap(), a);
        let lhs = r.tm_mul(&a, &r.tm_add(&b, &c).unwrap()).unwrap();
        let rhs = r.tm_add(&r.tm_mul(&a, &b).unwrap(), &r.tm_mul(&a, &c).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
    let x = element(&r, &mut rng, 2, 2);
    let y = element(&r, &mut rng, 2, 2);
    let one = r.tm_mul(&TwistedMatrix::scalar(x.clone()), &TwistedMatrix::scalar(y.clone())).unwrap();
    assert_eq!(one, TwistedMatrix::scalar(r.d1_mul(&x, &y)));
    assert!(r.tm_mul(&r.tm_unit(2), &r.tm_unit(3)).is_err());
}

#[test]
fn action_examples() {
    let r = ring(2);
    let g = z();
    let q2 = Alphabet::vector(2, 1).unwrap();
    let id = to_lnuca(&r, &TwistedMatrix::scalar(r.one())).unwrap();
    assert_eq!(id, RuleField::Constant(LocalRule::identity(&g, q2)));

    let xor = to_lnuca(&r, &TwistedMatrix::scalar(TwistedElement::new(gr(&r, &[(0, 1), (1, 1)]), Beta::zero()))).unwrap();
    let expect = LocalRule::from_fn(q2, vec![at(&g, 0), at(&g, 1)], |p| p[0] ^ p[1]).unwrap();
    assert_eq!(xor, RuleField::Constant(expect));

    // beta(0) = e_0 on top of the unit: x(0) is doubled, so cleared
    let beta = Beta::from_sites([(at(&g, 0), gr(&r, &[(0, 1)]))]);
    let s = to_lnuca(&r, &TwistedMatrix::scalar(TwistedElement::new(r.gr_one(), beta.clone()))).unwrap();
    assert_eq!(s.exception_sites(), vec![at(&g, 0)]);
    assert_eq!(s.rule_at(&at(&g, 0)).table(), &[0, 0]);
    assert!(s.base().is_projection_to(&at(&g, 0)));

    let only_beta = to_lnuca(&r, &TwistedMatrix::scalar(TwistedElement::new(GroupRingElt::zero(), beta))).unwrap();
    assert_eq!(only_beta.rule_at(&at(&g, 0)).table(), &[0, 1]);
    assert_eq!(only_beta.base().table(), &[0, 0]);
}

#[test]
fn action_matches_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (q, n) in [(2, 1), (3, 1), (2, 2)] {
        let r = ring(q);
        for _ in 0..10 {
            let a = matrix(&r, &mut rng, n, 2, 2);
            let tau = to_lnuca(&r, &a).unwrap();
            let size = q.pow(n as u32);
            for _ in 0..10 {
                let x = random_config(&r.group, &mut rng, size, 4);
                let y = apply(&r.group, &tau, &x).unwrap();
                for g in -8..=8 {
                    let g = r.group.int(&[g]);
                    assert_eq!(y.at(&g), direct_tau(&r, &a, &x, &g, 4));
                }
            }
        }
    }
}

#[test]
fn action_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (q, n) in [(2, 1), (3, 1), (2, 2)] {
        let r = ring(q);
        for _ in 0..8 {
            let a = matrix(&r, &mut rng, n, 1, 2);
            let b = matrix(&r, &mut rng, n, 1, 2);
            let tau_ab = to_lnuca(&r, &r.tm_mul(&a, &b).unwrap()).unwrap();
            let tau_a = to_lnuca(&r, &a).unwrap();
            let tau_b = to_lnuca(&r, &b).unwrap();
            let composed = compose(&r.group, &tau_a, &tau_b).unwrap();
            for _ in 0..20 {
                let x = random_config(&r.group, &mut rng, q.pow(n as u32), 5);
                let direct = apply(&r.group, &tau_ab, &x).unwrap();
                let nested = apply(&r.group, &tau_a, &apply(&r.group, &tau_b, &x).unwrap()).unwrap();
                assert_eq!(direct, nested);
                assert_eq!(direct, apply(&r.group, &composed, &x).unwrap());
            }
        }
    }
}

#[test]
fn round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (q, n) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
        let r = ring(q);
        for _ in 0..10 {
            let a = matrix(&r, &mut rng, n, 1, 2);
            let s = to_lnuca(&r, &a).unwrap();
            let back = from_lnuca(&r, &s).unwrap();
            assert_eq!(back, a);
            assert_eq!(to_lnuca(&r, &back).unwrap(), s);
        }
    }
    // a field over a wider memory comes back after widening
    let r = ring(2);
    let g = z();
    let shift = field(shift(&g, 1), vec![(at(&g, 0), not_at(&g, 1))]);
    assert!(from_lnuca(&r, &shift).is_err());
    let q2 = Alphabet::vector(2, 1).unwrap();
    let wide = LocalRule::from_fn(q2, vec![at(&g, -1), at(&g, 0), at(&g, 1)], |p| p[2]).unwrap();
    let s = RuleField::Constant(wide);
    let m = from_lnuca(&r, &s).unwrap();
    assert_eq!(m, TwistedMatrix::scalar(mono(&r, 1, 1)));
    assert_eq!(to_lnuca(&r, &m).unwrap().widen(s.memory()).unwrap(), s);
}

#[test]
fn nonlinear_fields_are_rejected() {
    let r = ring(2);
    let g = z();
    let q2 = Alphabet::vector(2, 1).unwrap();
    let and = LocalRule::from_fn(q2, vec![at(&g, 0), at(&g, 1)], |p| p[0] & p[1]).unwrap();
    assert!(matches!(from_lnuca(&r, &RuleField::Constant(and)), Err(Error::NotLinear(_))));
    let affine = LocalRule::from_fn(q2, vec![at(&g, 0)], |p| 1 - p[0]).unwrap();
    assert!(matches!(from_lnuca(&r, &RuleField::Constant(affine)), Err(Error::NotLinear(_))));
}

#[test]
fn probes() {
    let r = ring(2);
    let unit = r.tm_unit(1);
    let report = stable_finiteness_probe(&r, &unit, &unit).unwrap();
    assert!(report.ring_route && report.nuca_backward);

    let a = TwistedMatrix::scalar(mono(&r, 1, 1));
    let b = TwistedMatrix::scalar(mono(&r, -1, 1));
    let report = stable_finiteness_probe(&r, &a, &b).unwrap();
    assert!(report.agree() && report.ring_route);

    let xor = TwistedMatrix::scalar(TwistedElement::new(gr(&r, &[(0, 1), (1, 1)]), Beta::zero()));
    assert!(matches!(stable_finiteness_probe(&r, &xor, &unit), Err(Error::Precondition(_))));

    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..4 {
        let (a, b) = elementary_pair(&r, &mut rng, 2, 2);
        let report = stable_finiteness_probe(&r, &a, &b).unwrap();
        assert!(report.ring_route && report.nuca_backward, "{a:?}");
    }
}

#[test]
fn identity_of_inverse_fields() {
    let r = ring(3);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (a, b) = elementary_pair(&r, &mut rng, 2, 1);
    let tau_a = to_lnuca(&r, &a).unwrap();
    let tau_b = to_lnuca(&r, &b).unwrap();
    assert!(check_identity(&r.group, &tau_b, &tau_a).unwrap().proven());
    assert!(check_identity(&r.group, &tau_a, &tau_b).unwrap().proven());
}
