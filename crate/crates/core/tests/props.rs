mod common;

use common::*;
use nuca::analysis::{check_identity, check_injectivity, check_surjectivity_window, find_inverse};
use nuca::engine::*;
use nuca::group::{Factor, GroupModel};
use nuca::io::{field_from_file, field_to_file, parse, to_pretty, RuleFile};
use nuca::twisted::{PrimeField, Ring};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn models() -> Vec<GroupModel> {
    vec![
        GroupModel::integers(),
        GroupModel::free_abelian(2),
        GroupModel::free(2).unwrap(),
        GroupModel::new(vec![Factor::Integers, Factor::Cyclic(4)]).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_axioms(which in 0usize..4, i in 0usize..400, j in 0usize..400, k in 0usize..400) {
        let g = &models()[which];
        let ball = g.ball_elements(3);
        let (a, b, c) = (&ball[i % ball.len()], &ball[j % ball.len()], &ball[k % ball.len()]);
        prop_assert_eq!(g.mul(&g.mul(a, b), c), g.mul(a, &g.mul(b, c)));
        prop_assert_eq!(g.mul(&g.inv(a), a), g.identity());
        prop_assert_eq!(g.inv(&g.mul(a, b)), g.mul(&g.inv(b), &g.inv(a)));
        prop_assert!(g.word_length(&g.mul(a, b)) <= g.word_length(a) + g.word_length(b));
    }

    #[test]
    fn translations_compose(which in 0usize..3, seed in any::<u64>(), i in 0usize..100, j in 0usize..100) {
        let g = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random::config(g, &mut rng, bin(), 2);
        let ball = g.ball_elements(2);
        let (a, b) = (&ball[i % ball.len()], &ball[j % ball.len()]);
        let twice = translate_config(g, a, &translate_config(g, b, &x));
        prop_assert_eq!(twice, translate_config(g, &g.mul(a, b), &x));
    }

    #[test]
    fn constant_fields_commute_with_translation(which in 0usize..3, seed in any::<u64>(), i in 0usize..100) {
        let g = &models()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Alphabet::new(2).unwrap();
        let m = random::memory(g, &mut rng, 3, 1);
        let s = RuleField::Constant(random::rule(a, &m, &mut rng));
        let x = random::config(g, &mut rng, a, 2);
        let ball = g.ball_elements(2);
        let h = &ball[i % ball.len()];
        let lhs = apply(g, &s, &translate_config(g, h, &x)).unwrap();
        let rhs = translate_config(g, h, &apply(g, &s, &x).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let g = z();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Alphabet::new(2).unwrap();
        let [s, t, u]: [RuleField; 3] = std::array::from_fn(|_| random::field(&g, &mut rng, a, 2, 1, 1));
        let left = compose(&g, &u, &compose(&g, &t, &s).unwrap()).unwrap();
        let right = compose(&g, &compose(&g, &u, &t).unwrap(), &s).unwrap();
        let x = random::config(&g, &mut rng, a, 4);
        prop_assert_eq!(apply(&g, &left, &x).unwrap(), apply(&g, &right, &x).unwrap());
    }

    #[test]
    fn found_inverses_are_left_inverses(seed in any::<u64>()) {
        let g = z();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random::field(&g, &mut rng, bin(), 2, 2, 1);
        if let Some(cert) = find_inverse(&g, &s, 2).unwrap() {
            prop_assert!(check_identity(&g, &cert.inverse, &s).unwrap().proven());
            let x = random::config(&g, &mut rng, bin(), 4);
            prop_assert_eq!(apply(&g, &cert.inverse, &apply(&g, &s, &x).unwrap()).unwrap(), x);
        }
    }

    #[test]
    fn injectivity_verdicts_are_sound(table in prop::collection::vec(0u32..2, 8)) {
        let g = z();
        let rule = LocalRule::new(bin(), vec![at(&g, -1), at(&g, 0), at(&g, 1)], table).unwrap();
        let s = constant(rule);
        let v = check_injectivity(&g, &s, 3, 2).unwrap();
        if let Some(w) = v.witness() {
            prop_assert!(w.recheck(&g, &s, None).unwrap());
        }
        // an injective cellular automaton on Z is surjective
        if v.proven() {
            let window = g.ball_elements(2);
            prop_assert!(check_surjectivity_window(&g, &s, &window).unwrap().full);
        }
    }

    #[test]
    fn rule_files_round_trip(seed in any::<u64>(), q in 2u32..=3) {
        let g = GroupModel::free_abelian(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random::field(&g, &mut rng, Alphabet::new(q).unwrap(), 3, 3, 2);
        let text = to_pretty(&field_to_file(&s).unwrap()).unwrap();
        let file: RuleFile = parse(&text, "rule").unwrap();
        prop_assert_eq!(field_from_file(&g, &file, "rule").unwrap(), s);
    }

    #[test]
    fn twisted_multiplication_is_associative(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 5])) {
        let ring = Ring::new(z(), PrimeField::new(q).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c]: [_; 3] = std::array::from_fn(|_| ring::element(&ring, &mut rng, 2, 2));
        let left = ring.d1_mul(&ring.d1_mul(&a, &b), &c);
        let right = ring.d1_mul(&a, &ring.d1_mul(&b, &c));
        prop_assert_eq!(left, right);
        prop_assert_eq!(ring.d1_mul(&ring.one(), &a), a.clone());
        prop_assert!(ring.d1_add(&a, &ring.d1_neg(&a)).is_zero());
    }
}
