use nuca::group::{Factor, GroupModel};

fn all_models() -> Vec<GroupModel> {
    vec![
        GroupModel::integers(),
        GroupModel::free_abelian(2),
        GroupModel::free(2).unwrap(),
        GroupModel::cyclic(5).unwrap(),
        GroupModel::new(vec![Factor::Integers, Factor::Cyclic(3)]).unwrap(),
        GroupModel::new(vec![Factor::Free(2), Factor::Integers]).unwrap(),
    ]
}

#[test]
fn ball_sizes() {
    let z = GroupModel::integers();
    let z2 = GroupModel::free_abelian(2);
    let f2 = GroupModel::free(2).unwrap();
    for r in 0..=5usize {
        assert_eq!(z.ball_elements(r).len(), 2 * r + 1);
        assert_eq!(z2.ball_elements(r).len(), 2 * r * r + 2 * r + 1);
        // 1 + 4 (3^r - 1) / 2
        assert_eq!(f2.ball_elements(r).len(), 2 * 3usize.pow(r as u32) - 1);
    }
    let c5 = GroupModel::cyclic(5).unwrap();
    assert_eq!(c5.ball_elements(1).len(), 3);
    assert_eq!(c5.ball_elements(7).len(), 5);
    assert_eq!(c5.elements().unwrap().len(), 5);
    assert!(z.elements().is_none());
}

#[test]
fn balls_are_sorted_and_match_word_length() {
    for g in all_models() {
        for r in 0..=3 {
            let ball = g.ball_elements(r);
            assert!(ball.windows(2).all(|w| w[0] < w[1]), "{g} B({r}) not canonical");
            assert!(ball.iter().all(|h| g.word_length(h) <= r));
            if r > 0 {
                let inner = g.ball_elements(r - 1);
                let sphere: Vec<_> = ball.iter().filter(|h| !inner.contains(h)).collect();
                assert!(sphere.iter().all(|h| g.word_length(h) == r));
            }
        }
    }
}

#[test]
fn group_laws_on_balls() {
    for g in all_models() {
        let ball = g.ball_elements(2);
        let e = g.identity();
        for a in ball.iter() {
            assert_eq!(g.mul(a, &e), *a);
            assert_eq!(g.mul(&e, a), *a);
            assert_eq!(g.mul(a, &g.inv(a)), e);
            assert_eq!(g.word_length(a), g.word_length(&g.inv(a)));
            for b in ball.iter().step_by(3) {
                for c in ball.iter().step_by(5) {
                    assert_eq!(g.mul(&g.mul(a, b), c), g.mul(a, &g.mul(b, c)), "{g}");
                }
            }
        }
    }
}

#[test]
fn free_group_is_not_commutative() {
    let f2 = GroupModel::free(2).unwrap();
    let a = f2.parse_element("a").unwrap();
    let b = f2.parse_element("b").unwrap();
    assert_ne!(f2.mul(&a, &b), f2.mul(&b, &a));
    assert_eq!(f2.mul(&a, &b).to_string(), "ab");
    assert_eq!(f2.parse_element("aBbA").unwrap(), f2.identity());
    assert_eq!(f2.word_length(&f2.parse_element("abAB").unwrap()), 4);
}

#[test]
fn parsing_round_trips() {
    for g in all_models() {
        for h in g.ball_elements(2).iter() {
            assert_eq!(g.parse_element(&h.to_string()).unwrap(), *h, "{g}");
        }
    }
    let z2 = GroupModel::free_abelian(2);
    assert_eq!(z2.parse_element("(3, -1)").unwrap(), z2.int(&[3, -1]));
    assert!(z2.parse_element("3").is_err());
    assert!(z2.parse_element("x,1").is_err());
    let f2 = GroupModel::free(2).unwrap();
    assert!(f2.parse_element("c").is_err());
    let c5 = GroupModel::cyclic(5).unwrap();
    assert_eq!(c5.parse_element("-1").unwrap().to_string(), "4");
}

#[test]
fn custom_generators() {
    let z = GroupModel::integers();
    let two = z.int(&[2]);
    let g = z.clone().with_generators(vec![two.clone(), z.int(&[3])]).unwrap();
    assert!(!g.has_default_generators());
    // the set is closed under inverses and contains the identity
    assert_eq!(g.generators().len(), 5);
    assert_eq!(g.word_length(&z.int(&[1])), 2);
    assert_eq!(g.word_length(&z.int(&[5])), 2);
    // 2 alone generates only 2Z
    assert!(z.with_generators(vec![two]).is_err());
}

#[test]
fn first_outside_and_products() {
    let z = GroupModel::integers();
    let excluded = z.ball_elements(2).iter().cloned().collect();
    let g = z.first_outside(&excluded).unwrap();
    assert_eq!(z.word_length(&g), 3);
    let set = z.product_set(&[z.int(&[0]), z.int(&[5])], &z.ball_elements(1));
    assert_eq!(set.len(), 6);
    assert!(set.windows(2).all(|w| w[0] < w[1]));
    let c3 = GroupModel::cyclic(3).unwrap();
    let all = c3.elements().unwrap().iter().cloned().collect();
    assert!(c3.first_outside(&all).is_none());
}

#[test]
fn cayley_ball_graph_edges() {
    let z2 = GroupModel::free_abelian(2);
    let graph = z2.cayley_ball_graph(2);
    assert_eq!(graph.vertex_count(), 13);
    let ball = z2.ball_elements(2);
    for (v, l, w) in graph.edges() {
        assert_eq!(z2.mul(&ball[v], &graph.labels()[l]), ball[w]);
    }
    // every generator, identity included, from the center
    let center = ball.binary_search(&z2.identity()).unwrap();
    let out = (0..graph.labels().len()).filter(|&l| graph.out(center, l).is_some()).count();
    assert_eq!(out, z2.generators().len());
}
