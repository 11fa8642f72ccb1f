mod common;

use common::*;
use nuca::analysis::{check_injectivity, check_post_surjectivity, check_stable_invertibility};
use nuca::engine::{Alphabet, Config};
use nuca::group::GroupModel;
use nuca::io::*;
use nuca::sofic::build_torus;
use nuca::twisted::{Beta, GroupRingElt, PrimeField, Ring, TwistedElement, TwistedMatrix};
use nuca::Error;

fn input_path(e: Error) -> String {
    match e {
        Error::Input { path, .. } => path,
        other => panic!("expected an input error, got {other}"),
    }
}

#[test]
fn group_descriptors() {
    for (text, expect) in [
        (r#"{"kind":"Z"}"#, GroupModel::integers()),
        (r#"{"kind":"Z^d","params":2}"#, GroupModel::free_abelian(2)),
        (r#"{"kind":"free","params":2}"#, GroupModel::free(2).unwrap()),
        (r#"{"kind":"cyclic","params":7}"#, GroupModel::cyclic(7).unwrap()),
    ] {
        let file: GroupFile = parse(text, "group").unwrap();
        let g = group_from_file(&file, "group").unwrap();
        assert_eq!(g, expect);
        assert_eq!(group_to_file(&g), file);
    }
    let file: GroupFile = parse(r#"{"kind":"Z","generators":["2","3"]}"#, "group").unwrap();
    let g = group_from_file(&file, "group").unwrap();
    assert_eq!(g.generators().len(), 5);
    assert_eq!(group_from_file(&group_to_file(&g), "group").unwrap().generators(), g.generators());

    let bad: GroupFile = parse(r#"{"kind":"Z","generators":["2"]}"#, "group").unwrap();
    assert_eq!(input_path(group_from_file(&bad, "group").unwrap_err()), "generators");
    let bad: GroupFile = parse(r#"{"kind":"torus"}"#, "group").unwrap();
    assert_eq!(input_path(group_from_file(&bad, "group").unwrap_err()), "kind");
    let err = parse::<GroupFile>(r#"{"kind":"Z","extra":1}"#, "group").unwrap_err();
    assert!(err.to_string().contains("extra"), "{err}");
}

#[test]
fn rule_fields_round_trip() {
    let g = z();
    let s = field(shift(&g, 1), vec![(at(&g, 0), not_at(&g, 1)), (at(&g, 5), xor(&g))]);
    let file = field_to_file(&s).unwrap();
    let text = to_pretty(&file).unwrap();
    let back = field_from_file(&g, &parse(&text, "rule").unwrap(), "rule").unwrap();
    assert_eq!(back, s);
}

#[test]
fn rule_files_by_hand() {
    let g = z();
    // memory listed out of order: the table follows the listed order
    let text = r#"{"alphabet": 2, "memory": ["1", "0"], "base": [0, 0, 1, 0]}"#;
    let s = field_from_file(&g, &parse(text, "rule").unwrap(), "rule").unwrap();
    assert_eq!(s.base().eval(&[0, 1]), 1);
    assert_eq!(s.base().eval(&[1, 0]), 0);

    let text = r#"{"alphabet": {"q": 2, "n": 1}, "memory": ["0", "1"], "base": [[[1]], [[1]]], "linear": true}"#;
    let s = field_from_file(&g, &parse(text, "rule").unwrap(), "rule").unwrap();
    assert_eq!(s.base().table(), &[0, 1, 1, 0]);
    assert!(field_to_file(&s).unwrap().linear);

    let text = r#"{"alphabet": 2, "memory": ["0"], "base": [0, 1], "exceptions": {"3": [0, 1, 1]}}"#;
    let e = field_from_file(&g, &parse(text, "rule").unwrap(), "rule").unwrap_err();
    assert_eq!(input_path(e), "exceptions.3");

    let text = r#"{"alphabet": {"q": 2, "n": 1}, "memory": ["0", "1"], "base": [0, 0, 0, 1], "linear": true}"#;
    let e = field_from_file(&g, &parse(text, "rule").unwrap(), "rule").unwrap_err();
    assert_eq!(input_path(e), "base");

    let text = r#"{"alphabet": 2, "memory": ["0", "x"], "base": [0, 0, 0, 1]}"#;
    let e = field_from_file(&g, &parse(text, "rule").unwrap(), "rule").unwrap_err();
    assert_eq!(input_path(e), "memory[1]");

    let e = parse::<RuleFile>(r#"{"alphabet": 2, "memory": ["0"], "base": "no"}"#, "rule").unwrap_err();
    assert!(matches!(e, Error::Input { ref path, .. } if path == "base"), "{e}");
    let e = parse::<RuleFile>("{\n\"alphabet\": 2,\n", "rule").unwrap_err();
    assert!(e.to_string().contains("line 3"), "{e}");
}

#[test]
fn empty_exceptions_mean_constant() {
    let g = z();
    let text = r#"{"alphabet": 2, "memory": ["1"], "base": [0, 1], "exceptions": {}}"#;
    let s = field_from_file(&g, &parse(text, "rule").unwrap(), "rule").unwrap();
    assert_eq!(s, constant(shift(&g, 1)));
}

#[test]
fn configs() {
    let g = GroupModel::free_abelian(2);
    let x = Config::finite(0, [(g.int(&[1, -2]), 1), (g.int(&[0, 3]), 1)]);
    let file = config_to_file(&x);
    let text = to_pretty(&file).unwrap();
    assert!(text.contains("\"1,-2\""));
    assert_eq!(config_from_file(&g, bin(), &parse(&text, "config").unwrap(), "config").unwrap(), x);
    let p = Config::periodic(vec![2, 3], vec![0, 1, 0, 1, 1, 0]).unwrap();
    let back = config_from_file(&g, bin(), &parse(&to_pretty(&config_to_file(&p)).unwrap(), "c").unwrap(), "c").unwrap();
    assert_eq!(back, p);
    let bad: ConfigFile = parse(r#"{"background": 0, "exceptions": {"0,0": 5}}"#, "config").unwrap();
    assert!(config_from_file(&g, bin(), &bad, "config").is_err());
}

#[test]
fn graphs() {
    let z2 = GroupModel::free_abelian(2);
    let t = build_torus(3, 4).unwrap();
    let file = graph_to_file(&t);
    let back = graph_from_file(&z2, &parse(&to_pretty(&file).unwrap(), "graph").unwrap(), "graph").unwrap();
    assert_eq!(back.vertex_count(), 12);
    assert_eq!(back.edge_count(), t.edge_count());
    assert!(back.edges().all(|(v, l, w)| t.out(v, t.label_index(&back.labels()[l]).unwrap()) == Some(w)));
    let cycle: GraphFile = parse(r#"{"cycle": 9}"#, "graph").unwrap();
    assert_eq!(graph_from_file(&z(), &cycle, "graph").unwrap().vertex_count(), 9);
    let bad: GraphFile = parse(r#"{"vertices": 2, "edges": [[0, "1", 1], [0, "1", 0]]}"#, "graph").unwrap();
    assert!(graph_from_file(&z(), &bad, "graph").is_err());
}

#[test]
fn ring_elements() {
    let g = z();
    let ring = Ring::new(g.clone(), PrimeField::new(3).unwrap());
    let alpha = GroupRingElt::from_terms(&ring.field, [(at(&g, 0), 1), (at(&g, -1), 2)]);
    let beta = Beta::from_sites([(at(&g, 2), GroupRingElt::monomial(&ring.field, at(&g, 1), 4))]);
    let e = TwistedElement::new(alpha, beta);
    let file = element_to_file(&ring, &e);
    let text = to_pretty(&file).unwrap();
    let (r2, back) = element_from_file(&g, &parse(&text, "element").unwrap(), "element").unwrap();
    assert_eq!((r2, back), (ring.clone(), e.clone()));

    let m = TwistedMatrix::from_rows(vec![vec![e.clone(), ring.one()], vec![TwistedElement::zero(), e]]).unwrap();
    let text = to_pretty(&matrix_to_file(&ring, &m)).unwrap();
    let (_, back) = matrix_from_file(&g, &parse(&text, "matrix").unwrap(), "matrix").unwrap();
    assert_eq!(back, m);

    let single: MatrixFile = parse(r#"{"field": 2, "alpha": {"1": 1}}"#, "matrix").unwrap();
    let (r, m) = matrix_from_file(&g, &single, "matrix").unwrap();
    assert_eq!(m, TwistedMatrix::scalar(TwistedElement::new(GroupRingElt::monomial(&r.field, at(&g, 1), 1), Beta::zero())));

    let bad: MatrixFile = parse(r#"[[{"alpha": {"0": 1}}]]"#, "matrix").unwrap();
    assert!(matrix_from_file(&g, &bad, "matrix").is_err());
    let bad: MatrixFile = parse(r#"[[{"field": 2}, {"field": 3}], [{}, {}]]"#, "matrix").unwrap();
    assert_eq!(input_path(matrix_from_file(&g, &bad, "matrix").unwrap_err()), "[0][1].field");
}

#[test]
fn verdicts_round_trip_and_recheck() {
    let g = z();
    let verdicts = [
        (constant(xor(&g)), check_injectivity(&g, &constant(xor(&g)), 4, 2).unwrap()),
        (constant(and(&g)), check_post_surjectivity(&g, &constant(and(&g)), 2, 4).unwrap()),
        (
            field(shift(&g, 1), vec![(at(&g, 0), not_at(&g, 1))]),
            check_stable_invertibility(&g, &field(shift(&g, 1), vec![(at(&g, 0), not_at(&g, 1))]), 4, 3).unwrap(),
        ),
    ];
    for (s, v) in verdicts {
        let file = verdict_to_file(&v).unwrap();
        let text = to_pretty(&file).unwrap();
        let back = verdict_from_file(&g, Alphabet::binary(), &parse(&text, "verdict").unwrap(), "verdict").unwrap();
        assert_eq!(verdict_to_file(&back).unwrap(), file);
        assert_eq!(back.status_name(), v.status_name());
        if let Some(w) = back.witness() {
            assert!(w.recheck(&g, &s, None).unwrap());
        }
    }
}
