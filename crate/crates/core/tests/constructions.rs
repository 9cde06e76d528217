use nacoalg::coalgebra::{
    anticocommutativity_check, coassociativity_check, cocommutativity_check, coderivation_check, parse_spec_json,
    spec_to_json, validate_shift_bound, CoalgebraSpec,
};
use nacoalg::constructions::{antisymmetrize, builtin, builtin_algebra, builtin_catalog, gelfand_dorfman, graded_dual, kantor};
use nacoalg::exactlin::{int, BasisLabel, FamilyId, FormalTensor, Parity, Scalar};
use nacoalg::Error;

/// `((family, index), (family, index), coefficient)`
type Term = ((&'static str, i64), (&'static str, i64), i64);

/// Closed formulas written out directly, independent of the rule language.
fn closed_delta(example: &str, family: &str, n: i64) -> Vec<Term> {
    let mut out = Vec::new();
    match (example, family) {
        ("example1", "e") => out.push((("e", 0), ("e", 0), 1)),
        ("example1", "f") => {
            out.push((("f", n), ("e", 0), 1));
            out.push((("e", 0), ("f", n), 1));
        }
        ("example2", "f") => out.push((("e", 0), ("f", n + 1), 1)),
        ("example3", "f") => {
            out.push((("e", 0), ("f", n + 1), 1));
            out.push((("f", n + 1), ("e", 0), -1));
        }
        ("example4", "x") => (0..=n).for_each(|i| out.push((("x", i), ("x", n - i), 1))),
        ("example5", "x") => (0..=n).for_each(|i| out.push((("x", i), ("x", n - i + 1), n - i + 1))),
        ("example6", "x") => (0..=n + 1).for_each(|i| out.push((("x", i), ("x", n + 1 - i), n + 1 - 2 * i))),
        ("example9", "f") => match n % 3 {
            1 => out.push((("e1", 0), ("f", n + 2), 1)),
            2 => out.push((("e2", 0), ("f", n + 1), 1)),
            _ => {
                out.push((("e2", 0), ("f", n + 1), 1));
                out.push((("f", n + 1), ("e2", 0), -1));
                out.push((("e1", 0), ("f", n + 2), -1));
                out.push((("f", n + 2), ("e1", 0), 1));
            }
        },
        _ => {}
    }
    out
}

fn even(f: &str, i: i64) -> BasisLabel {
    BasisLabel::even(f, i as u64)
}

fn tensor_of(items: &[Term]) -> FormalTensor {
    FormalTensor::from_terms(2, items.iter().map(|(a, b, c)| (vec![even(a.0, a.1), even(b.0, b.1)], int(*c)))).unwrap()
}

#[test]
fn ungraded_builtins_match_closed_formulas() {
    for ex in ["example1", "example2", "example3", "example4", "example5", "example6", "example9"] {
        let spec = builtin(ex).unwrap();
        for l in spec.labels_up_to(30) {
            let expected = tensor_of(&closed_delta(ex, l.family().name(), l.index() as i64));
            assert_eq!(spec.delta(&l).unwrap(), expected, "{ex} at {l}");
        }
    }
}

fn odd_label(f: &str, i: u64) -> BasisLabel {
    BasisLabel::new(FamilyId::new(f).barred(), i, Parity::Odd)
}

#[test]
fn graded_builtins_match_closed_formulas() {
    let ex8 = builtin("example8").unwrap();
    for n in 0..=30u64 {
        let mut even_part = FormalTensor::zero(2);
        let mut odd_part = FormalTensor::zero(2);
        for i in 0..=n {
            even_part.add_scaled(&FormalTensor::basis(vec![BasisLabel::even("x", i), BasisLabel::even("x", n - i)]), &int(1)).unwrap();
            odd_part.add_scaled(&FormalTensor::basis(vec![odd_label("x", i), BasisLabel::even("x", n - i)]), &int(1)).unwrap();
            odd_part.add_scaled(&FormalTensor::basis(vec![BasisLabel::even("x", i), odd_label("x", n - i)]), &int(1)).unwrap();
        }
        for i in 0..=n + 1 {
            let c: Scalar = int(n as i64 + 1 - 2 * i as i64);
            even_part.add_scaled(&FormalTensor::basis(vec![odd_label("x", i), odd_label("x", n + 1 - i)]), &c).unwrap();
        }
        assert_eq!(ex8.delta(&ex8.label(&FamilyId::new("x"), n).unwrap()).unwrap(), even_part);
        assert_eq!(ex8.delta(&ex8.label(&FamilyId::new("x").barred(), n).unwrap()).unwrap(), odd_part);
    }
    let ex7 = builtin("example7").unwrap();
    let fbar3 = ex7.parse_label("~f:3").unwrap();
    let expected = FormalTensor::from_terms(
        2,
        [
            (vec![BasisLabel::even("e", 0), odd_label("f", 3)], int(1)),
            (vec![odd_label("f", 3), BasisLabel::even("e", 0)], int(1)),
            (vec![odd_label("e", 0), BasisLabel::even("f", 3)], int(1)),
            (vec![BasisLabel::even("f", 3), odd_label("e", 0)], int(1)),
        ],
    )
    .unwrap();
    assert_eq!(ex7.delta(&fbar3).unwrap(), expected);
}

#[test]
fn construction_lineage() {
    let ex1 = builtin("example1").unwrap();
    assert!(gelfand_dorfman(&ex1).unwrap().same_rules(&builtin("example2").unwrap()));
    assert!(antisymmetrize(&builtin("example2").unwrap()).unwrap().same_rules(&builtin("example3").unwrap()));
    assert!(kantor(&ex1).unwrap().same_rules(&builtin("example7").unwrap()));

    let ex4 = builtin("example4").unwrap();
    let ex5 = gelfand_dorfman(&ex4).unwrap();
    assert!(ex5.agree_on(&builtin("example5").unwrap(), 30));
    assert!(antisymmetrize(&ex5).unwrap().agree_on(&builtin("example6").unwrap(), 30));
    assert!(kantor(&ex4).unwrap().agree_on(&builtin("example8").unwrap(), 30));

    let dual = graded_dual(&builtin_algebra("fx-diff-algebra", 41).unwrap(), 40).unwrap();
    for l in dual.labels_up_to(40) {
        assert_eq!(dual.delta(&l).unwrap(), ex4.delta(&l).unwrap());
        assert_eq!(dual.d_label(&l).is_ok(), l.index() < 40);
    }
}

#[test]
fn construction_examples() {
    let ex5 = gelfand_dorfman(&builtin("example4").unwrap()).unwrap();
    let x = |i| BasisLabel::even("x", i);
    let expected = FormalTensor::from_terms(2, [(vec![x(0), x(2)], int(2)), (vec![x(1), x(1)], int(1))]).unwrap();
    assert_eq!(ex5.delta(&x(1)).unwrap(), expected);

    let ex6 = antisymmetrize(&ex5).unwrap();
    let expected = FormalTensor::from_terms(2, [(vec![x(0), x(2)], int(2)), (vec![x(2), x(0)], int(-2))]).unwrap();
    assert_eq!(ex6.delta(&x(1)).unwrap(), expected);

    // cocommutative input gives zero
    assert!(antisymmetrize(&builtin("example1").unwrap()).unwrap().delta(&x(0)).is_err());
    let anti = antisymmetrize(&builtin("example4").unwrap()).unwrap();
    assert!((0..20).all(|i| anti.delta(&x(i)).unwrap().is_zero()));

    // d ≡ 0 gives zero
    let ex1 = builtin("example1").unwrap();
    let zero_d = ex1.with_coderivation(Some(parse_d("[{\"family\":\"e\",\"terms\":[]},{\"family\":\"f\",\"terms\":[]}]"))).unwrap();
    let gd = gelfand_dorfman(&zero_d).unwrap();
    assert!(gd.labels_up_to(10).iter().all(|l| gd.delta(l).unwrap().is_zero()));

    assert_eq!(gelfand_dorfman(&builtin("example2").unwrap()).unwrap_err(), Error::NotDifferential);
    assert_eq!(kantor(&builtin("example3").unwrap()).unwrap_err(), Error::NotDifferential);
}

fn parse_d(entries: &str) -> nacoalg::coalgebra::RuleSet {
    let text = format!(
        "{{\"field\":\"Q\",\"families\":[{{\"name\":\"e\",\"range\":[0,0]}},{{\"name\":\"f\",\"range\":[1,null]}}],\
         \"delta\":[{{\"family\":\"e\",\"terms\":[]}},{{\"family\":\"f\",\"terms\":[]}}],\"coderivation\":{entries},\"shift_bound\":1}}"
    );
    parse_spec_json(&text).unwrap().coderivation_rules().unwrap().clone()
}

#[test]
fn graded_dual_small_algebras() {
    let line = graded_dual(&builtin_algebra("idempotent-line", 0).unwrap(), 0).unwrap();
    let u = line.parse_label("u:0").unwrap();
    assert_eq!(line.delta(&u).unwrap(), FormalTensor::basis(vec![u.clone(), u]));
    assert!(graded_dual(&builtin_algebra("fx-mod-x3", 0).unwrap(), 3).is_err());
}

#[test]
fn builtin_checks() {
    let ex1 = builtin("example1").unwrap();
    assert!(coassociativity_check(&ex1, 50).unwrap().passed());
    assert!(cocommutativity_check(&ex1, 50, false).unwrap().passed());
    assert!(coderivation_check(&ex1, 50).unwrap().passed());
    assert!(coderivation_check(&builtin("example4").unwrap(), 50).unwrap().passed());

    let ex2 = cocommutativity_check(&builtin("example2").unwrap(), 10, false).unwrap();
    assert!(!ex2.passed());
    let w = &ex2.witnesses[0];
    assert_eq!(w.label.as_ref().unwrap().to_string(), "f:1");
    let expected = FormalTensor::from_terms(
        2,
        [(vec![BasisLabel::even("e", 0), BasisLabel::even("f", 2)], int(1)), (vec![BasisLabel::even("f", 2), BasisLabel::even("e", 0)], int(-1))],
    )
    .unwrap();
    assert_eq!(w.residual.as_ref().unwrap(), &expected);

    assert!(cocommutativity_check(&builtin("example7").unwrap(), 20, true).unwrap().passed());
    assert!(anticocommutativity_check(&builtin("example3").unwrap(), 20, false).unwrap().passed());

    assert!(validate_shift_bound(&ex1, 40).passed());
    assert!(validate_shift_bound(&builtin("example9").unwrap(), 40).passed());
    assert!(!validate_shift_bound(&builtin("example9").unwrap().with_shift_bound(1), 40).passed());
    assert!(!validate_shift_bound(&builtin("example4").unwrap().with_shift_bound(0), 40).passed());
}

#[test]
fn mutated_coderivation_fails_at_e() {
    let ex1 = builtin("example1").unwrap();
    let d = parse_d("[{\"family\":\"e\",\"terms\":[{\"target\":\"e[0]\"}]},{\"family\":\"f\",\"terms\":[{\"target\":\"f[n + 1]\"}]}]");
    let bad = ex1.with_coderivation(Some(d)).unwrap();
    let report = coderivation_check(&bad, 10).unwrap();
    assert!(!report.passed());
    let e = bad.parse_label("e:0").unwrap();
    assert_eq!(report.witnesses[0].label.as_ref(), Some(&e));
    // Δ(e) − (d⊗id + id⊗d)(e⊗e) = e⊗e − 2·e⊗e
    assert_eq!(report.witnesses[0].residual.as_ref().unwrap(), &FormalTensor::basis(vec![e.clone(), e]).scale(&int(-1)));
}

#[test]
fn delta_linear_and_apply_d() {
    let ex2 = builtin("example2").unwrap();
    let v = ex2.parse_vector("f:1 - f:2").unwrap();
    let e = BasisLabel::even("e", 0);
    let expected = FormalTensor::from_terms(
        2,
        [(vec![e.clone(), BasisLabel::even("f", 2)], int(1)), (vec![e.clone(), BasisLabel::even("f", 3)], int(-1))],
    )
    .unwrap();
    assert_eq!(ex2.delta_linear(&v).unwrap(), expected);
    let ex1 = builtin("example1").unwrap();
    assert_eq!(ex1.delta_linear(&ex1.parse_vector("2*e:0").unwrap()).unwrap(), FormalTensor::basis(vec![e.clone(), e.clone()]).scale(&int(2)));
    assert!(ex1.apply_d(&ex1.parse_vector("e:0").unwrap()).unwrap().is_zero());
    assert_eq!(ex1.apply_d(&ex1.parse_vector("f:5").unwrap()).unwrap(), ex1.parse_vector("f:6").unwrap());
    let ex4 = builtin("example4").unwrap();
    assert_eq!(ex4.apply_d(&ex4.parse_vector("x:2").unwrap()).unwrap(), ex4.parse_vector("3*x:3").unwrap());
    assert_eq!(ex2.apply_d(&v).unwrap_err(), Error::NotDifferential);
    assert!(matches!(ex1.parse_label("f:0"), Err(Error::LabelOutOfRange { .. })));
}

#[test]
fn spec_files_roundtrip_for_all_builtins() {
    for info in builtin_catalog() {
        let Ok(spec) = builtin(info.name) else { continue };
        let again: CoalgebraSpec = parse_spec_json(&spec_to_json(&spec)).unwrap();
        assert!(spec.same_rules(&again), "{}", info.name);
        assert!(spec.agree_on(&again, 30), "{}", info.name);
    }
}
