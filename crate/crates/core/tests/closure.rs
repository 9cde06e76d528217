use nacoalg::closure::{
    bimodule_step, generated_subcoalgebra, local_finiteness_probe, simplicity_probe, Budget, ClosureVerdict, LocalFiniteness,
    Subspace,
};
use nacoalg::coalgebra::{parse_spec_json, CoalgebraSpec};
use nacoalg::constructions::{builtin, builtin_algebra, graded_dual};
use nacoalg::exactlin::FormalVector;
use nacoalg::Error;

fn vecs(spec: &CoalgebraSpec, items: &[&str]) -> Vec<FormalVector> {
    items.iter().map(|s| spec.parse_vector(s).unwrap()).collect()
}

fn span(spec: &CoalgebraSpec, items: &[&str]) -> Subspace {
    Subspace::span(&vecs(spec, items))
}

fn budget(steps: usize) -> Budget {
    Budget { max_steps: steps, ..Budget::default() }
}

#[test]
fn single_steps() {
    let ex2 = builtin("example2").unwrap();
    assert_eq!(bimodule_step(&ex2, &span(&ex2, &["f:1"])).unwrap(), span(&ex2, &["f:1", "e:0", "f:2"]));
    let ex1 = builtin("example1").unwrap();
    let e = span(&ex1, &["e:0"]);
    assert_eq!(bimodule_step(&ex1, &e).unwrap(), e);
    let ex9 = builtin("example9").unwrap();
    assert_eq!(bimodule_step(&ex9, &span(&ex9, &["f:1"])).unwrap(), span(&ex9, &["f:1", "e1:0", "f:3"]));
}

#[test]
fn example2_grows_one_label_per_step() {
    let ex2 = builtin("example2").unwrap();
    let trace = generated_subcoalgebra(&ex2, &vecs(&ex2, &["f:1"]), budget(20)).unwrap();
    assert_eq!(trace.verdict, ClosureVerdict::BudgetExceeded);
    let mut s = span(&ex2, &["f:1"]);
    for k in 1..=20 {
        s = bimodule_step(&ex2, &s).unwrap();
        let mut expected = vec!["e:0".to_string()];
        expected.extend((1..=k + 1).map(|i| format!("f:{i}")));
        let refs: Vec<&str> = expected.iter().map(String::as_str).collect();
        assert_eq!(s, span(&ex2, &refs), "step {k}");
        assert_eq!(trace.dims[k], k + 2);
    }
}

#[test]
fn divergent_closures() {
    for (ex, gens) in [("example1", vec!["f:1"]), ("example3", vec!["f:1"]), ("example7", vec!["~f:1"])] {
        let spec = builtin(ex).unwrap();
        match local_finiteness_probe(&spec, &vecs(&spec, &gens), budget(20)).unwrap() {
            LocalFiniteness::DivergenceEvidence(t) => {
                assert!(t.dims.windows(2).all(|w| w[0] < w[1]), "{ex} {:?}", t.dims);
                assert!(t.dims.iter().enumerate().all(|(k, &d)| d > k), "{ex}");
            }
            other => panic!("{ex}: {other:?}"),
        }
    }
}

#[test]
fn finite_closures() {
    let ex1 = builtin("example1").unwrap();
    assert_eq!(local_finiteness_probe(&ex1, &vecs(&ex1, &["e:0"]), Budget::default()).unwrap(), LocalFiniteness::FiniteDimensional(1));

    let line = parse_spec_json(
        r#"{"field": "Q", "name": "line", "families": [{"name": "u", "range": [0, 0]}],
            "delta": [{"family": "u", "terms": [{"left": "u[0]", "right": "u[0]"}]}], "shift_bound": 0}"#,
    )
    .unwrap();
    assert_eq!(local_finiteness_probe(&line, &vecs(&line, &["u:0"]), Budget::default()).unwrap(), LocalFiniteness::FiniteDimensional(1));

    let truncated = graded_dual(&builtin_algebra("fx-mod-x3", 2).unwrap(), 2).unwrap();
    let gen = vec![FormalVector::basis(truncated.labels_up_to(2).into_iter().max().unwrap())];
    let trace = generated_subcoalgebra(&truncated, &gen, Budget::default()).unwrap();
    assert_eq!(trace.verdict, ClosureVerdict::Closed(3));
    assert_eq!(bimodule_step(&truncated, &trace.subspace).unwrap(), trace.subspace);
}

#[test]
fn witt_dual_reaches_the_bottom() {
    let ex6 = builtin("example6").unwrap();
    for n in 0..=10 {
        let t = generated_subcoalgebra(&ex6, &vecs(&ex6, &[&format!("x:{n}")]), budget(2)).unwrap();
        assert!(t.subspace.contains_label(&ex6.parse_label("x:0").unwrap()), "x:{n}");
    }
}

#[test]
fn simplicity() {
    for (ex, n) in [("example4", 30), ("example5", 30), ("example6", 30), ("example8", 20)] {
        let r = simplicity_probe(&builtin(ex).unwrap(), n, 5, 11).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.notes[0].contains("verified window"));
    }
    let r = simplicity_probe(&builtin("example1").unwrap(), 30, 5, 11).unwrap();
    assert!(!r.passed());
    assert!(r.witnesses.iter().any(|w| w.context.starts_with("closure of e:0 ")), "{r}");
    assert!(matches!(simplicity_probe(&builtin("example1").unwrap(), 1, 1, 0), Err(Error::HorizonTooSmall { .. })));
}

#[test]
fn example9_pattern() {
    let ex9 = builtin("example9").unwrap();
    let t = generated_subcoalgebra(&ex9, &vecs(&ex9, &["f:1", "f:2"]), budget(12)).unwrap();
    assert_eq!(t.verdict, ClosureVerdict::BudgetExceeded);
    for l in ["e1:0", "e2:0", "f:3", "f:6", "f:9"] {
        assert!(t.subspace.contains_label(&ex9.parse_label(l).unwrap()), "{l}");
    }
    assert!(matches!(generated_subcoalgebra(&ex9, &[], Budget { max_steps: 0, max_dim: 1 }), Err(Error::EmptyBudget)));
}
