use nacoalg::closure::{bimodule_step, Subspace};
use nacoalg::coalgebra::{parse_spec_json, CoalgebraSpec};
use nacoalg::constructions::builtin;
use nacoalg::dual::{dual_derivation, dual_product};
use nacoalg::exactlin::{
    extract_components, int, is_linearly_independent, membership, BasisLabel, FamilyId, FormalTensor, FormalVector, Parity,
    Side,
};
use proptest::prelude::*;

fn label(f: &str, i: u64, odd: bool) -> BasisLabel {
    BasisLabel::new(FamilyId::new(f), i, if odd { Parity::Odd } else { Parity::Even })
}

/// Vectors of `example1` on `e:0` and `f:1..=6`.
fn ex1_vector() -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::vec((0u64..=6, -3i64..=3), 1..4)
}

fn ex1_functional(spec: &CoalgebraSpec, terms: &[(u64, i64)]) -> FormalVector {
    FormalVector::from_terms(terms.iter().map(|&(i, c)| {
        let l = if i == 0 { "e:0".to_string() } else { format!("f:{i}") };
        (spec.parse_label(&l).unwrap(), int(c))
    }))
}

fn tensor(arity: usize) -> impl Strategy<Value = FormalTensor> {
    prop::collection::vec((prop::collection::vec((0u64..4, any::<bool>()), arity), -4i64..=4), 0..6).prop_map(move |terms| {
        FormalTensor::from_terms(
            arity,
            terms.into_iter().map(|(key, c)| (key.into_iter().map(|(i, odd)| label("x", i, odd)).collect(), int(c))),
        )
        .unwrap()
    })
}

/// Δf[n] as a sum of `f[n + a] ⊗ e[0]` and `e[0] ⊗ f[n + a]` terms.
fn spec_json(terms: &[(bool, u64, i64)]) -> String {
    let rendered: Vec<String> = terms
        .iter()
        .map(|&(f_left, a, c)| {
            let (l, r) = if f_left { (format!("f[n + {a}]"), "e[0]".into()) } else { ("e[0]".into(), format!("f[n + {a}]")) };
            format!(r#"{{"left": "{l}", "right": "{r}", "coeff": "{c}"}}"#)
        })
        .collect();
    format!(
        r#"{{"field": "Q", "name": "random", "families": [{{"name": "e", "range": [0, 0]}}, {{"name": "f", "range": [1, null]}}],
            "delta": [{{"family": "e", "terms": []}}, {{"family": "f", "terms": [{}]}}], "shift_bound": 3}}"#,
        rendered.join(", ")
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonicalization_is_idempotent_and_ignores_term_order(
        terms in prop::collection::vec((any::<bool>(), 0u64..3, -3i64..=3), 0..6).prop_flat_map(|t| {
            let shuffled = Just(t.clone()).prop_shuffle();
            (Just(t), shuffled)
        })
    ) {
        let (terms, shuffled) = terms;
        let a = parse_spec_json(&spec_json(&terms)).unwrap();
        let b = parse_spec_json(&spec_json(&shuffled)).unwrap();
        let c = a.delta_rules().canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert!(a.same_rules(&b));
        for l in a.labels_up_to(8) {
            prop_assert_eq!(a.delta(&l).unwrap(), b.delta(&l).unwrap());
        }
    }

    #[test]
    fn flip_is_an_involution(t in (2usize..5).prop_flat_map(tensor), pos in 0usize..3, graded in any::<bool>()) {
        let i = pos % (t.arity() - 1);
        prop_assert_eq!(t.flip(i, graded).unwrap().flip(i, graded).unwrap(), t);
    }

    #[test]
    fn grading_is_invisible_on_even_slots(t in tensor(3), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let even = FormalTensor::from_terms(
            3,
            t.iter().map(|(k, c)| (k.iter().map(|l| l.with_parity(Parity::Even)).collect(), c.clone())),
        )
        .unwrap();
        prop_assert_eq!(even.permute(&perm, true).unwrap(), even.permute(&perm, false).unwrap());
    }

    #[test]
    fn extraction_round_trips(t in tensor(2), side in prop_oneof![Just(Side::Left), Just(Side::Right)]) {
        let pairs = extract_components(&t, side).unwrap();
        let mut back = FormalTensor::zero(2);
        for (a, b) in &pairs {
            back = back.add(&FormalTensor::from_vector(a).tensor(&FormalTensor::from_vector(b))).unwrap();
        }
        prop_assert_eq!(&back, &t);
        let lefts: Vec<FormalVector> = pairs.iter().map(|p| p.0.clone()).collect();
        let rights: Vec<FormalVector> = pairs.iter().map(|p| p.1.clone()).collect();
        prop_assert!(is_linearly_independent(&lefts));
        prop_assert!(is_linearly_independent(&rights));
        // every left factor of t lies in the span of the extracted left factors
        for (key, _) in t.iter() {
            let slice = FormalVector::from_terms(
                t.iter().filter(|(k, _)| k[1] == key[1]).map(|(k, c)| (k[0].clone(), c.clone())),
            );
            prop_assert!(membership(&slice, &lefts).is_some());
        }
    }

    #[test]
    fn delta_is_linear(u in ex1_vector(), v in ex1_vector(), a in -3i64..=3, b in -3i64..=3, ex in 0usize..3) {
        let name = ["example1", "example2", "example3"][ex];
        let spec = builtin(name).unwrap();
        let (u, v) = (ex1_functional(&spec, &u), ex1_functional(&spec, &v));
        let combo = u.scale(&int(a)).add(&v.scale(&int(b)));
        let lhs = spec.delta_linear(&combo).unwrap();
        let rhs = spec.delta_linear(&u).unwrap().scale(&int(a)).add(&spec.delta_linear(&v).unwrap().scale(&int(b))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bimodule_step_is_monotone_and_presentation_free(
        gens in prop::collection::vec(ex1_vector(), 1..3),
        mix in -3i64..=3,
        ex in 0usize..3,
    ) {
        let name = ["example1", "example2", "example3"][ex];
        let spec = builtin(name).unwrap();
        let vs: Vec<FormalVector> = gens.iter().map(|g| ex1_functional(&spec, g)).collect();
        let s = Subspace::span(&vs);
        let step = bimodule_step(&spec, &s).unwrap();
        prop_assert!(s.is_subspace_of(&step));
        // replacing a generator by itself plus a multiple of another keeps the span
        let mut other = vs.clone();
        if other.len() > 1 {
            other[0] = other[0].add(&other[1].scale(&int(mix)));
        }
        other.reverse();
        prop_assert_eq!(bimodule_step(&spec, &Subspace::span(&other)).unwrap(), step);
    }

    #[test]
    fn example1_dual_is_commutative_associative_with_leibniz_derivation(
        f in ex1_vector(), g in ex1_vector(), h in ex1_vector(),
    ) {
        let ex1 = builtin("example1").unwrap();
        let (f, g, h) = (ex1_functional(&ex1, &f), ex1_functional(&ex1, &g), ex1_functional(&ex1, &h));
        let p = |x: &FormalVector, y: &FormalVector| dual_product(&ex1, x, y).unwrap();
        let d = |x: &FormalVector| dual_derivation(&ex1, x).unwrap();
        prop_assert_eq!(p(&f, &g), p(&g, &f));
        prop_assert_eq!(p(&p(&f, &g), &h), p(&f, &p(&g, &h)));
        prop_assert_eq!(d(&p(&f, &g)), p(&d(&f), &g).add(&p(&f, &d(&g))));
    }
}

