use std::collections::BTreeMap;

use crate::coalgebra::{CoalgebraSpec, FactorRef, FamilyDecl, Guard, IndexPoly, RuleEntry, RuleSet, RuleTerm, SumRange};
use crate::error::{Error, Result};
use crate::exactlin::{int, FamilyId, Parity};

use super::graded::{polynomial_algebra, GradedAlgebraSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    Coalgebra,
    GradedAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltinInfo {
    pub name: &'static str,
    pub kind: BuiltinKind,
    pub description: &'static str,
    /// How the entry relates to the others, e.g. `kantor(example1)`.
    pub lineage: &'static str,
}

const CATALOG: &[BuiltinInfo] = &[
    BuiltinInfo {
        name: "example1",
        kind: BuiltinKind::Coalgebra,
        description: "e, f_i (i ≥ 1): Δe = e⊗e, Δf_i = f_i⊗e + e⊗f_i; d(e) = 0, d(f_i) = f_(i+1)",
        lineage: "primitive",
    },
    BuiltinInfo {
        name: "example2",
        kind: BuiltinKind::Coalgebra,
        description: "Novikov coalgebra on e, f_i: Δe = 0, Δf_i = e⊗f_(i+1)",
        lineage: "gelfand-dorfman(example1)",
    },
    BuiltinInfo {
        name: "example3",
        kind: BuiltinKind::Coalgebra,
        description: "Lie coalgebra on e, f_i: Δe = 0, Δf_i = e⊗f_(i+1) − f_(i+1)⊗e",
        lineage: "antisymmetrize(example2)",
    },
    BuiltinInfo {
        name: "example4",
        kind: BuiltinKind::Coalgebra,
        description: "divided-power coalgebra on x_n: Δx_n = Σ x_i⊗x_(n−i), d(x_n) = (n+1)x_(n+1)",
        lineage: "graded-dual(fx-diff-algebra)",
    },
    BuiltinInfo {
        name: "example5",
        kind: BuiltinKind::Coalgebra,
        description: "Novikov coalgebra on x_n: Δx_n = Σ (n−i+1) x_i⊗x_(n−i+1)",
        lineage: "gelfand-dorfman(example4)",
    },
    BuiltinInfo {
        name: "example6",
        kind: BuiltinKind::Coalgebra,
        description: "Lie coalgebra on x_n (dual of the Witt algebra): Δx_n = Σ_(i=0..n+1) (n+1−2i) x_i⊗x_(n+1−i)",
        lineage: "antisymmetrize(example5)",
    },
    BuiltinInfo {
        name: "example7",
        kind: BuiltinKind::Coalgebra,
        description: "Jordan supercoalgebra on e, f_i and odd copies ~e, ~f_i",
        lineage: "kantor(example1)",
    },
    BuiltinInfo {
        name: "example8",
        kind: BuiltinKind::Coalgebra,
        description: "Jordan supercoalgebra of vector type on x_n and odd copies ~x_n",
        lineage: "kantor(example4)",
    },
    BuiltinInfo {
        name: "example9",
        kind: BuiltinKind::Coalgebra,
        description: "right-alternative coalgebra on e1, e2, f_i with Δ depending on i mod 3",
        lineage: "primitive",
    },
    BuiltinInfo {
        name: "fx-diff-algebra",
        kind: BuiltinKind::GradedAlgebra,
        description: "F[x] graded by degree with the derivation ∂ = d/dx",
        lineage: "primitive",
    },
    BuiltinInfo {
        name: "fx-mod-x3",
        kind: BuiltinKind::GradedAlgebra,
        description: "F[x]/(x^3) graded by exponent, no derivation",
        lineage: "primitive",
    },
    BuiltinInfo {
        name: "idempotent-line",
        kind: BuiltinKind::GradedAlgebra,
        description: "one-dimensional algebra Fu with u·u = u in degree 0",
        lineage: "primitive",
    },
];

pub fn builtin_catalog() -> &'static [BuiltinInfo] {
    CATALOG
}

fn fr(s: &str) -> FactorRef {
    s.parse().expect("builtin factor syntax")
}

fn poly(s: &str) -> IndexPoly {
    s.parse().expect("builtin coefficient syntax")
}

fn t(coeff: &str, l: &str, r: &str) -> RuleTerm {
    RuleTerm::new(poly(coeff), vec![fr(l), fr(r)])
}

fn sum(from: &str, to: &str, coeff: &str, l: &str, r: &str) -> RuleTerm {
    let range = SumRange::new(from.parse().expect("bound"), to.parse().expect("bound")).expect("builtin range");
    RuleTerm::summed(range, poly(coeff), vec![fr(l), fr(r)])
}

fn dt(coeff: &str, target: &str) -> RuleTerm {
    RuleTerm::new(poly(coeff), vec![fr(target)])
}

fn entry(family: &str, terms: Vec<RuleTerm>) -> RuleEntry {
    RuleEntry::new(family.parse().expect("family"), Guard::Always, terms)
}

fn residue(family: &str, modulus: u64, residue: u64, terms: Vec<RuleTerm>) -> RuleEntry {
    RuleEntry::new(family.parse().expect("family"), Guard::Residue { modulus, residue }, terms)
}

fn odd(name: &str, lo: u64, hi: Option<u64>) -> FamilyDecl {
    FamilyDecl::new(FamilyId::new(name).barred(), Parity::Odd, lo, hi)
}

fn ef_families() -> Vec<FamilyDecl> {
    vec![FamilyDecl::single("e"), FamilyDecl::infinite("f", 1)]
}

fn spec(
    name: &str,
    graded: bool,
    families: Vec<FamilyDecl>,
    delta: Vec<RuleEntry>,
    d: Option<Vec<RuleEntry>>,
    s: u64,
) -> CoalgebraSpec {
    let delta = RuleSet::new(2, delta).expect("builtin delta");
    let d = d.map(|d| RuleSet::new(1, d).expect("builtin coderivation"));
    CoalgebraSpec::new(name, graded, families, delta, d, s).expect("builtin spec")
}

/// Builtin coalgebra by registry name.
pub fn builtin(name: &str) -> Result<CoalgebraSpec> {
    let s = match name {
        "example1" => spec(
            name,
            false,
            ef_families(),
            vec![entry("e", vec![t("1", "e[0]", "e[0]")]), entry("f", vec![t("1", "f[n]", "e[0]"), t("1", "e[0]", "f[n]")])],
            Some(vec![entry("e", vec![]), entry("f", vec![dt("1", "f[n + 1]")])]),
            1,
        ),
        "example2" => spec(
            name,
            false,
            ef_families(),
            vec![entry("e", vec![]), entry("f", vec![t("1", "e[0]", "f[n + 1]")])],
            None,
            1,
        ),
        "example3" => spec(
            name,
            false,
            ef_families(),
            vec![entry("e", vec![]), entry("f", vec![t("1", "e[0]", "f[n + 1]"), t("-1", "f[n + 1]", "e[0]")])],
            None,
            1,
        ),
        "example4" => spec(
            name,
            false,
            vec![FamilyDecl::infinite("x", 0)],
            vec![entry("x", vec![sum("0", "n", "1", "x[i]", "x[n - i]")])],
            Some(vec![entry("x", vec![dt("n + 1", "x[n + 1]")])]),
            1,
        ),
        "example5" => spec(
            name,
            false,
            vec![FamilyDecl::infinite("x", 0)],
            vec![entry("x", vec![sum("0", "n", "n - i + 1", "x[i]", "x[n - i + 1]")])],
            None,
            1,
        ),
        "example6" => spec(
            name,
            false,
            vec![FamilyDecl::infinite("x", 0)],
            vec![entry("x", vec![sum("0", "n + 1", "n + 1 - 2i", "x[i]", "x[n + 1 - i]")])],
            None,
            1,
        ),
        "example7" => {
            let mut fams = ef_families();
            fams.push(odd("e", 0, Some(0)));
            fams.push(odd("f", 1, None));
            spec(
                name,
                true,
                fams,
                vec![
                    entry("e", vec![t("1", "e[0]", "e[0]")]),
                    entry(
                        "f",
                        vec![
                            t("1", "e[0]", "f[n]"),
                            t("1", "f[n]", "e[0]"),
                            t("1", "~e[0]", "~f[n + 1]"),
                            t("-1", "~f[n + 1]", "~e[0]"),
                        ],
                    ),
                    entry("~e", vec![t("1", "e[0]", "~e[0]"), t("1", "~e[0]", "e[0]")]),
                    entry(
                        "~f",
                        vec![t("1", "e[0]", "~f[n]"), t("1", "~f[n]", "e[0]"), t("1", "~e[0]", "f[n]"), t("1", "f[n]", "~e[0]")],
                    ),
                ],
                None,
                1,
            )
        }
        "example8" => spec(
            name,
            true,
            vec![FamilyDecl::infinite("x", 0), odd("x", 0, None)],
            vec![
                entry("x", vec![sum("0", "n", "1", "x[i]", "x[n - i]"), sum("0", "n + 1", "n + 1 - 2i", "~x[i]", "~x[n - i + 1]")]),
                entry("~x", vec![sum("0", "n", "1", "~x[i]", "x[n - i]"), sum("0", "n", "1", "x[i]", "~x[n - i]")]),
            ],
            None,
            1,
        ),
        "example9" => spec(
            name,
            false,
            vec![FamilyDecl::single("e1"), FamilyDecl::single("e2"), FamilyDecl::infinite("f", 1)],
            vec![
                entry("e1", vec![]),
                entry("e2", vec![]),
                residue("f", 3, 1, vec![t("1", "e1[0]", "f[n + 2]")]),
                residue("f", 3, 2, vec![t("1", "e2[0]", "f[n + 1]")]),
                residue(
                    "f",
                    3,
                    0,
                    vec![
                        t("1", "e2[0]", "f[n + 1]"),
                        t("-1", "f[n + 1]", "e2[0]"),
                        t("-1", "e1[0]", "f[n + 2]"),
                        t("1", "f[n + 2]", "e1[0]"),
                    ],
                ),
            ],
            None,
            2,
        ),
        _ => {
            return Err(match CATALOG.iter().find(|b| b.name == name) {
                Some(_) => Error::UnknownBuiltin(format!("{name} is a graded algebra; use its graded dual")),
                None => Error::UnknownBuiltin(name.to_string()),
            })
        }
    };
    Ok(s)
}

/// Builtin graded algebra known up to `max_degree` (ignored by the finite
/// ones).
pub fn builtin_algebra(name: &str, max_degree: i64) -> Result<GradedAlgebraSpec> {
    match name {
        "fx-diff-algebra" => Ok(polynomial_algebra(max_degree, true)),
        "fx-mod-x3" => {
            let mut a = polynomial_algebra(2, false);
            a.name = name.into();
            Ok(a)
        }
        "idempotent-line" => Ok(GradedAlgebraSpec {
            name: name.into(),
            family: "u".into(),
            lowest: 0,
            max_degree: 0,
            dims: BTreeMap::from([(0, 1)]),
            products: BTreeMap::from([(((0, 0), (0, 0)), vec![(0, int(1))])]),
            derivation: None,
        }),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}
