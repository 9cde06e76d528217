//! Multilinear nonassociative identities and their coidentities.
//!
//! An identity `p(x₁,…,x_k)` holds in the dual algebra `C*` exactly when
//! the operator `Φ_p: C → C^⊗k` from [`translate`] vanishes on every basis
//! vector, so identities are checked label by label without truncating the
//! dual.
//!
//! Sign conventions for graded specs: the pairing of `α₁⊗…⊗α_k` with a
//! tensor is the plain product `Πα_i(b_i)` unless
//! [`IdentityOptions::koszul_pairing`] is set, and slot permutations carry
//! Koszul signs only for polynomials with [`SignRule::Super`].

mod coop;
mod parse;
mod poly;

pub use coop::{check_identity, translate, CoOp, CoidentityMap, IdentityOptions};
pub use parse::parse_identity;
pub use poly::{format_signature, linearize, parse_signature, NAMonomial, NAPoly, NAVariable, SignRule, SlotParity};

use crate::error::{Error, Result};

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub poly: NAPoly,
}

fn parsed(text: &str) -> NAPoly {
    parse_identity(text).expect("catalog identity syntax")
}

fn linearized(text: &str) -> NAPoly {
    linearize(&parsed(text)).expect("catalog linearization")
}

/// Named multilinear identities. Entries whose name starts with `super` use
/// [`SignRule::Super`]; all slots are unconstrained.
pub fn builtin_identities() -> Vec<CatalogEntry> {
    let e = |name, description, poly| CatalogEntry { name, description, poly };
    vec![
        e("associativity", "(x1 x2) x3 = x1 (x2 x3)", parsed("((x1 x2) x3) - (x1 (x2 x3))")),
        e("commutativity", "x1 x2 = x2 x1, no signs", parsed("(x1 x2) - (x2 x1)")),
        e("anticommutativity", "x1 x2 = -x2 x1", parsed("(x1 x2) + (x2 x1)")),
        e(
            "supercommutativity",
            "x1 x2 = (-1)^|x1||x2| x2 x1",
            parsed("(x1 x2) - (x2 x1)").with_sign_rule(SignRule::Super),
        ),
        e("jacobi", "(x1 x2) x3 + (x2 x3) x1 + (x3 x1) x2 = 0", parsed("((x1 x2) x3) + ((x2 x3) x1) + ((x3 x1) x2)")),
        e("left-symmetry", "(x1,x2,x3) = (x2,x1,x3)", parsed("(x1,x2,x3) - (x2,x1,x3)")),
        e("novikov-right-commutativity", "(x1 x2) x3 = (x1 x3) x2", parsed("((x1 x2) x3) - ((x1 x3) x2)")),
        e(
            "right-alternativity-linearized",
            "(x1,x2,x3) + (x1,x3,x2) = 0",
            parsed("(x1,x2,x3) + (x1,x3,x2)"),
        ),
        e(
            "moufang-linearized",
            "linearization of ((x y) z) y = x ((y z) y)",
            linearized("(((x1 x2) x3) x2) - (x1 ((x2 x3) x2))"),
        ),
        e("jordan-linearized", "linearization of (x^2 y) x = x^2 (y x)", linearized("(((x1 x1) x2) x1) - ((x1 x1) (x2 x1))")),
        e(
            "super-jordan-linearized",
            "linearized Jordan identity under the super sign rule",
            linearized("(((x1 x1) x2) x1) - ((x1 x1) (x2 x1))").with_sign_rule(SignRule::Super),
        ),
        e("left-product-zero", "(x1 x2) x3 = 0", parsed("((x1 x2) x3)")),
        e("double-commutator-zero", "[[x1,x2],[x3,x4]] = 0", parsed("[[x1,x2],[x3,x4]]")),
        e("product-of-products-zero", "(x1 x2)(x3 x4) = 0", parsed("((x1 x2) (x3 x4))")),
        e("left-product-zero-4", "((x1 x2) x3) x4 = 0", parsed("(((x1 x2) x3) x4)")),
        e("derivative-product-zero", "x1' x2' = 0", parsed("(x1' x2')")),
    ]
}

pub fn lookup_identity(name: &str) -> Result<NAPoly> {
    builtin_identities()
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| e.poly)
        .ok_or_else(|| Error::Parse(format!("unknown identity `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;

    #[test]
    fn catalog_is_multilinear() {
        for e in builtin_identities() {
            assert!(e.poly.is_multilinear(), "{}", e.name);
            assert!(e.poly.arity() <= 4, "{}", e.name);
        }
        assert_eq!(lookup_identity("jordan-linearized").unwrap().terms().len(), 12);
        assert!(lookup_identity("nope").is_err());
    }

    #[test]
    fn catalog_examples() {
        assert_eq!(lookup_identity("novikov-right-commutativity").unwrap(), parsed("((x1 x2) x3) - ((x1 x3) x2)"));
        assert_eq!(
            lookup_identity("right-alternativity-linearized").unwrap(),
            parsed("((x1 x2) x3) - (x1 (x2 x3)) + ((x1 x3) x2) - (x1 (x3 x2))")
        );
        assert_eq!(lookup_identity("jacobi").unwrap().terms().len(), 3);
    }

    #[test]
    fn linearize_examples() {
        let ra = linearize(&parsed("((x1 x2) x2) - (x1 (x2 x2))")).unwrap();
        assert_eq!(ra, parsed("((x1 x2) x3) + ((x1 x3) x2) - (x1 (x2 x3)) - (x1 (x3 x2))"));
        assert_eq!(linearize(&parsed("(x1 x1)")).unwrap(), parsed("(x1 x2) + (x2 x1)"));
    }

    #[test]
    fn linearization_round_trips() {
        let cases = [
            ("(((x1 x1) x2) x1) - ((x1 x1) (x2 x1))", vec![1, 1, 1, 2], 6),
            ("(x1 x1)", vec![1, 1], 2),
            ("(((x1 x2) x3) x2) - (x1 ((x2 x3) x2))", vec![1, 2, 2, 3], 2),
        ];
        for (text, map, factor) in cases {
            let p = parsed(text);
            let back = linearize(&p).unwrap().substitute(&map).unwrap();
            assert_eq!(back, p.scale(&int(factor)), "{text}");
        }
    }

    #[test]
    fn linearize_rejects_graded_and_inhomogeneous() {
        assert!(linearize(&parsed("(x1 x1)").with_sign_rule(SignRule::Super)).is_err());
        assert!(linearize(&parsed("(x1 x1) - x1")).is_err());
    }
}
