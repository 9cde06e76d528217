//! Coalgebras on countable bases, described by index rules.
//!
//! A [`CoalgebraSpec`] lists indexed families of basis vectors and gives
//! `Δ` (and optionally a coderivation `d`) per family as finite sums of
//! terms whose indices are affine in the input index `n` and an optional
//! summation index `i`. All checks run over explicit finite index ranges and
//! report what they verified.

mod checks;
mod expr;
mod format;
mod rule;
mod spec;

pub use checks::{
    anticocommutativity_check, coassociativity_check, cocommutativity_check, coderivation_check, residual_check,
    validate_shift_bound, CheckReport, CheckedInterval, Verdict, Witness, MAX_WITNESSES,
};
pub use expr::{Affine, IndexPoly};
pub use format::{parse_spec_json, spec_to_json};
pub use rule::{FactorRef, Guard, RuleEntry, RuleSet, RuleTerm, SumRange};
pub use spec::{CoalgebraSpec, FamilyDecl};
