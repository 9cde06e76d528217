//! New specs from old: Gelfand-Dorfman, antisymmetrization, Kantor doubling,
//! graded duals, and the builtin registry.
//!
//! Constructed specs are expressed in the same rule language as their
//! inputs, so every downstream check applies to them unchanged. When a
//! composition with `d` cannot be written as an index rule (for instance a
//! residue-guarded `d` applied to a shifted factor) and the spec is finite,
//! the result is tabulated label by label instead.

mod builtins;
mod graded;

pub use builtins::{builtin, builtin_algebra, builtin_catalog, BuiltinInfo, BuiltinKind};
pub use graded::{graded_dual, polynomial_algebra, GradedAlgebraSpec};

use num_traits::Zero;

use crate::coalgebra::{
    coassociativity_check, cocommutativity_check, coderivation_check, Affine, CoalgebraSpec, FactorRef, FamilyDecl,
    Guard, IndexPoly, RuleEntry, RuleSet, RuleTerm,
};
use crate::error::{Error, Result};
use crate::exactlin::{FormalTensor, Parity};

/// Index range over which Kantor preconditions are checked.
pub const PRECONDITION_RANGE: u64 = 12;

/// `d(family[index])` as a list of `(coefficient, factor)` pairs, with the
/// coefficient a polynomial in `(n, i)`.
fn compose_with_d(spec: &CoalgebraSpec, factor: &FactorRef) -> Result<Vec<(IndexPoly, FactorRef)>> {
    let rules = spec.coderivation_rules().ok_or(Error::NotDifferential)?;
    let mut out = Vec::new();
    if factor.index.is_constant() {
        let m = factor.index.constant;
        if m < 0 {
            return Err(Error::NotExpressible(format!("negative index in {factor}")));
        }
        for e in rules.matching(&factor.family, m as u64) {
            for t in &e.terms {
                let c = t.coeff.eval(m, 0);
                if c.is_zero() {
                    continue;
                }
                let target = &t.factors[0];
                out.push((IndexPoly::constant(c), FactorRef::new(target.family.clone(), Affine::constant(target.index.eval(m, 0)))));
            }
        }
        return Ok(out);
    }
    for e in rules.entries_for(&factor.family) {
        if e.guard != Guard::Always {
            return Err(Error::NotExpressible(format!("guarded coderivation entry applied to {factor}")));
        }
        for t in &e.terms {
            let target = &t.factors[0];
            out.push((t.coeff.compose_affine(&factor.index)?, FactorRef::new(target.family.clone(), target.index.compose(&factor.index)?)));
        }
    }
    Ok(out)
}

/// Rewrites every term of `rules` with `f`, keeping entries and guards.
fn map_terms<F>(rules: &RuleSet, arity: usize, mut f: F) -> Result<RuleSet>
where
    F: FnMut(&RuleEntry, &RuleTerm) -> Result<Vec<(crate::exactlin::FamilyId, RuleTerm)>>,
{
    let mut entries: Vec<RuleEntry> = Vec::new();
    for e in rules.entries() {
        let mut by_family: Vec<RuleEntry> = Vec::new();
        for t in &e.terms {
            for (family, nt) in f(e, t)? {
                match by_family.iter_mut().find(|x| x.family == family) {
                    Some(x) => x.terms.push(nt),
                    None => by_family.push(RuleEntry::new(family, e.guard, vec![nt])),
                }
            }
        }
        if !by_family.iter().any(|x| x.family == e.family) {
            by_family.insert(0, RuleEntry::new(e.family.clone(), e.guard, Vec::new()));
        }
        entries.extend(by_family);
    }
    Ok(RuleSet::new(arity, entries)?.canonical())
}

/// Evaluates `f` on every label of a finite spec and records the results
/// as `At`-guarded constant entries.
fn tabulate<F>(spec: &CoalgebraSpec, arity: usize, f: F) -> Result<RuleSet>
where
    F: Fn(&crate::exactlin::BasisLabel) -> Result<FormalTensor>,
{
    if spec.has_infinite_family() {
        return Err(Error::NotExpressible("cannot tabulate a spec with an infinite family".into()));
    }
    let mut entries = Vec::new();
    for decl in spec.families() {
        for idx in decl.indices_up_to(decl.hi.unwrap_or(decl.lo)) {
            let l = spec.label(&decl.id, idx)?;
            let terms = f(&l)?
                .iter()
                .map(|(key, c)| {
                    RuleTerm::new(
                        IndexPoly::constant(c.clone()),
                        key.iter().map(|x| FactorRef::new(x.family().clone(), Affine::constant(x.index() as i64))).collect(),
                    )
                })
                .collect();
            entries.push(RuleEntry::new(decl.id.clone(), Guard::At(idx), terms));
        }
    }
    RuleSet::new(arity, entries)
}

fn with_fallback<R, T>(spec: &CoalgebraSpec, arity: usize, rules: R, table: T) -> Result<RuleSet>
where
    R: FnOnce() -> Result<RuleSet>,
    T: Fn(&crate::exactlin::BasisLabel) -> Result<FormalTensor>,
{
    match rules() {
        Err(Error::NotExpressible(_)) if !spec.has_infinite_family() => tabulate(spec, arity, table),
        other => other,
    }
}

/// `Δ_N = (id⊗d)Δ`. The coderivation is dropped; the shift bound doubles.
pub fn gelfand_dorfman(spec: &CoalgebraSpec) -> Result<CoalgebraSpec> {
    if !spec.is_differential() {
        return Err(Error::NotDifferential);
    }
    let delta = with_fallback(
        spec,
        2,
        || {
            map_terms(spec.delta_rules(), 2, |e, t| {
                Ok(compose_with_d(spec, &t.factors[1])?
                    .into_iter()
                    .map(|(c, r)| {
                        (e.family.clone(), RuleTerm { sum: t.sum, coeff: t.coeff.mul(&c), factors: vec![t.factors[0].clone(), r] })
                    })
                    .collect())
            })
        },
        |l| spec.d_at(&spec.delta(l)?, 1, 1),
    )?;
    CoalgebraSpec::new(
        &format!("gelfand-dorfman({})", spec.name()),
        spec.is_graded(),
        spec.families().to_vec(),
        delta,
        None,
        2 * spec.shift_bound(),
    )
}

/// `Δ' = (1 − τ)Δ`, graded flip when the spec is graded. Any coderivation
/// is kept.
pub fn antisymmetrize(spec: &CoalgebraSpec) -> Result<CoalgebraSpec> {
    let graded = spec.is_graded();
    let odd = |f: &FactorRef| spec.family(&f.family).is_some_and(|d| d.parity.is_odd());
    let delta = map_terms(spec.delta_rules(), 2, |e, t| {
        let (a, b) = (&t.factors[0], &t.factors[1]);
        let sign = if graded && odd(a) && odd(b) { IndexPoly::one() } else { IndexPoly::one().neg() };
        Ok(vec![
            (e.family.clone(), t.clone()),
            (e.family.clone(), RuleTerm { sum: t.sum, coeff: t.coeff.mul(&sign), factors: vec![b.clone(), a.clone()] }),
        ])
    })?;
    CoalgebraSpec::new(
        &format!("antisymmetrize({})", spec.name()),
        graded,
        spec.families().to_vec(),
        delta,
        spec.coderivation_rules().cloned(),
        spec.shift_bound(),
    )
}

/// Kantor doubling `C ⊕ C̄` of a coassociative, cocommutative differential
/// coalgebra:
///
/// `Δ_J(c) = Σ c₁⊗c₂ + c̄₁⊗(d c₂)‾ − (d c₁)‾⊗c̄₂`,
/// `Δ_J(c̄) = Σ c̄₁⊗c₂ + c₁⊗c̄₂`.
///
/// Bar families are odd. The result is graded and carries no coderivation.
pub fn kantor(spec: &CoalgebraSpec) -> Result<CoalgebraSpec> {
    if !spec.is_differential() {
        return Err(Error::NotDifferential);
    }
    if spec.is_graded() {
        return Err(Error::Precondition("input must be ungraded".into()));
    }
    if spec.families().iter().any(|f| f.id.is_bar()) {
        return Err(Error::Precondition("input already has bar families".into()));
    }
    for report in [
        coassociativity_check(spec, PRECONDITION_RANGE)?,
        cocommutativity_check(spec, PRECONDITION_RANGE, false)?,
        coderivation_check(spec, PRECONDITION_RANGE)?,
    ] {
        if !report.passed() {
            return Err(Error::Precondition(format!("{} fails on indices up to {PRECONDITION_RANGE}", report.name)));
        }
    }
    let mut families: Vec<FamilyDecl> = spec.families().to_vec();
    families.extend(spec.families().iter().map(|f| FamilyDecl::new(f.id.barred(), Parity::Odd, f.lo, f.hi)));

    let rules = || -> Result<RuleSet> {
        let even = map_terms(spec.delta_rules(), 2, |e, t| {
            let (a, b) = (&t.factors[0], &t.factors[1]);
            let mut out = vec![(e.family.clone(), t.clone())];
            for (c, db) in compose_with_d(spec, b)? {
                out.push((e.family.clone(), RuleTerm { sum: t.sum, coeff: t.coeff.mul(&c), factors: vec![a.barred(), db.barred()] }));
            }
            for (c, da) in compose_with_d(spec, a)? {
                out.push((e.family.clone(), RuleTerm { sum: t.sum, coeff: t.coeff.mul(&c).neg(), factors: vec![da.barred(), b.barred()] }));
            }
            Ok(out)
        })?;
        let odd = map_terms(spec.delta_rules(), 2, |e, t| {
            let (a, b) = (&t.factors[0], &t.factors[1]);
            let fam = e.family.barred();
            Ok(vec![
                (fam.clone(), RuleTerm { sum: t.sum, coeff: t.coeff.clone(), factors: vec![a.barred(), b.clone()] }),
                (fam, RuleTerm { sum: t.sum, coeff: t.coeff.clone(), factors: vec![a.clone(), b.barred()] }),
            ])
        })?;
        // entries whose source had no terms still need a (zero) bar entry
        let mut entries: Vec<RuleEntry> = even.entries().to_vec();
        entries.extend(odd.entries().iter().cloned());
        for e in spec.delta_rules().entries() {
            let fam = e.family.barred();
            if !entries.iter().any(|x| x.family == fam && x.guard == e.guard) {
                entries.push(RuleEntry::new(fam, e.guard, Vec::new()));
            }
        }
        Ok(RuleSet::new(2, entries)?.canonical())
    };
    let doubled = CoalgebraSpec::new("kantor-frame", true, families.clone(), RuleSet::new(2, Vec::new())?, None, 0)?;
    let delta = match rules() {
        Err(Error::NotExpressible(_)) if !spec.has_infinite_family() => tabulate(&doubled, 2, |l| kantor_table(spec, &doubled, l))?,
        other => other?,
    };
    CoalgebraSpec::new(&format!("kantor({})", spec.name()), true, families, delta, None, 2 * spec.shift_bound())
}

/// `Δ_J` on one label, evaluated directly from `Δ` and `d`.
fn kantor_table(spec: &CoalgebraSpec, doubled: &CoalgebraSpec, l: &crate::exactlin::BasisLabel) -> Result<FormalTensor> {
    let bar = |x: &crate::exactlin::BasisLabel| doubled.label(&x.family().barred(), x.index());
    let base = spec.label(&l.family().unbarred(), l.index())?;
    let t = spec.delta(&base)?;
    let mut out = FormalTensor::zero(2);
    for (key, c) in t.iter() {
        let (a, b) = (&key[0], &key[1]);
        let lift = |x: &crate::exactlin::BasisLabel| doubled.label(x.family(), x.index());
        if l.family().is_bar() {
            out.add_term(vec![bar(a)?, lift(b)?], c.clone());
            out.add_term(vec![lift(a)?, bar(b)?], c.clone());
        } else {
            out.add_term(vec![lift(a)?, lift(b)?], c.clone());
            for (db, x) in spec.d_label(b)?.iter() {
                out.add_term(vec![bar(a)?, bar(db)?], c * x);
            }
            for (da, x) in spec.d_label(a)?.iter() {
                out.add_term(vec![bar(da)?, bar(b)?], -(c * x));
            }
        }
    }
    Ok(out)
}
