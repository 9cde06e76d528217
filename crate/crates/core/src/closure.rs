//! Subcoalgebras generated by vectors.
//!
//! A subspace `B` is a subcoalgebra exactly when it is closed under the
//! left and right actions of the dual, `α·a = Σ a₁α(a₂)` and
//! `a·α = Σ α(a₁)a₂`. For a single vector these actions span the factors
//! of a minimal-rank decomposition of `Δ(a)`, so closure is computed by
//! repeated extraction rather than by enumerating functionals. Specs with a
//! coderivation are also closed under `d`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalgebra::{CheckReport, CoalgebraSpec, Witness};
use crate::error::{Error, Result};
use crate::exactlin::{extract_components, int, BasisLabel, EchelonBasis, FormalVector, Side};

/// A subspace kept in reduced echelon form; equal spans have equal
/// representations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subspace {
    basis: EchelonBasis,
}

impl Subspace {
    pub fn new() -> Subspace {
        Subspace::default()
    }

    pub fn span<'a, I>(vectors: I) -> Subspace
    where
        I: IntoIterator<Item = &'a FormalVector>,
    {
        Subspace { basis: EchelonBasis::from_vectors(vectors) }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn contains(&self, v: &FormalVector) -> bool {
        self.basis.contains(v)
    }

    pub fn contains_label(&self, l: &BasisLabel) -> bool {
        self.basis.contains(&FormalVector::basis(l.clone()))
    }

    /// Adds `v`; returns its new leading label if the dimension grew.
    pub fn insert(&mut self, v: &FormalVector) -> Option<BasisLabel> {
        self.basis.insert(v)
    }

    /// Echelon rows, ordered by leading label.
    pub fn vectors(&self) -> impl Iterator<Item = &FormalVector> {
        self.basis.rows()
    }

    pub fn leading_labels(&self) -> impl Iterator<Item = &BasisLabel> {
        self.basis.pivots()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.vectors().all(|v| other.contains(v))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vectors().map(ToString::to_string).collect();
        write!(f, "span{{{}}}", parts.join(", "))
    }
}

/// Vectors that the actions of the dual (and `d`) produce from `v`.
fn images(spec: &CoalgebraSpec, v: &FormalVector) -> Result<Vec<FormalVector>> {
    let mut out = Vec::new();
    // the decomposition has minimal rank, so both factor spans come out of
    // one extraction
    for (a, b) in extract_components(&spec.delta_linear(v)?, Side::Left)? {
        out.push(a);
        out.push(b);
    }
    if spec.is_differential() {
        out.push(spec.apply_d(v)?);
    }
    Ok(out)
}

/// One round of closure: every echelon vector contributes the factors of
/// its comultiplication and, for differential specs, its image under `d`.
pub fn bimodule_step(spec: &CoalgebraSpec, s: &Subspace) -> Result<Subspace> {
    let mut out = s.clone();
    for v in s.vectors() {
        for w in images(spec, v)? {
            out.insert(&w);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: usize,
    pub max_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 64, max_dim: 4096 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureVerdict {
    Closed(usize),
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureTrace {
    /// `dims[0]` is the dimension of the span of the generators, `dims[k]`
    /// the dimension after `k` steps.
    pub dims: Vec<usize>,
    /// Leading labels of the vectors that step `k + 1` added.
    pub added: Vec<Vec<BasisLabel>>,
    pub verdict: ClosureVerdict,
    pub subspace: Subspace,
}

impl ClosureTrace {
    pub fn steps(&self) -> usize {
        self.added.len()
    }
}

/// Iterates [`bimodule_step`] from the span of `generators` until nothing
/// new appears or the budget runs out. Only the vectors added in the
/// previous step are expanded, which yields the same spans step by step.
pub fn generated_subcoalgebra(spec: &CoalgebraSpec, generators: &[FormalVector], budget: Budget) -> Result<ClosureTrace> {
    if budget.max_steps == 0 || budget.max_dim == 0 {
        return Err(Error::EmptyBudget);
    }
    for g in generators {
        for l in g.labels() {
            spec.label(l.family(), l.index())?;
        }
    }
    let mut space = Subspace::new();
    let mut frontier = Vec::new();
    for g in generators {
        if space.insert(g).is_some() {
            frontier.push(g.clone());
        }
    }
    let mut dims = vec![space.dim()];
    let mut added = Vec::new();
    loop {
        if added.len() == budget.max_steps || space.dim() > budget.max_dim {
            return Ok(ClosureTrace { dims, added, verdict: ClosureVerdict::BudgetExceeded, subspace: space });
        }
        let mut next = Vec::new();
        let mut leads = Vec::new();
        for v in &frontier {
            for w in images(spec, v)? {
                if let Some(lead) = space.insert(&w) {
                    leads.push(lead);
                    next.push(w);
                }
            }
        }
        dims.push(space.dim());
        let done = leads.is_empty();
        added.push(leads);
        if done {
            let dim = space.dim();
            return Ok(ClosureTrace { dims, added, verdict: ClosureVerdict::Closed(dim), subspace: space });
        }
        frontier = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalFiniteness {
    FiniteDimensional(usize),
    /// The budget ran out while the closure was still growing. This is
    /// evidence of an infinite-dimensional subcoalgebra, not a proof.
    DivergenceEvidence(ClosureTrace),
}

pub fn local_finiteness_probe(spec: &CoalgebraSpec, generators: &[FormalVector], budget: Budget) -> Result<LocalFiniteness> {
    let trace = generated_subcoalgebra(spec, generators, budget)?;
    Ok(match trace.verdict {
        ClosureVerdict::Closed(d) => LocalFiniteness::FiniteDimensional(d),
        ClosureVerdict::BudgetExceeded => LocalFiniteness::DivergenceEvidence(trace),
    })
}

/// Closure restricted to vectors supported on indices at most `horizon`.
/// Images reaching past the horizon are dropped, so the result is a
/// subspace of the true closure.
fn truncated_closure(spec: &CoalgebraSpec, start: &FormalVector, horizon: u64) -> Result<Subspace> {
    let mut space = Subspace::new();
    let mut queue = vec![start.clone()];
    space.insert(start);
    while let Some(v) = queue.pop() {
        for w in images(spec, &v)? {
            if w.max_index().is_some_and(|m| m > horizon) {
                continue;
            }
            if space.insert(&w).is_some() {
                queue.push(w);
            }
        }
    }
    Ok(space)
}

/// Evidence for simplicity at a finite truncation.
///
/// Starting from every label with index at most `horizon` and from
/// `trials` random vectors supported there, the truncated closure must
/// contain every label with index at most `horizon − s` (the verified
/// window, `s` the shift bound). Passing does not prove simplicity.
pub fn simplicity_probe(spec: &CoalgebraSpec, horizon: u64, trials: usize, seed: u64) -> Result<CheckReport> {
    let s = spec.shift_bound();
    if horizon <= s {
        return Err(Error::HorizonTooSmall { horizon, detail: format!("the verified window is horizon − {s}, which is empty") });
    }
    let window = horizon - s;
    let targets = spec.labels_up_to(window);
    let pool = spec.labels_up_to(horizon);

    let mut starts: Vec<(String, FormalVector)> = pool.iter().map(|l| (l.to_string(), FormalVector::basis(l.clone()))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..trials {
        let mut v = FormalVector::zero();
        while v.is_zero() {
            for _ in 0..rng.gen_range(1..=3) {
                let l = pool[rng.gen_range(0..pool.len())].clone();
                v.add_term(l, int(rng.gen_range(-3..=3)));
            }
        }
        starts.push((format!("trial {k}: {v}"), v));
    }

    let mut report = CheckReport::new("simplicity").with_intervals(spec.intervals_up_to(window));
    for (what, v) in &starts {
        let closure = truncated_closure(spec, v, horizon)?;
        let missing: Vec<String> = targets.iter().filter(|l| !closure.contains_label(l)).map(ToString::to_string).collect();
        if !missing.is_empty() {
            let shown: Vec<String> = missing.iter().take(6).cloned().collect();
            let more = if missing.len() > 6 { format!(" and {} more", missing.len() - 6) } else { String::new() };
            report.fail(Witness {
                label: None,
                context: format!("closure of {what} has dimension {} and misses {}{more}", closure.dim(), shown.join(", ")),
                residual: None,
            });
        }
    }
    report.note(format!("verified window: labels with index ≤ {window} (horizon {horizon}, shift bound {s})"));
    report.note(format!("{} starting vectors: every label up to the horizon and {trials} random vectors, seed {seed}", starts.len()));
    report.note("evidence at a finite truncation, not a proof of simplicity");
    Ok(report)
}
