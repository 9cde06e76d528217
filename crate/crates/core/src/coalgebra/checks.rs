use std::fmt;

use rayon::prelude::*;

use super::spec::CoalgebraSpec;
use crate::error::{Error, Result};
use crate::exactlin::{BasisLabel, FamilyId, FormalTensor};

/// Witnesses kept per report; `failures` still counts all of them.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: Option<BasisLabel>,
    pub context: String,
    pub residual: Option<FormalTensor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedInterval {
    pub family: FamilyId,
    pub lo: u64,
    pub hi: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    pub checked: Vec<CheckedInterval>,
    pub witnesses: Vec<Witness>,
    pub failures: usize,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &str) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            verdict: Verdict::Pass,
            checked: Vec::new(),
            witnesses: Vec::new(),
            failures: 0,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn with_intervals(mut self, intervals: Vec<(FamilyId, u64, u64)>) -> CheckReport {
        self.checked = intervals.into_iter().map(|(family, lo, hi)| CheckedInterval { family, lo, hi }).collect();
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn fail(&mut self, w: Witness) {
        self.verdict = Verdict::Fail;
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    /// Largest index covered in every checked family, as shown in summaries.
    pub fn max_checked(&self) -> Option<u64> {
        self.checked.iter().map(|c| c.hi).max()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.verdict)?;
        if !self.checked.is_empty() {
            let parts: Vec<String> = self.checked.iter().map(|c| format!("{}[{}..={}]", c.family, c.lo, c.hi)).collect();
            write!(f, " (verified on {})", parts.join(", "))?;
        }
        if self.failures > 0 {
            write!(f, ", {} failing", self.failures)?;
        }
        for w in &self.witnesses {
            write!(f, "\n  witness")?;
            if let Some(l) = &w.label {
                write!(f, " {l}")?;
            }
            if !w.context.is_empty() {
                write!(f, " [{}]", w.context)?;
            }
            if let Some(r) = &w.residual {
                write!(f, ": {r}")?;
            }
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

/// Evaluates `residual` on every label with index at most `max` (in
/// parallel) and fails on each nonzero result.
pub fn residual_check<F>(name: &str, spec: &CoalgebraSpec, max: u64, residual: F) -> Result<CheckReport>
where
    F: Fn(&BasisLabel) -> Result<FormalTensor> + Sync,
{
    let labels = spec.labels_up_to(max);
    let results: Vec<Result<FormalTensor>> = labels.par_iter().map(&residual).collect();
    let mut report = CheckReport::new(name).with_intervals(spec.intervals_up_to(max));
    for (l, r) in labels.iter().zip(results) {
        let r = r?;
        if !r.is_zero() {
            report.fail(Witness { label: Some(l.clone()), context: String::new(), residual: Some(r) });
        }
    }
    Ok(report)
}

/// `Δd − (d⊗id + id⊗d)Δ` on every label up to `max`.
pub fn coderivation_check(spec: &CoalgebraSpec, max: u64) -> Result<CheckReport> {
    if !spec.is_differential() {
        return Err(Error::NotDifferential);
    }
    residual_check("coderivation", spec, max, |l| {
        let lhs = spec.delta_linear(&spec.d_label(l)?)?;
        let dl = spec.delta(l)?;
        let rhs = spec.d_at(&dl, 0, 1)?.add(&spec.d_at(&dl, 1, 1)?)?;
        lhs.sub(&rhs)
    })
}

/// `Δ − τΔ`, with the graded flip when `graded`.
pub fn cocommutativity_check(spec: &CoalgebraSpec, max: u64, graded: bool) -> Result<CheckReport> {
    let name = if graded { "supercocommutativity" } else { "cocommutativity" };
    residual_check(name, spec, max, |l| {
        let t = spec.delta(l)?;
        t.sub(&t.flip(0, graded)?)
    })
}

/// `Δ + τΔ`, with the graded flip when `graded`.
pub fn anticocommutativity_check(spec: &CoalgebraSpec, max: u64, graded: bool) -> Result<CheckReport> {
    residual_check("anticocommutativity", spec, max, |l| {
        let t = spec.delta(l)?;
        t.add(&t.flip(0, graded)?)
    })
}

/// `(Δ⊗id − id⊗Δ)Δ`.
pub fn coassociativity_check(spec: &CoalgebraSpec, max: u64) -> Result<CheckReport> {
    residual_check("coassociativity", spec, max, |l| {
        let t = spec.delta(l)?;
        spec.delta_at(&t, 0)?.sub(&spec.delta_at(&t, 1)?)
    })
}

/// Checks that `Δ` and `d` stay within the declared shift bound `s` on
/// labels up to `max`.
///
/// Only infinite families are constrained. For an input `b_n` of an
/// infinite family, every term of `Δ(b_n)` must involve an infinite-family
/// factor and the sum of its infinite-family indices must lie in
/// `[n − s, n + s]`; `d(b_n)` may only produce infinite-family labels with
/// index in `[n − s, n + s]`. Rule evaluation errors count as failures.
pub fn validate_shift_bound(spec: &CoalgebraSpec, max: u64) -> CheckReport {
    let s = spec.shift_bound() as i64;
    let labels: Vec<BasisLabel> = spec
        .labels_up_to(max)
        .into_iter()
        .filter(|l| spec.family(l.family()).is_some_and(|f| f.is_infinite()))
        .collect();
    let infinite = |l: &BasisLabel| spec.family(l.family()).is_some_and(|f| f.is_infinite());
    let problems: Vec<Vec<String>> = labels
        .par_iter()
        .map(|l| {
            let n = l.index() as i64;
            let mut found = Vec::new();
            match spec.delta(l) {
                Ok(t) => {
                    for (key, _) in t.iter() {
                        let inf: Vec<i64> = key.iter().filter(|x| infinite(x)).map(|x| x.index() as i64).collect();
                        let sigma: i64 = inf.iter().sum();
                        if inf.is_empty() {
                            found.push(format!("Δ term {} has no infinite-family factor", key_string(key)));
                        } else if (sigma - n).abs() > s {
                            found.push(format!("Δ term {} shifts the index by {}", key_string(key), sigma - n));
                        }
                    }
                }
                Err(e) => found.push(format!("Δ: {e}")),
            }
            if spec.is_differential() {
                match spec.d_label(l) {
                    Ok(v) => {
                        for (x, _) in v.iter() {
                            if !infinite(x) {
                                found.push(format!("d produces finite-family label {x}"));
                            } else if (x.index() as i64 - n).abs() > s {
                                found.push(format!("d produces {x}, shift {}", x.index() as i64 - n));
                            }
                        }
                    }
                    Err(e) => found.push(format!("d: {e}")),
                }
            }
            found
        })
        .collect();
    let mut report = CheckReport::new("shift-bound").with_intervals(spec.intervals_up_to(max));
    report.note(format!("declared shift bound s = {}", spec.shift_bound()));
    for (l, found) in labels.iter().zip(problems) {
        for p in found {
            report.fail(Witness { label: Some(l.clone()), context: p, residual: None });
        }
    }
    report
}

fn key_string(key: &[BasisLabel]) -> String {
    key.iter().map(ToString::to_string).collect::<Vec<_>>().join("⊗")
}
