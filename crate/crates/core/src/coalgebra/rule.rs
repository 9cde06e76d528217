//! Affine-index summation rules describing `Δ` and `d` on indexed families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::expr::{Affine, IndexPoly};
use crate::error::Error;
use crate::exactlin::{FamilyId, Scalar};

/// Which input indices `n` an entry applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Guard {
    #[default]
    Always,
    /// `n ≡ residue (mod modulus)`
    Residue { modulus: u64, residue: u64 },
    /// exactly `n == at`
    At(u64),
}

impl Guard {
    pub fn matches(&self, n: u64) -> bool {
        match *self {
            Guard::Always => true,
            Guard::Residue { modulus, residue } => n % modulus == residue,
            Guard::At(at) => n == at,
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::Always => write!(f, "always"),
            Guard::Residue { modulus, residue } => write!(f, "n % {modulus} == {residue}"),
            Guard::At(at) => write!(f, "n == {at}"),
        }
    }
}

/// Summation index `i` running over `from(n) ..= to(n)`; empty when
/// `to < from`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumRange {
    pub from: Affine,
    pub to: Affine,
}

impl SumRange {
    pub fn new(from: Affine, to: Affine) -> Result<SumRange, Error> {
        if from.uses_i() || to.uses_i() {
            return Err(Error::InvalidSpec("summation bounds may only depend on n".into()));
        }
        Ok(SumRange { from, to })
    }
}

/// `family[index(n, i)]`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FactorRef {
    pub family: FamilyId,
    pub index: Affine,
}

impl FactorRef {
    pub fn new(family: FamilyId, index: Affine) -> FactorRef {
        FactorRef { family, index }
    }

    pub fn barred(&self) -> FactorRef {
        FactorRef { family: self.family.barred(), index: self.index }
    }
}

impl fmt::Display for FactorRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.family, self.index)
    }
}

impl FromStr for FactorRef {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let open = s.find('[').ok_or_else(|| Error::Parse(format!("factor `{s}` must look like family[index]")))?;
        let inner = s[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("factor `{s}` is missing `]`")))?;
        Ok(FactorRef { family: s[..open].parse()?, index: inner.parse()? })
    }
}

impl TryFrom<String> for FactorRef {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<FactorRef> for String {
    fn from(f: FactorRef) -> String {
        f.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleTerm {
    pub sum: Option<SumRange>,
    pub coeff: IndexPoly,
    pub factors: Vec<FactorRef>,
}

impl RuleTerm {
    pub fn new(coeff: IndexPoly, factors: Vec<FactorRef>) -> RuleTerm {
        RuleTerm { sum: None, coeff, factors }
    }

    pub fn summed(sum: SumRange, coeff: IndexPoly, factors: Vec<FactorRef>) -> RuleTerm {
        RuleTerm { sum: Some(sum), coeff, factors }
    }

    fn validate(&self, arity: usize) -> Result<(), Error> {
        if self.factors.len() != arity {
            return Err(Error::InvalidSpec(format!("term has {} factors, expected {arity}", self.factors.len())));
        }
        if self.sum.is_none() && (self.coeff.uses_i() || self.factors.iter().any(|f| f.index.uses_i())) {
            return Err(Error::InvalidSpec("summation index `i` used outside a sum".into()));
        }
        Ok(())
    }

    /// Expands the term at input index `n` into
    /// `(coefficient, [(family, raw index)])` items.
    pub fn expand(&self, n: i64) -> Vec<(Scalar, Vec<(FamilyId, i64)>)> {
        let (lo, hi) = match &self.sum {
            Some(r) => (r.from.eval(n, 0), r.to.eval(n, 0)),
            None => (0, 0),
        };
        let mut out = Vec::new();
        for i in lo..=hi {
            let c = self.coeff.eval(n, i);
            if num_traits::Zero::is_zero(&c) {
                continue;
            }
            let factors = self.factors.iter().map(|f| (f.family.clone(), f.index.eval(n, i))).collect();
            out.push((c, factors));
        }
        out
    }
}

impl fmt::Display for RuleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = &self.sum {
            write!(f, "Σ[i={}..{}] ", r.from, r.to)?;
        }
        write!(f, "({})·", self.coeff)?;
        let parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleEntry {
    pub family: FamilyId,
    pub guard: Guard,
    pub terms: Vec<RuleTerm>,
}

impl RuleEntry {
    pub fn new(family: FamilyId, guard: Guard, terms: Vec<RuleTerm>) -> RuleEntry {
        RuleEntry { family, guard, terms }
    }
}

type TermShape = (Option<SumRange>, Vec<FactorRef>);

/// A list of rule entries; the image of `family[n]` is the sum over all
/// entries of that family whose guard matches `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleSet {
    arity: usize,
    entries: Vec<RuleEntry>,
}

impl RuleSet {
    pub fn new(arity: usize, entries: Vec<RuleEntry>) -> Result<RuleSet, Error> {
        for e in &entries {
            if let Guard::Residue { modulus, residue } = e.guard {
                if modulus == 0 || residue >= modulus {
                    return Err(Error::InvalidSpec(format!("bad residue guard on `{}`", e.family)));
                }
            }
            for t in &e.terms {
                t.validate(arity)?;
            }
        }
        Ok(RuleSet { arity, entries })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[RuleEntry] {
        &self.entries
    }

    pub fn entries_for<'a>(&'a self, family: &'a FamilyId) -> impl Iterator<Item = &'a RuleEntry> + 'a {
        self.entries.iter().filter(move |e| &e.family == family)
    }

    pub fn matching<'a>(&'a self, family: &'a FamilyId, n: u64) -> impl Iterator<Item = &'a RuleEntry> + 'a {
        self.entries_for(family).filter(move |e| e.guard.matches(n))
    }

    /// Same function, normalized presentation: entries merged per
    /// `(family, guard)` and sorted, terms with identical shape merged by
    /// adding coefficients, zero terms dropped.
    pub fn canonical(&self) -> RuleSet {
        let mut grouped: BTreeMap<(FamilyId, Guard), BTreeMap<TermShape, IndexPoly>> = BTreeMap::new();
        for e in &self.entries {
            let slot = grouped.entry((e.family.clone(), e.guard)).or_default();
            for t in &e.terms {
                let key = (t.sum, t.factors.clone());
                let c = slot.entry(key).or_default();
                *c = c.add(&t.coeff);
            }
        }
        let entries = grouped
            .into_iter()
            .map(|((family, guard), terms)| RuleEntry {
                family,
                guard,
                terms: terms
                    .into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|((sum, factors), coeff)| RuleTerm { sum, coeff, factors })
                    .collect(),
            })
            .collect();
        RuleSet { arity: self.arity, entries }
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{}[n] ({}) ->", e.family, e.guard)?;
            if e.terms.is_empty() {
                write!(f, " 0")?;
            }
            for (k, t) in e.terms.iter().enumerate() {
                write!(f, "{}{t}", if k == 0 { " " } else { " + " })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
