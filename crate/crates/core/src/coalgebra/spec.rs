use std::collections::{BTreeMap, BTreeSet};

use super::rule::RuleSet;
use crate::error::{Error, Result};
use crate::exactlin::{parse_label_ref, BasisLabel, FamilyId, FormalTensor, FormalVector, Parity};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyDecl {
    pub id: FamilyId,
    pub parity: Parity,
    pub lo: u64,
    /// `None` for an infinite family `[lo, ∞)`.
    pub hi: Option<u64>,
}

impl FamilyDecl {
    pub fn new(id: FamilyId, parity: Parity, lo: u64, hi: Option<u64>) -> FamilyDecl {
        FamilyDecl { id, parity, lo, hi }
    }

    pub fn single(name: &str) -> FamilyDecl {
        FamilyDecl::new(FamilyId::new(name), Parity::Even, 0, Some(0))
    }

    pub fn infinite(name: &str, lo: u64) -> FamilyDecl {
        FamilyDecl::new(FamilyId::new(name), Parity::Even, lo, None)
    }

    pub fn is_infinite(&self) -> bool {
        self.hi.is_none()
    }

    pub fn contains(&self, index: u64) -> bool {
        index >= self.lo && self.hi.is_none_or(|h| index <= h)
    }

    /// Indices `lo ..= min(hi, max)`.
    pub fn indices_up_to(&self, max: u64) -> std::ops::RangeInclusive<u64> {
        let top = self.hi.map_or(max, |h| h.min(max));
        self.lo..=top
    }
}

/// A coalgebra `(C, Δ)` on a countable basis, optionally with a coderivation
/// `d`. Immutable once built; every rule references declared families only.
#[derive(Clone, Debug)]
pub struct CoalgebraSpec {
    name: String,
    graded: bool,
    families: Vec<FamilyDecl>,
    lookup: BTreeMap<FamilyId, usize>,
    delta: RuleSet,
    coderivation: Option<RuleSet>,
    shift_bound: u64,
}

impl CoalgebraSpec {
    pub fn new(
        name: &str,
        graded: bool,
        families: Vec<FamilyDecl>,
        delta: RuleSet,
        coderivation: Option<RuleSet>,
        shift_bound: u64,
    ) -> Result<CoalgebraSpec> {
        let mut lookup = BTreeMap::new();
        for (k, f) in families.iter().enumerate() {
            if lookup.insert(f.id.clone(), k).is_some() {
                return Err(Error::InvalidSpec(format!("family `{}` declared twice", f.id)));
            }
            if f.hi.is_some_and(|h| h < f.lo) {
                return Err(Error::InvalidSpec(format!("family `{}` has an empty range", f.id)));
            }
            if !graded && f.parity.is_odd() {
                return Err(Error::InvalidSpec(format!("family `{}` is odd but the spec is not graded", f.id)));
            }
        }
        if delta.arity() != 2 {
            return Err(Error::InvalidSpec("comultiplication rules must have two factors".into()));
        }
        if coderivation.as_ref().is_some_and(|d| d.arity() != 1) {
            return Err(Error::InvalidSpec("coderivation rules must have one factor".into()));
        }
        for rules in std::iter::once(&delta).chain(coderivation.as_ref()) {
            for e in rules.entries() {
                if !lookup.contains_key(&e.family) {
                    return Err(Error::UnknownFamily(e.family.to_string()));
                }
                for t in &e.terms {
                    for f in &t.factors {
                        if !lookup.contains_key(&f.family) {
                            return Err(Error::UnknownFamily(f.family.to_string()));
                        }
                    }
                }
            }
        }
        Ok(CoalgebraSpec { name: name.to_string(), graded, families, lookup, delta, coderivation, shift_bound })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn is_differential(&self) -> bool {
        self.coderivation.is_some()
    }

    pub fn families(&self) -> &[FamilyDecl] {
        &self.families
    }

    pub fn family(&self, id: &FamilyId) -> Option<&FamilyDecl> {
        self.lookup.get(id).map(|&k| &self.families[k])
    }

    pub fn shift_bound(&self) -> u64 {
        self.shift_bound
    }

    pub fn delta_rules(&self) -> &RuleSet {
        &self.delta
    }

    pub fn coderivation_rules(&self) -> Option<&RuleSet> {
        self.coderivation.as_ref()
    }

    pub fn has_infinite_family(&self) -> bool {
        self.families.iter().any(FamilyDecl::is_infinite)
    }

    pub fn with_name(&self, name: &str) -> CoalgebraSpec {
        CoalgebraSpec { name: name.to_string(), ..self.clone() }
    }

    pub fn with_shift_bound(&self, s: u64) -> CoalgebraSpec {
        CoalgebraSpec { shift_bound: s, ..self.clone() }
    }

    /// Same rules, parities reinterpreted as meaningful (all-even specs
    /// become trivially graded).
    pub fn as_graded(&self) -> CoalgebraSpec {
        CoalgebraSpec { graded: true, ..self.clone() }
    }

    pub fn with_delta(&self, delta: RuleSet) -> Result<CoalgebraSpec> {
        CoalgebraSpec::new(&self.name, self.graded, self.families.clone(), delta, self.coderivation.clone(), self.shift_bound)
    }

    pub fn with_coderivation(&self, d: Option<RuleSet>) -> Result<CoalgebraSpec> {
        CoalgebraSpec::new(&self.name, self.graded, self.families.clone(), self.delta.clone(), d, self.shift_bound)
    }

    /// The label `family[index]`, checked against the declared range.
    pub fn label(&self, family: &FamilyId, index: u64) -> Result<BasisLabel> {
        let decl = self.family(family).ok_or_else(|| Error::UnknownFamily(family.to_string()))?;
        let l = BasisLabel::new(family.clone(), index, decl.parity);
        if !decl.contains(index) {
            return Err(Error::out_of_range(&l));
        }
        Ok(l)
    }

    /// Parses `family:index` (or `~family:index`).
    pub fn parse_label(&self, s: &str) -> Result<BasisLabel> {
        let (family, index) = parse_label_ref(s)?;
        self.label(&family, index)
    }

    /// Parses a vector such as `f:1`, `2*x:0 - 1/2*x:3`, `~f:2 + e:0`.
    pub fn parse_vector(&self, s: &str) -> Result<FormalVector> {
        let mut v = FormalVector::zero();
        let mut rest = s.trim();
        if rest.is_empty() {
            return Err(Error::Parse("empty vector".into()));
        }
        let mut sign = crate::exactlin::int(1);
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.trim_start();
        }
        loop {
            let (term, tail) = split_term(rest);
            let (coeff, label) = match term.split_once('*') {
                Some((c, l)) => (
                    crate::exactlin::parse_scalar(c).ok_or_else(|| Error::Parse(format!("bad coefficient `{c}`")))?,
                    l,
                ),
                None => (crate::exactlin::int(1), term),
            };
            v.add_term(self.parse_label(label)?, &sign * coeff);
            match tail {
                None => break,
                Some((neg, next)) => {
                    sign = crate::exactlin::int(if neg { -1 } else { 1 });
                    rest = next;
                }
            }
        }
        Ok(v)
    }

    /// All labels with index at most `max`, in canonical order.
    pub fn labels_up_to(&self, max: u64) -> Vec<BasisLabel> {
        let mut out: Vec<BasisLabel> = self
            .families
            .iter()
            .flat_map(|f| f.indices_up_to(max).map(move |i| BasisLabel::new(f.id.clone(), i, f.parity)))
            .collect();
        out.sort();
        out
    }

    /// Per-family index intervals covered by `labels_up_to(max)`.
    pub fn intervals_up_to(&self, max: u64) -> Vec<(FamilyId, u64, u64)> {
        let mut out: Vec<(FamilyId, u64, u64)> = self
            .families
            .iter()
            .filter_map(|f| {
                let r = f.indices_up_to(max);
                (!r.is_empty()).then(|| (f.id.clone(), *r.start(), *r.end()))
            })
            .collect();
        out.sort();
        out
    }

    fn evaluate(&self, rules: &RuleSet, l: &BasisLabel) -> Result<FormalTensor> {
        let decl = self.family(l.family()).ok_or_else(|| Error::UnknownFamily(l.family().to_string()))?;
        if !decl.contains(l.index()) {
            return Err(Error::out_of_range(l));
        }
        let n = l.index();
        let mut out = FormalTensor::zero(rules.arity());
        let mut covered = false;
        for entry in rules.matching(l.family(), n) {
            covered = true;
            for term in &entry.terms {
                for (c, factors) in term.expand(n as i64) {
                    let mut key = Vec::with_capacity(factors.len());
                    for (family, index) in factors {
                        let fd = &self.families[self.lookup[&family]];
                        if index < 0 || !fd.contains(index as u64) {
                            return Err(Error::RangeViolation { input: l.to_string(), family, index });
                        }
                        key.push(BasisLabel::new(family, index as u64, fd.parity));
                    }
                    out.add_term(key, c);
                }
            }
        }
        if !covered {
            return Err(Error::MissingRule(l.to_string()));
        }
        Ok(out)
    }

    /// `Δ(l)` as an arity-2 tensor.
    pub fn delta(&self, l: &BasisLabel) -> Result<FormalTensor> {
        self.evaluate(&self.delta, l)
    }

    pub fn delta_linear(&self, v: &FormalVector) -> Result<FormalTensor> {
        let mut out = FormalTensor::zero(2);
        for (l, c) in v.iter() {
            out.add_scaled(&self.delta(l)?, c)?;
        }
        Ok(out)
    }

    pub fn d_label(&self, l: &BasisLabel) -> Result<FormalVector> {
        let rules = self.coderivation.as_ref().ok_or(Error::NotDifferential)?;
        self.evaluate(rules, l)?.to_vector()
    }

    pub fn apply_d(&self, v: &FormalVector) -> Result<FormalVector> {
        let mut out = FormalVector::zero();
        for (l, c) in v.iter() {
            out.add_scaled(&self.d_label(l)?, c);
        }
        Ok(out)
    }

    /// `d^times` applied to tensor factor `pos`.
    pub fn d_at(&self, t: &FormalTensor, pos: usize, times: u32) -> Result<FormalTensor> {
        if pos >= t.arity() {
            return Err(Error::PositionOutOfRange { position: pos, arity: t.arity() });
        }
        let mut cur = t.clone();
        for _ in 0..times {
            let mut next = FormalTensor::zero(cur.arity());
            for (key, c) in cur.iter() {
                for (l, x) in self.d_label(&key[pos])?.iter() {
                    let mut k = key.clone();
                    k[pos] = l.clone();
                    next.add_term(k, c * x);
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// `Δ` applied to tensor factor `pos`; the arity grows by one.
    pub fn delta_at(&self, t: &FormalTensor, pos: usize) -> Result<FormalTensor> {
        if pos >= t.arity() {
            return Err(Error::PositionOutOfRange { position: pos, arity: t.arity() });
        }
        let mut out = FormalTensor::zero(t.arity() + 1);
        for (key, c) in t.iter() {
            for (pair, x) in self.delta(&key[pos])?.iter() {
                let mut k = Vec::with_capacity(key.len() + 1);
                k.extend_from_slice(&key[..pos]);
                k.extend_from_slice(pair);
                k.extend_from_slice(&key[pos + 1..]);
                out.add_term(k, c * x);
            }
        }
        Ok(out)
    }

    /// Structural equality of rule systems after canonicalization
    /// (shift bound and name are not compared).
    pub fn same_rules(&self, other: &CoalgebraSpec) -> bool {
        let fams = |s: &CoalgebraSpec| s.families.iter().cloned().map(|f| (f.id.clone(), f)).collect::<BTreeMap<_, _>>();
        self.graded == other.graded
            && fams(self) == fams(other)
            && self.delta.canonical() == other.delta.canonical()
            && self.coderivation.as_ref().map(RuleSet::canonical) == other.coderivation.as_ref().map(RuleSet::canonical)
    }

    /// First label with index at most `max` on which `Δ` or `d` differ
    /// (either in value or in whether evaluation succeeds).
    pub fn first_disagreement(&self, other: &CoalgebraSpec, max: u64) -> Option<BasisLabel> {
        let mine: BTreeSet<BasisLabel> = self.labels_up_to(max).into_iter().collect();
        let theirs: BTreeSet<BasisLabel> = other.labels_up_to(max).into_iter().collect();
        if let Some(l) = mine.symmetric_difference(&theirs).next() {
            return Some(l.clone());
        }
        if self.is_differential() != other.is_differential() {
            return mine.into_iter().next();
        }
        mine.into_iter().find(|l| {
            self.delta(l).ok() != other.delta(l).ok()
                || (self.is_differential() && self.d_label(l).ok() != other.d_label(l).ok())
        })
    }

    pub fn agree_on(&self, other: &CoalgebraSpec, max: u64) -> bool {
        self.first_disagreement(other, max).is_none()
    }
}

/// Splits `"a + b - c"` into the first term and `(next is negative, rest)`.
fn split_term(s: &str) -> (&str, Option<(bool, &str)>) {
    let bytes = s.as_bytes();
    for (k, &b) in bytes.iter().enumerate() {
        if k > 0 && (b == b'+' || (b == b'-' && bytes[k - 1] == b' ')) {
            return (s[..k].trim(), Some((b == b'-', s[k + 1..].trim_start())));
        }
    }
    (s.trim(), None)
}
