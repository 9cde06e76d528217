use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{BasisLabel, Scalar};

/// Finite rational combination of basis labels, canonical by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FormalVector {
    terms: BTreeMap<BasisLabel, Scalar>,
}

impl FormalVector {
    pub fn zero() -> FormalVector {
        FormalVector::default()
    }

    pub fn basis(label: BasisLabel) -> FormalVector {
        let mut terms = BTreeMap::new();
        terms.insert(label, Scalar::one());
        FormalVector { terms }
    }

    pub fn from_terms<I>(iter: I) -> FormalVector
    where
        I: IntoIterator<Item = (BasisLabel, Scalar)>,
    {
        let mut v = FormalVector::zero();
        for (l, c) in iter {
            v.add_term(l, c);
        }
        v
    }

    pub fn add_term(&mut self, label: BasisLabel, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(label) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FormalVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (l, x) in &other.terms {
            self.add_term(l.clone(), x * c);
        }
    }

    pub fn add(&self, other: &FormalVector) -> FormalVector {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &FormalVector) -> FormalVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn scale(&self, c: &Scalar) -> FormalVector {
        if c.is_zero() {
            return FormalVector::zero();
        }
        FormalVector { terms: self.terms.iter().map(|(l, x)| (l.clone(), x * c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, label: &BasisLabel) -> Scalar {
        self.terms.get(label).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn get(&self, label: &BasisLabel) -> Option<&Scalar> {
        self.terms.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &Scalar)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &BasisLabel> {
        self.terms.keys()
    }

    /// Smallest label in canonical order; the pivot used by elimination.
    pub fn leading(&self) -> Option<(&BasisLabel, &Scalar)> {
        self.terms.iter().next()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.terms.keys().map(BasisLabel::index).max()
    }
}

impl fmt::Display for FormalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (l, c)) in self.terms.iter().enumerate() {
            write_coeff(f, c, k == 0)?;
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub(super) fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Scalar, first: bool) -> fmt::Result {
    let neg = c < &Scalar::zero();
    let abs = if neg { -c.clone() } else { c.clone() };
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if !abs.is_one() {
        write!(f, "{abs}*")?;
    }
    Ok(())
}
