use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::vector::write_coeff;
use super::{BasisLabel, FormalVector, Scalar};
use crate::error::{Error, Result};

/// Finite rational combination of k-tuples of basis labels.
///
/// The zero tensor of each arity is the empty term map tagged with its arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalTensor {
    arity: usize,
    terms: BTreeMap<Vec<BasisLabel>, Scalar>,
}

impl FormalTensor {
    pub fn zero(arity: usize) -> FormalTensor {
        FormalTensor { arity, terms: BTreeMap::new() }
    }

    pub fn basis(labels: Vec<BasisLabel>) -> FormalTensor {
        let arity = labels.len();
        let mut terms = BTreeMap::new();
        terms.insert(labels, Scalar::one());
        FormalTensor { arity, terms }
    }

    pub fn from_terms<I>(arity: usize, iter: I) -> Result<FormalTensor>
    where
        I: IntoIterator<Item = (Vec<BasisLabel>, Scalar)>,
    {
        let mut t = FormalTensor::zero(arity);
        for (key, c) in iter {
            if key.len() != arity {
                return Err(Error::ArityMismatch { left: arity, right: key.len() });
            }
            t.add_term(key, c);
        }
        Ok(t)
    }

    pub fn from_vector(v: &FormalVector) -> FormalTensor {
        FormalTensor {
            arity: 1,
            terms: v.iter().map(|(l, c)| (vec![l.clone()], c.clone())).collect(),
        }
    }

    pub fn to_vector(&self) -> Result<FormalVector> {
        if self.arity != 1 {
            return Err(Error::WrongArity { expected: 1, found: self.arity });
        }
        Ok(FormalVector::from_terms(self.terms.iter().map(|(k, c)| (k[0].clone(), c.clone()))))
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<BasisLabel>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &[BasisLabel]) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds one term; the caller guarantees `key.len() == arity`.
    pub(crate) fn add_term(&mut self, key: Vec<BasisLabel>, coeff: Scalar) {
        debug_assert_eq!(key.len(), self.arity);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FormalTensor, c: &Scalar) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: other.arity });
        }
        if c.is_zero() {
            return Ok(());
        }
        let unit = c.is_one();
        for (k, x) in &other.terms {
            let v = if unit { x.clone() } else { x * c };
            self.add_term(k.clone(), v);
        }
        Ok(())
    }

    pub fn add(&self, other: &FormalTensor) -> Result<FormalTensor> {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &FormalTensor) -> Result<FormalTensor> {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one())?;
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> FormalTensor {
        if c.is_zero() {
            return FormalTensor::zero(self.arity);
        }
        FormalTensor {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    pub fn neg(&self) -> FormalTensor {
        FormalTensor {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, x)| (k.clone(), -x.clone())).collect(),
        }
    }

    pub fn tensor(&self, other: &FormalTensor) -> FormalTensor {
        let mut out = FormalTensor::zero(self.arity + other.arity);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut key = Vec::with_capacity(a.len() + b.len());
                key.extend_from_slice(a);
                key.extend_from_slice(b);
                out.add_term(key, x * y);
            }
        }
        out
    }

    /// Swaps factors `i` and `i + 1` (0-based). A graded flip multiplies each
    /// term by the Koszul sign `(-1)^(p*q)` of the swapped labels.
    pub fn flip(&self, i: usize, graded: bool) -> Result<FormalTensor> {
        if i + 1 >= self.arity {
            return Err(Error::PositionOutOfRange { position: i, arity: self.arity });
        }
        let mut out = FormalTensor::zero(self.arity);
        for (k, c) in &self.terms {
            let mut key = k.clone();
            key.swap(i, i + 1);
            let odd = graded && k[i].parity().is_odd() && k[i + 1].parity().is_odd();
            out.add_term(key, if odd { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// Moves the factor at input position `p` to output position `perm[p]`.
    /// With `graded`, each term picks up the Koszul sign of the permutation
    /// restricted to its odd factors (the same sign as a chain of graded
    /// adjacent flips).
    pub fn permute(&self, perm: &[usize], graded: bool) -> Result<FormalTensor> {
        check_permutation(perm, self.arity)?;
        let mut out = FormalTensor::zero(self.arity);
        for (k, c) in &self.terms {
            let mut key = k.clone();
            for (p, label) in k.iter().enumerate() {
                key[perm[p]] = label.clone();
            }
            let negate = graded && odd_inversions(k, perm) % 2 == 1;
            out.add_term(key, if negate { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// Keeps only the terms whose factor parities satisfy `keep`.
    pub fn filter_terms<F>(&self, mut keep: F) -> FormalTensor
    where
        F: FnMut(&[BasisLabel]) -> bool,
    {
        FormalTensor {
            arity: self.arity,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Multiplies each term by `sign(key)` (expected to return ±1).
    pub fn map_signs<F>(&self, mut negate: F) -> FormalTensor
    where
        F: FnMut(&[BasisLabel]) -> bool,
    {
        FormalTensor {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), if negate(k) { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    pub fn max_index(&self) -> Option<u64> {
        self.terms.keys().flat_map(|k| k.iter().map(BasisLabel::index)).max()
    }
}

pub(crate) fn check_permutation(perm: &[usize], arity: usize) -> Result<()> {
    if perm.len() != arity {
        return Err(Error::ArityMismatch { left: arity, right: perm.len() });
    }
    let mut seen = vec![false; arity];
    for &p in perm {
        if p >= arity || seen[p] {
            return Err(Error::PositionOutOfRange { position: p, arity });
        }
        seen[p] = true;
    }
    Ok(())
}

/// Number of pairs of odd factors whose relative order `perm` reverses.
pub(crate) fn odd_inversions(key: &[BasisLabel], perm: &[usize]) -> usize {
    let mut count = 0;
    for a in 0..key.len() {
        if !key[a].parity().is_odd() {
            continue;
        }
        for b in a + 1..key.len() {
            if key[b].parity().is_odd() && perm[a] > perm[b] {
                count += 1;
            }
        }
    }
    count
}

impl fmt::Display for FormalTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            write_coeff(f, c, n == 0)?;
            for (j, l) in k.iter().enumerate() {
                if j > 0 {
                    write!(f, "⊗")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, rat, FamilyId, Parity};

    fn l(f: &str, i: u64) -> BasisLabel {
        BasisLabel::even(f, i)
    }

    fn odd(f: &str, i: u64) -> BasisLabel {
        BasisLabel::new(FamilyId::new(f).barred(), i, Parity::Odd)
    }

    #[test]
    fn add_examples() {
        let ee = FormalTensor::basis(vec![l("e", 0), l("e", 0)]);
        assert!(ee.add(&ee.scale(&int(-1))).unwrap().is_zero());

        let fe = FormalTensor::basis(vec![l("f", 1), l("e", 0)]);
        let ef = FormalTensor::basis(vec![l("e", 0), l("f", 1)]);
        let s = fe.add(&ef).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coeff(&[l("f", 1), l("e", 0)]), int(1));

        let half = fe.scale(&rat(1, 2));
        assert_eq!(half.add(&half).unwrap(), fe);

        assert!(matches!(fe.add(&FormalTensor::zero(3)), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn tensor_examples() {
        let v = FormalTensor::from_vector(&FormalVector::from_terms([(l("f", 1), int(1)), (l("e", 0), int(1))]));
        let e = FormalTensor::basis(vec![l("e", 0)]);
        let t = v.tensor(&e);
        assert_eq!(t.arity(), 2);
        assert_eq!(t.coeff(&[l("f", 1), l("e", 0)]), int(1));
        assert_eq!(t.coeff(&[l("e", 0), l("e", 0)]), int(1));

        assert!(FormalTensor::zero(1).tensor(&v).is_zero());
        assert_eq!(FormalTensor::zero(1).tensor(&v).arity(), 2);

        let a = FormalTensor::basis(vec![l("x", 0)]).scale(&int(2));
        let b = FormalTensor::basis(vec![l("x", 1)]).scale(&int(3));
        assert_eq!(a.tensor(&b), FormalTensor::basis(vec![l("x", 0), l("x", 1)]).scale(&int(6)));
    }

    #[test]
    fn flip_examples() {
        let ab = FormalTensor::basis(vec![l("a", 0), l("b", 0)]);
        assert_eq!(ab.flip(0, false).unwrap(), FormalTensor::basis(vec![l("b", 0), l("a", 0)]));

        let f1f2 = FormalTensor::basis(vec![odd("f", 1), odd("f", 2)]);
        assert_eq!(f1f2.flip(0, true).unwrap(), FormalTensor::basis(vec![odd("f", 2), odd("f", 1)]).neg());

        let ef = FormalTensor::basis(vec![l("e", 0), odd("f", 1)]);
        assert_eq!(ef.flip(0, true).unwrap(), FormalTensor::basis(vec![odd("f", 1), l("e", 0)]));

        assert!(ab.flip(1, false).is_err());
    }

    #[test]
    fn permute_matches_adjacent_graded_flips() {
        let t = FormalTensor::basis(vec![odd("a", 0), l("b", 0), odd("c", 0)]);
        // move factor 0 to the end: (1 2)(0 1) as flips
        let via_flips = t.flip(0, true).unwrap().flip(1, true).unwrap();
        let via_perm = t.permute(&[2, 0, 1], true).unwrap();
        assert_eq!(via_flips, via_perm);
        assert!(t.permute(&[0, 0, 1], false).is_err());
    }
}
