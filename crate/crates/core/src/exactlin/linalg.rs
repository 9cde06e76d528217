//! Exact elimination over sparse rational vectors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{BasisLabel, FormalTensor, FormalVector, Scalar};
use crate::error::{Error, Result};

/// Reduced row echelon set of vectors. Each row has leading coefficient 1
/// at its pivot (the smallest label in canonical order), and no row
/// contains another row's pivot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EchelonBasis {
    rows: BTreeMap<BasisLabel, FormalVector>,
}

impl EchelonBasis {
    pub fn new() -> EchelonBasis {
        EchelonBasis::default()
    }

    pub fn from_vectors<'a, I>(vectors: I) -> EchelonBasis
    where
        I: IntoIterator<Item = &'a FormalVector>,
    {
        let mut b = EchelonBasis::new();
        for v in vectors {
            b.insert(v);
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows ordered by pivot label.
    pub fn rows(&self) -> impl Iterator<Item = &FormalVector> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &BasisLabel> {
        self.rows.keys()
    }

    /// Residual of `v` after elimination against the pivots.
    pub fn reduce(&self, v: &FormalVector) -> FormalVector {
        let mut r = v.clone();
        // Rows are fully reduced, so one pass over the pivots present in r
        // (in order) suffices: subtracting a row never reintroduces a pivot.
        let hits: Vec<BasisLabel> = r.labels().filter(|l| self.rows.contains_key(*l)).cloned().collect();
        for p in hits {
            let c = r.coeff(&p);
            if !c.is_zero() {
                r.add_scaled(&self.rows[&p], &-c);
            }
        }
        r
    }

    pub fn contains(&self, v: &FormalVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns the new pivot if the span grew.
    pub fn insert(&mut self, v: &FormalVector) -> Option<BasisLabel> {
        let r = self.reduce(v);
        let (pivot, lead) = match r.leading() {
            Some((p, c)) => (p.clone(), c.clone()),
            None => return None,
        };
        let row = r.scale(&(Scalar::one() / lead));
        for other in self.rows.values_mut() {
            let c = other.coeff(&pivot);
            if !c.is_zero() {
                other.add_scaled(&row, &-c);
            }
        }
        self.rows.insert(pivot.clone(), row);
        Some(pivot)
    }

    /// Coordinates of `v` against the echelon rows (in pivot order), if `v`
    /// lies in the span.
    pub fn coordinates(&self, v: &FormalVector) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.rows.keys().map(|p| v.coeff(p)).collect();
        let mut recon = FormalVector::zero();
        for (row, c) in self.rows.values().zip(&coords) {
            recon.add_scaled(row, c);
        }
        (recon == *v).then_some(coords)
    }
}

/// Exact coordinates of `v` in terms of `basis`, which must be linearly
/// independent; `None` if `v` is outside the span.
pub fn membership(v: &FormalVector, basis: &[FormalVector]) -> Option<Vec<Scalar>> {
    // Echelon rows paired with their expression in the original basis.
    let mut rows: BTreeMap<BasisLabel, (FormalVector, Vec<Scalar>)> = BTreeMap::new();
    let k = basis.len();
    for (j, b) in basis.iter().enumerate() {
        let mut vec = b.clone();
        let mut combo = vec![Scalar::zero(); k];
        combo[j] = Scalar::one();
        eliminate(&rows, &mut vec, &mut combo);
        let (pivot, lead) = match vec.leading() {
            Some((p, c)) => (p.clone(), c.clone()),
            None => continue,
        };
        let inv = Scalar::one() / lead;
        let vec = vec.scale(&inv);
        let combo: Vec<Scalar> = combo.iter().map(|c| c * &inv).collect();
        for (other, ocombo) in rows.values_mut() {
            let c = other.coeff(&pivot);
            if !c.is_zero() {
                other.add_scaled(&vec, &-c.clone());
                for (o, n) in ocombo.iter_mut().zip(&combo) {
                    *o -= &c * n;
                }
            }
        }
        rows.insert(pivot, (vec, combo));
    }
    let mut residual = v.clone();
    let mut coords = vec![Scalar::zero(); k];
    for (pivot, (row, combo)) in &rows {
        let c = residual.coeff(pivot);
        if c.is_zero() {
            continue;
        }
        residual.add_scaled(row, &-c.clone());
        for (o, n) in coords.iter_mut().zip(combo) {
            *o += &c * n;
        }
    }
    residual.is_zero().then_some(coords)
}

fn eliminate(rows: &BTreeMap<BasisLabel, (FormalVector, Vec<Scalar>)>, vec: &mut FormalVector, combo: &mut [Scalar]) {
    for (pivot, (row, rcombo)) in rows {
        let c = vec.coeff(pivot);
        if c.is_zero() {
            continue;
        }
        vec.add_scaled(row, &-c.clone());
        for (o, n) in combo.iter_mut().zip(rcombo) {
            *o -= &c * n;
        }
    }
}

pub fn is_linearly_independent(vectors: &[FormalVector]) -> bool {
    let mut b = EchelonBasis::new();
    vectors.iter().all(|v| b.insert(v).is_some())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Writes an arity-2 tensor as `Σ a_i ⊗ b_i` with the chosen-side factors
/// linearly independent (and, here, the other side as well: the result is a
/// minimal-rank decomposition). For `Side::Left` the pairs are `(a_i, b_i)`
/// with independent `a_i`; the `b_i` then lie in any subspace `W` with
/// `t ∈ W ⊗ W`. `Side::Right` is the mirror image, pairs still ordered
/// `(left, right)`.
pub fn extract_components(t: &FormalTensor, side: Side) -> Result<Vec<(FormalVector, FormalVector)>> {
    if t.arity() != 2 {
        return Err(Error::WrongArity { expected: 2, found: t.arity() });
    }
    // rows indexed by chosen-side labels, columns by the opposite side
    let mut matrix: BTreeMap<BasisLabel, FormalVector> = BTreeMap::new();
    for (key, c) in t.iter() {
        let (row, col) = match side {
            Side::Left => (&key[0], &key[1]),
            Side::Right => (&key[1], &key[0]),
        };
        matrix.entry(row.clone()).or_default().add_term(col.clone(), c.clone());
    }
    let echelon = EchelonBasis::from_vectors(matrix.values());
    let mut out = Vec::with_capacity(echelon.dim());
    for (pivot, row) in echelon.rows.iter() {
        // M = L * R with L[l][i] = M[l][pivot_i] since R is the identity on pivots
        let chosen = FormalVector::from_terms(matrix.iter().map(|(l, mrow)| (l.clone(), mrow.coeff(pivot))));
        match side {
            Side::Left => out.push((chosen, row.clone())),
            Side::Right => out.push((row.clone(), chosen)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, rat};

    fn l(f: &str, i: u64) -> BasisLabel {
        BasisLabel::even(f, i)
    }

    fn v(terms: &[(&str, u64, i64)]) -> FormalVector {
        FormalVector::from_terms(terms.iter().map(|(f, i, c)| (l(f, *i), int(*c))))
    }

    fn reassemble(pairs: &[(FormalVector, FormalVector)]) -> FormalTensor {
        let mut t = FormalTensor::zero(2);
        for (a, b) in pairs {
            t.add_scaled(&FormalTensor::from_vector(a).tensor(&FormalTensor::from_vector(b)), &int(1)).unwrap();
        }
        t
    }

    #[test]
    fn extract_independent_pair() {
        let t = FormalTensor::from_terms(2, [(vec![l("f", 1), l("e", 0)], int(1)), (vec![l("e", 0), l("f", 1)], int(1))]).unwrap();
        let pairs = extract_components(&t, Side::Left).unwrap();
        assert_eq!(pairs, vec![(v(&[("f", 1, 1)]), v(&[("e", 0, 1)])), (v(&[("e", 0, 1)]), v(&[("f", 1, 1)]))]);
    }

    #[test]
    fn extract_merges_equal_left_factor() {
        let t = FormalTensor::from_terms(2, [(vec![l("v", 0), l("w", 0)], int(1)), (vec![l("v", 0), l("u", 0)], int(1))]).unwrap();
        let pairs = extract_components(&t, Side::Left).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0, v(&[("v", 0, 1)]));
        assert_eq!(pairs[0].1, v(&[("w", 0, 1), ("u", 0, 1)]));
    }

    #[test]
    fn extract_zero_is_empty() {
        assert!(extract_components(&FormalTensor::zero(2), Side::Right).unwrap().is_empty());
        assert!(extract_components(&FormalTensor::zero(3), Side::Right).is_err());
    }

    #[test]
    fn extract_rank_deficient() {
        // (x0 + x1) ⊗ (y0 - y1) expanded: rank one
        let t = FormalTensor::from_terms(
            2,
            [
                (vec![l("x", 0), l("y", 0)], int(1)),
                (vec![l("x", 0), l("y", 1)], int(-1)),
                (vec![l("x", 1), l("y", 0)], int(1)),
                (vec![l("x", 1), l("y", 1)], int(-1)),
            ],
        )
        .unwrap();
        for side in [Side::Left, Side::Right] {
            let pairs = extract_components(&t, side).unwrap();
            assert_eq!(pairs.len(), 1);
            assert_eq!(reassemble(&pairs), t);
        }
    }

    #[test]
    fn membership_examples() {
        assert_eq!(membership(&v(&[("e", 0, 1)]), &[v(&[("e", 0, 1)])]), Some(vec![int(1)]));
        assert_eq!(membership(&v(&[("f", 1, 1)]), &[v(&[("e", 0, 1)])]), None);
        let target = v(&[("x", 0, 2), ("x", 1, 1)]);
        let basis = [v(&[("x", 0, 1)]), v(&[("x", 0, 1), ("x", 1, 1)])];
        assert_eq!(membership(&target, &basis), Some(vec![int(1), int(1)]));
        assert_eq!(membership(&FormalVector::zero(), &basis), Some(vec![int(0), int(0)]));
    }

    #[test]
    fn echelon_insert_and_coordinates() {
        let mut b = EchelonBasis::new();
        assert!(b.insert(&v(&[("x", 1, 2), ("x", 2, 1)])).is_some());
        assert!(b.insert(&v(&[("x", 2, 3)])).is_some());
        assert!(b.insert(&v(&[("x", 1, 1)])).is_none());
        assert_eq!(b.dim(), 2);
        // rows are reduced: x1 and x2 both pivots
        let rows: Vec<_> = b.rows().cloned().collect();
        assert_eq!(rows, vec![v(&[("x", 1, 1)]), v(&[("x", 2, 1)])]);
        let w = FormalVector::from_terms([(l("x", 1), rat(1, 2)), (l("x", 2), int(-4))]);
        assert_eq!(b.coordinates(&w), Some(vec![rat(1, 2), int(-4)]));
        assert_eq!(b.coordinates(&v(&[("x", 3, 1)])), None);
    }
}
