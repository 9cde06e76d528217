//! Exact arithmetic in the dual algebra on finitely supported functionals.
//!
//! A functional `Σ c_l ξ_l` is stored as a [`FormalVector`] whose labels are
//! the coordinate functionals `ξ_l`. Products are computed by inverting `Δ`
//! over a window of indices; the shift bound guarantees that the window
//! contains every label whose comultiplication can contribute, so results
//! are exact.

mod bruteforce;
mod grassmann;

pub use bruteforce::bruteforce_identity;
pub use grassmann::{grassmann_envelope_check, grassmann_envelope_check_with, GrassmannConfig, GrassmannElement};

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::coalgebra::{validate_shift_bound, CoalgebraSpec};
use crate::error::{Error, Result};
use crate::exactlin::{BasisLabel, FormalVector, Parity, Scalar};
use crate::identities::IdentityOptions;

/// A finitely supported element of the dual, `Σ c_l ξ_l`.
pub type Functional = FormalVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionalParity {
    Even,
    Odd,
    Mixed,
}

/// Parity of a functional; the zero functional counts as even.
pub fn functional_parity(f: &Functional) -> FunctionalParity {
    let odd = f.labels().filter(|l| l.parity().is_odd()).count();
    match odd {
        0 => FunctionalParity::Even,
        n if n == f.len() => FunctionalParity::Odd,
        _ => FunctionalParity::Mixed,
    }
}

pub(crate) type Sparse = Vec<(u32, Scalar)>;

pub(crate) fn collect_sparse(acc: BTreeMap<u32, Scalar>) -> Sparse {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// The dual algebra of a spec, exact for functionals supported on labels
/// whose products stay inside a validated index window.
pub struct DualAlgebra<'a> {
    spec: &'a CoalgebraSpec,
    window: u64,
    opts: IdentityOptions,
    labels: Vec<BasisLabel>,
    ids: HashMap<BasisLabel, u32>,
    infinite: Vec<bool>,
    /// `(i, j) ↦ [(k, coefficient of b_i⊗b_j in Δ(b_k))]`
    products: HashMap<(u32, u32), Sparse>,
    /// `j ↦ [(k, coefficient of b_j in d(b_k))]`
    transpose_d: HashMap<u32, Sparse>,
    d_error: Option<Error>,
}

impl<'a> DualAlgebra<'a> {
    /// Validates the shift bound up to `window` and inverts `Δ` (and `d`)
    /// on every label with index at most `window` plus all labels of
    /// finite families.
    pub fn new(spec: &'a CoalgebraSpec, window: u64, opts: IdentityOptions) -> Result<DualAlgebra<'a>> {
        let report = validate_shift_bound(spec, window);
        if let Some(w) = report.witnesses.first() {
            return Err(Error::ShiftBound {
                bound: spec.shift_bound(),
                label: w.label.as_ref().map(ToString::to_string).unwrap_or_default(),
                detail: w.context.clone(),
            });
        }
        let mut sources = spec.labels_up_to(window);
        for f in spec.families().iter().filter(|f| !f.is_infinite()) {
            for i in f.indices_up_to(f.hi.unwrap_or(f.lo)) {
                sources.push(spec.label(&f.id, i)?);
            }
        }
        sources.sort();
        sources.dedup();
        let mut alg = DualAlgebra {
            spec,
            window,
            opts,
            labels: Vec::new(),
            ids: HashMap::new(),
            infinite: Vec::new(),
            products: HashMap::new(),
            transpose_d: HashMap::new(),
            d_error: None,
        };
        for l in &sources {
            alg.intern(l);
        }
        for k in &sources {
            let kid = alg.ids[k];
            for (key, c) in spec.delta(k)?.iter() {
                let (i, j) = (alg.intern(&key[0]), alg.intern(&key[1]));
                alg.products.entry((i, j)).or_default().push((kid, c.clone()));
            }
            if spec.is_differential() {
                match spec.d_label(k) {
                    Ok(v) => {
                        for (l, c) in v.iter() {
                            let j = alg.intern(l);
                            alg.transpose_d.entry(j).or_default().push((kid, c.clone()));
                        }
                    }
                    Err(e) => {
                        alg.d_error.get_or_insert(e);
                    }
                }
            }
        }
        Ok(alg)
    }

    /// Window large enough for products of `factors` functionals supported
    /// on indices at most `max`, with `derivatives` applications of `d*`.
    pub fn window_for(spec: &CoalgebraSpec, max: u64, factors: usize, derivatives: u32) -> u64 {
        let steps = factors.saturating_sub(1) as u64 + derivatives as u64;
        max * factors.max(1) as u64 + steps * spec.shift_bound()
    }

    pub fn spec(&self) -> &CoalgebraSpec {
        self.spec
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    fn intern(&mut self, l: &BasisLabel) -> u32 {
        if let Some(&id) = self.ids.get(l) {
            return id;
        }
        let id = self.labels.len() as u32;
        self.labels.push(l.clone());
        self.ids.insert(l.clone(), id);
        self.infinite.push(self.spec.family(l.family()).is_some_and(|f| f.is_infinite()));
        id
    }

    pub(crate) fn id(&self, l: &BasisLabel) -> Result<u32> {
        match self.ids.get(l) {
            Some(&id) => Ok(id),
            None if self.spec.family(l.family()).is_some_and(|f| f.contains(l.index())) => {
                Err(Error::WindowExceeded { needed: l.index(), validated: self.window })
            }
            None => Err(Error::out_of_range(l)),
        }
    }

    pub(crate) fn label(&self, id: u32) -> &BasisLabel {
        &self.labels[id as usize]
    }

    pub(crate) fn parity(&self, id: u32) -> Parity {
        self.labels[id as usize].parity()
    }

    fn inf_index(&self, id: u32) -> u64 {
        if self.infinite[id as usize] {
            self.labels[id as usize].index()
        } else {
            0
        }
    }

    pub(crate) fn to_sparse(&self, f: &Functional) -> Result<Sparse> {
        f.iter().map(|(l, c)| Ok((self.id(l)?, c.clone()))).collect()
    }

    pub(crate) fn to_functional(&self, s: &Sparse) -> Functional {
        FormalVector::from_terms(s.iter().map(|(id, c)| (self.label(*id).clone(), c.clone())))
    }

    /// `ξ_i · ξ_j`, as a list of `(k, coefficient)`.
    pub(crate) fn pair(&self, i: u32, j: u32) -> Result<&[(u32, Scalar)]> {
        if self.infinite[i as usize] || self.infinite[j as usize] {
            let needed = self.inf_index(i) + self.inf_index(j) + self.spec.shift_bound();
            if needed > self.window {
                return Err(Error::WindowExceeded { needed, validated: self.window });
            }
        }
        Ok(self.products.get(&(i, j)).map_or(&[], Vec::as_slice))
    }

    fn pair_sign(&self, i: u32, j: u32) -> bool {
        self.opts.koszul_pairing && self.parity(i).is_odd() && self.parity(j).is_odd()
    }

    pub(crate) fn product_sparse(&self, f: &Sparse, g: &Sparse) -> Result<Sparse> {
        let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (i, a) in f {
            for (j, b) in g {
                let neg = self.pair_sign(*i, *j);
                for (k, c) in self.pair(*i, *j)? {
                    let x = a * b * c;
                    let e = acc.entry(*k).or_insert_with(Scalar::zero);
                    if neg {
                        *e -= x;
                    } else {
                        *e += x;
                    }
                }
            }
        }
        Ok(collect_sparse(acc))
    }

    pub(crate) fn derivation_sparse(&self, f: &Sparse) -> Result<Sparse> {
        if !self.spec.is_differential() {
            return Err(Error::NotDifferential);
        }
        if let Some(e) = &self.d_error {
            return Err(e.clone());
        }
        let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (j, a) in f {
            if self.infinite[*j as usize] {
                let needed = self.inf_index(*j) + self.spec.shift_bound();
                if needed > self.window {
                    return Err(Error::WindowExceeded { needed, validated: self.window });
                }
            }
            for (k, c) in self.transpose_d.get(j).map_or(&[][..], Vec::as_slice) {
                *acc.entry(*k).or_insert_with(Scalar::zero) += a * c;
            }
        }
        Ok(collect_sparse(acc))
    }

    /// `(f·g)(a) = (f⊗g)(Δa)`.
    pub fn product(&self, f: &Functional, g: &Functional) -> Result<Functional> {
        let s = self.product_sparse(&self.to_sparse(f)?, &self.to_sparse(g)?)?;
        Ok(self.to_functional(&s))
    }

    /// `(d*f)(b) = f(d b)`.
    pub fn derivation(&self, f: &Functional) -> Result<Functional> {
        let s = self.derivation_sparse(&self.to_sparse(f)?)?;
        Ok(self.to_functional(&s))
    }
}

fn max_index(f: &Functional) -> u64 {
    f.max_index().unwrap_or(0)
}

/// `f·g` with the default pairing, over the smallest sufficient window.
pub fn dual_product(spec: &CoalgebraSpec, f: &Functional, g: &Functional) -> Result<Functional> {
    let window = max_index(f) + max_index(g) + spec.shift_bound();
    DualAlgebra::new(spec, window, IdentityOptions::default())?.product(f, g)
}

/// `d*f`, the transpose of the coderivation.
pub fn dual_derivation(spec: &CoalgebraSpec, f: &Functional) -> Result<Functional> {
    if !spec.is_differential() {
        return Err(Error::NotDifferential);
    }
    let window = max_index(f) + spec.shift_bound();
    DualAlgebra::new(spec, window, IdentityOptions::default())?.derivation(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::builtin;
    use crate::exactlin::int;

    fn xi(spec: &CoalgebraSpec, s: &str) -> Functional {
        spec.parse_vector(s).unwrap()
    }

    #[test]
    fn coordinate_products() {
        let ex1 = builtin("example1").unwrap();
        assert_eq!(dual_product(&ex1, &xi(&ex1, "e:0"), &xi(&ex1, "e:0")).unwrap(), xi(&ex1, "e:0"));
        assert_eq!(dual_product(&ex1, &xi(&ex1, "f:1"), &xi(&ex1, "e:0")).unwrap(), xi(&ex1, "f:1"));
        assert_eq!(dual_derivation(&ex1, &xi(&ex1, "f:2")).unwrap(), xi(&ex1, "f:1"));
        assert!(dual_derivation(&ex1, &xi(&ex1, "e:0")).unwrap().is_zero());
        let ex4 = builtin("example4").unwrap();
        assert_eq!(dual_derivation(&ex4, &xi(&ex4, "x:3")).unwrap(), xi(&ex4, "x:2").scale(&int(3)));
    }

    #[test]
    fn window_is_enforced() {
        let ex1 = builtin("example1").unwrap();
        let alg = DualAlgebra::new(&ex1, 5, IdentityOptions::default()).unwrap();
        assert!(matches!(alg.product(&xi(&ex1, "f:3"), &xi(&ex1, "f:3")), Err(Error::WindowExceeded { .. })));
        assert!(alg.product(&xi(&ex1, "f:2"), &xi(&ex1, "f:2")).is_ok());
        assert!(matches!(alg.product(&xi(&ex1, "f:9"), &xi(&ex1, "e:0")), Err(Error::WindowExceeded { .. })));
    }

    #[test]
    fn parity_classes() {
        let ex7 = builtin("example7").unwrap();
        assert_eq!(functional_parity(&xi(&ex7, "f:1")), FunctionalParity::Even);
        assert_eq!(functional_parity(&xi(&ex7, "~f:1")), FunctionalParity::Odd);
        assert_eq!(functional_parity(&xi(&ex7, "f:1 + ~f:1")), FunctionalParity::Mixed);
    }
}
