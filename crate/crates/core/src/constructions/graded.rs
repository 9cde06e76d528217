use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coalgebra::{Affine, CoalgebraSpec, FactorRef, FamilyDecl, Guard, IndexPoly, RuleEntry, RuleSet, RuleTerm};
use crate::error::{Error, Result};
use crate::exactlin::{int, FamilyId, Parity, Scalar};

/// Basis element `j` of the degree-`deg` component.
pub type GradedBasis = (i64, usize);

/// Coordinates `(basis index, coefficient)` in one degree.
pub type Combination = Vec<(usize, Scalar)>;

/// A Z-graded algebra with finite-dimensional components, known on degrees
/// `lowest ..= max_degree`. Products landing above `max_degree` are not
/// recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebraSpec {
    pub name: String,
    /// Family name used for the dual basis.
    pub family: String,
    pub lowest: i64,
    pub max_degree: i64,
    pub dims: BTreeMap<i64, usize>,
    /// `a·b = Σ c_k · basis_k` in degree `deg a + deg b`.
    pub products: BTreeMap<(GradedBasis, GradedBasis), Combination>,
    /// Degree of the derivation and its images.
    pub derivation: Option<(i64, BTreeMap<GradedBasis, Combination>)>,
}

impl GradedAlgebraSpec {
    pub fn dim(&self, degree: i64) -> Option<usize> {
        if degree < self.lowest {
            return Some(0);
        }
        self.dims.get(&degree).copied()
    }

    /// Checks that every structure constant respects the grading and the
    /// declared dimensions.
    pub fn validate(&self) -> Result<()> {
        let fits = |deg: i64, k: usize| self.dim(deg).is_some_and(|d| k < d);
        for (((p, a), (q, b)), image) in &self.products {
            if !fits(*p, *a) || !fits(*q, *b) {
                return Err(Error::InvalidSpec(format!("product of unknown basis elements ({p},{a})·({q},{b})")));
            }
            if image.iter().any(|(k, _)| !fits(p + q, *k)) {
                return Err(Error::InvalidSpec(format!("product ({p},{a})·({q},{b}) leaves degree {}", p + q)));
            }
        }
        if let Some((deg, images)) = &self.derivation {
            for ((p, a), image) in images {
                if !fits(*p, *a) || image.iter().any(|(k, _)| !fits(p + deg, *k)) {
                    return Err(Error::InvalidSpec(format!("derivation image of ({p},{a}) is out of range")));
                }
            }
        }
        Ok(())
    }
}

/// `F[x]` graded by exponent, with `∂x^j = j x^(j−1)`, known up to
/// `max_degree`.
pub fn polynomial_algebra(max_degree: i64, with_derivation: bool) -> GradedAlgebraSpec {
    let mut products = BTreeMap::new();
    for a in 0..=max_degree {
        for b in 0..=max_degree - a {
            products.insert(((a, 0), (b, 0)), vec![(0, int(1))]);
        }
    }
    let derivation = with_derivation.then(|| (-1, (1..=max_degree).map(|j| ((j, 0), vec![(0, int(j))])).collect()));
    GradedAlgebraSpec {
        name: if with_derivation { "fx-diff-algebra".into() } else { "fx".into() },
        family: "x".into(),
        lowest: 0,
        max_degree,
        dims: (0..=max_degree).map(|d| (d, 1)).collect(),
        products,
        derivation,
    }
}

/// The graded dual truncated at degree `horizon`: one family per basis
/// position, index = degree − lowest. `Δ` is the transpose of the product,
/// `d` the transpose of the derivation. The output is finite; a `d` image
/// that would leave the window fails when evaluated.
pub fn graded_dual(a: &GradedAlgebraSpec, horizon: i64) -> Result<CoalgebraSpec> {
    a.validate()?;
    if horizon < a.lowest {
        return Err(Error::HorizonTooSmall {
            horizon: horizon.max(0) as u64,
            detail: format!("below the lowest degree {}", a.lowest),
        });
    }
    if horizon > a.max_degree {
        return Err(Error::MissingAlgebraData(format!("components known up to degree {}, horizon {horizon}", a.max_degree)));
    }
    let width = a.dim(a.lowest).unwrap_or(0);
    for deg in a.lowest..=horizon {
        match a.dim(deg) {
            None => return Err(Error::MissingAlgebraData(format!("no dimension for degree {deg}"))),
            Some(d) if d != width => {
                return Err(Error::Unsupported(format!("components of unequal dimension ({width} and {d} at degree {deg})")))
            }
            _ => {}
        }
    }
    let source_needed = match &a.derivation {
        Some((deg, _)) if *deg < 0 => horizon - deg,
        _ => horizon,
    };
    if a.derivation.is_some() && source_needed > a.max_degree {
        return Err(Error::MissingAlgebraData(format!("derivation known up to degree {}, need {source_needed}", a.max_degree)));
    }
    let fam = |j: usize| if width > 1 { FamilyId::new(&format!("{}{j}", a.family)) } else { FamilyId::new(&a.family) };
    let top = (horizon - a.lowest) as u64;
    let families: Vec<FamilyDecl> = (0..width).map(|j| FamilyDecl::new(fam(j), Parity::Even, 0, Some(top))).collect();
    let factor = |deg: i64, j: usize| FactorRef::new(fam(j), Affine::constant(deg - a.lowest));

    let mut delta: BTreeMap<GradedBasis, Vec<RuleTerm>> = BTreeMap::new();
    for deg in a.lowest..=horizon {
        for j in 0..width {
            delta.insert((deg, j), Vec::new());
        }
    }
    for (((p, x), (q, y)), image) in &a.products {
        if p + q > horizon || *p > horizon || *q > horizon {
            continue;
        }
        for (k, c) in image {
            if !c.is_zero() {
                delta
                    .get_mut(&(p + q, *k))
                    .expect("validated degree")
                    .push(RuleTerm::new(IndexPoly::constant(c.clone()), vec![factor(*p, *x), factor(*q, *y)]));
            }
        }
    }
    let entries = |m: BTreeMap<GradedBasis, Vec<RuleTerm>>| {
        m.into_iter().map(|((deg, j), terms)| RuleEntry::new(fam(j), Guard::At((deg - a.lowest) as u64), terms)).collect()
    };
    let delta = RuleSet::new(2, entries(delta))?;

    let coderivation = match &a.derivation {
        None => None,
        Some((ddeg, images)) => {
            let mut d: BTreeMap<GradedBasis, Vec<RuleTerm>> = BTreeMap::new();
            for deg in a.lowest..=horizon {
                for j in 0..width {
                    d.insert((deg, j), Vec::new());
                }
            }
            // d(ξ_target) collects ξ_source with the coefficient of target in ∂(source)
            for ((p, x), image) in images {
                let target_deg = p + ddeg;
                if target_deg < a.lowest || target_deg > horizon {
                    continue;
                }
                for (k, c) in image {
                    if !c.is_zero() {
                        d.get_mut(&(target_deg, *k))
                            .expect("validated degree")
                            .push(RuleTerm::new(IndexPoly::constant(c.clone()), vec![factor(*p, *x)]));
                    }
                }
            }
            Some(RuleSet::new(1, entries(d))?)
        }
    };
    CoalgebraSpec::new(&format!("graded-dual({}, {horizon})", a.name), false, families, delta, coderivation, 0)
}
