use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DualAlgebra;
use crate::coalgebra::{CheckReport, CoalgebraSpec, Witness};
use crate::error::{Error, Result};
use crate::exactlin::{format_scalar, int, BasisLabel, Scalar};
use crate::identities::IdentityOptions;

/// Fewest generators that still leave room for products of three odd parts.
pub const MIN_GENERATORS: usize = 3;
const MAX_GENERATORS: usize = 16;

/// An element of `G(C*) = C*₀⊗G₀ + C*₁⊗G₁`: coordinate functionals paired
/// with squarefree Grassmann monomials (bit masks over the generators) of
/// the same parity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrassmannElement {
    terms: BTreeMap<(BasisLabel, u32), Scalar>,
}

impl GrassmannElement {
    pub fn zero() -> GrassmannElement {
        GrassmannElement::default()
    }

    /// Builds `Σ c · ξ_l⊗g_mask`; each label's parity must match the parity
    /// of its monomial's degree.
    pub fn from_terms<I>(iter: I) -> Result<GrassmannElement>
    where
        I: IntoIterator<Item = (BasisLabel, u32, Scalar)>,
    {
        let mut out = GrassmannElement::zero();
        for (l, mask, c) in iter {
            if l.parity().is_odd() != (mask.count_ones() % 2 == 1) {
                return Err(Error::Precondition(format!("{l} paired with a Grassmann monomial of the wrong parity")));
            }
            out.add_term(l, mask, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, l: BasisLabel, mask: u32, c: Scalar) {
        let e = self.terms.entry((l, mask)).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, u32, &Scalar)> {
        self.terms.iter().map(|((l, m), c)| (l, *m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, other: &GrassmannElement) -> GrassmannElement {
        let mut out = self.clone();
        for ((l, m), c) in &other.terms {
            out.add_term(l.clone(), *m, -c.clone());
        }
        out
    }
}

/// `g_a · g_b` for squarefree monomials; `None` when they share a generator,
/// otherwise whether reordering into increasing order flips the sign.
pub fn grassmann_mul(a: u32, b: u32) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    for x in 0..32 {
        if a & (1 << x) != 0 {
            swaps += (b & ((1u32 << x) - 1)).count_ones();
        }
    }
    Some(swaps % 2 == 1)
}

fn format_mask(mask: u32) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..32).filter(|x| mask & (1 << x) != 0).map(|x| format!("g{}", x + 1)).collect()
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((l, m), c)) in self.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k == 0, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                _ => {}
            }
            if !abs.is_one() {
                write!(f, "{}*", format_scalar(&abs))?;
            }
            write!(f, "ξ[{l}]⊗{}", format_mask(*m))?;
        }
        Ok(())
    }
}

impl DualAlgebra<'_> {
    /// `(ξ_a⊗g)(ξ_b⊗h) = (ξ_a·ξ_b)⊗gh`, with signs from the Grassmann
    /// factors only.
    pub fn envelope_product(&self, x: &GrassmannElement, y: &GrassmannElement) -> Result<GrassmannElement> {
        let mut acc: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
        for ((la, ma), a) in &x.terms {
            for ((lb, mb), b) in &y.terms {
                let Some(flip) = grassmann_mul(*ma, *mb) else { continue };
                let (i, j) = (self.id(la)?, self.id(lb)?);
                let ab = if flip { -(a * b) } else { a * b };
                let ab = if self.pair_sign(i, j) { -ab } else { ab };
                for (k, c) in self.pair(i, j)? {
                    *acc.entry((*k, ma | mb)).or_insert_with(Scalar::zero) += &ab * c;
                }
            }
        }
        let mut out = GrassmannElement::zero();
        for ((k, m), c) in acc {
            if !c.is_zero() {
                out.terms.insert((self.label(k).clone(), m), c);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannConfig {
    pub generators: usize,
    pub samples: usize,
    pub seed: u64,
    /// Sampled coordinate functionals have index at most this.
    pub max_index: u64,
    /// Terms per sampled element.
    pub terms: usize,
}

impl Default for GrassmannConfig {
    fn default() -> Self {
        GrassmannConfig { generators: MIN_GENERATORS, samples: 50, seed: 0, max_index: 6, terms: 3 }
    }
}

/// Samples pairs `x, y` in the Grassmann envelope of the dual and checks
/// `xy = yx` and `(x²y)x = x²(yx)` exactly.
pub fn grassmann_envelope_check(spec: &CoalgebraSpec, generators: usize, samples: usize, seed: u64) -> Result<CheckReport> {
    grassmann_envelope_check_with(spec, &GrassmannConfig { generators, samples, seed, ..GrassmannConfig::default() })
}

pub fn grassmann_envelope_check_with(spec: &CoalgebraSpec, cfg: &GrassmannConfig) -> Result<CheckReport> {
    if !spec.is_graded() {
        return Err(Error::Precondition("the Grassmann envelope needs a graded spec".into()));
    }
    if cfg.generators < MIN_GENERATORS {
        return Err(Error::InsufficientGenerators { needed: MIN_GENERATORS, got: cfg.generators });
    }
    if cfg.generators > MAX_GENERATORS {
        return Err(Error::Unsupported(format!("at most {MAX_GENERATORS} Grassmann generators")));
    }
    let window = DualAlgebra::window_for(spec, cfg.max_index, 4, 0);
    let alg = DualAlgebra::new(spec, window, IdentityOptions::default())?;
    let coords = spec.labels_up_to(cfg.max_index);
    if coords.is_empty() || cfg.terms == 0 {
        return Err(Error::Precondition("nothing to sample".into()));
    }
    let masks: [Vec<u32>; 2] = {
        let all = 0..(1u32 << cfg.generators);
        let (odd, even): (Vec<u32>, Vec<u32>) = all.partition(|m| m.count_ones() % 2 == 1);
        [even, odd]
    };

    let mut report = CheckReport::new("grassmann-envelope").with_intervals(spec.intervals_up_to(cfg.max_index));
    for k in 0..cfg.samples {
        // one stream per sample, so any sample replays on its own
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k as u64);
        let mut sample = || -> Result<GrassmannElement> {
            let mut terms = Vec::with_capacity(cfg.terms);
            for _ in 0..cfg.terms {
                let l = coords[rng.gen_range(0..coords.len())].clone();
                let pool = &masks[l.parity().bit() as usize];
                let m = pool[rng.gen_range(0..pool.len())];
                let mut c = rng.gen_range(-3i64..=2);
                if c >= 0 {
                    c += 1;
                }
                terms.push((l, m, int(c)));
            }
            GrassmannElement::from_terms(terms)
        };
        let (x, y) = (sample()?, sample()?);
        let xy = alg.envelope_product(&x, &y)?;
        let comm = xy.sub(&alg.envelope_product(&y, &x)?);
        let x2 = alg.envelope_product(&x, &x)?;
        let lhs = alg.envelope_product(&alg.envelope_product(&x2, &y)?, &x)?;
        let rhs = alg.envelope_product(&x2, &alg.envelope_product(&y, &x)?)?;
        let jordan = lhs.sub(&rhs);
        for (what, r) in [("xy - yx", comm), ("(x²y)x - x²(yx)", jordan)] {
            if !r.is_zero() {
                report.fail(Witness { label: None, context: format!("sample {k}: {what} = {r}; x = {x}; y = {y}"), residual: None });
            }
        }
    }
    report.note(format!(
        "{} samples, seed {}, {} generators, {} terms per element, labels up to index {}",
        cfg.samples, cfg.seed, cfg.generators, cfg.terms, cfg.max_index
    ));
    Ok(report)
}
