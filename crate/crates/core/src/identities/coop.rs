use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::{format_signature, NAMonomial, NAPoly, SignRule, SlotParity};
use crate::coalgebra::{residual_check, CheckReport, CoalgebraSpec};
use crate::error::{Error, Result};
use crate::exactlin::{format_scalar, BasisLabel, FormalTensor, Scalar};

/// Linear operators `C^⊗a → C^⊗b` built from `Δ`, `d`, permutations and
/// parity projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoOp {
    Id,
    Delta,
    /// `d^m`
    D(u32),
    /// Factorwise application; every component takes one factor.
    Tensor(Vec<CoOp>),
    /// `first`, then `second`.
    Then(Box<CoOp>, Box<CoOp>),
    /// Factor at position `p` moves to `perm[p]`; graded adds Koszul signs.
    Permute { perm: Vec<usize>, graded: bool },
    /// Drops terms whose factor parities do not match.
    Project(Vec<SlotParity>),
    /// Multiplies each term by `(−1)^(m(m−1)/2)`, `m` = number of odd factors.
    KoszulPairing,
    Sum(Vec<(Scalar, CoOp)>),
}

impl CoOp {
    pub fn then(self, next: CoOp) -> CoOp {
        if next.is_identity() {
            return self;
        }
        if self.is_identity() {
            return next;
        }
        CoOp::Then(Box::new(self), Box::new(next))
    }

    pub fn is_identity(&self) -> bool {
        match self {
            CoOp::Id | CoOp::D(0) => true,
            CoOp::Tensor(ops) => ops.iter().all(CoOp::is_identity),
            CoOp::Permute { perm, .. } => perm.iter().enumerate().all(|(k, &p)| k == p),
            CoOp::Project(sig) => sig.iter().all(|s| *s == SlotParity::Any),
            CoOp::Then(a, b) => a.is_identity() && b.is_identity(),
            _ => false,
        }
    }

    pub fn in_arity(&self) -> usize {
        match self {
            CoOp::Id | CoOp::Delta | CoOp::D(_) => 1,
            CoOp::Tensor(ops) => ops.iter().map(CoOp::in_arity).sum(),
            CoOp::Then(a, _) => a.in_arity(),
            CoOp::Permute { perm, .. } => perm.len(),
            CoOp::Project(sig) => sig.len(),
            CoOp::KoszulPairing => 0,
            CoOp::Sum(ops) => ops.first().map_or(0, |(_, o)| o.in_arity()),
        }
    }

    /// Output arity for an input of arity `input`.
    pub fn out_arity(&self, input: usize) -> usize {
        match self {
            CoOp::Id | CoOp::D(_) => 1,
            CoOp::Delta => 2,
            CoOp::Tensor(ops) => ops.iter().map(|o| o.out_arity(o.in_arity())).sum(),
            CoOp::Then(a, b) => b.out_arity(a.out_arity(input)),
            CoOp::Permute { perm, .. } => perm.len(),
            CoOp::Project(sig) => sig.len(),
            CoOp::KoszulPairing => input,
            CoOp::Sum(ops) => ops.first().map_or(input, |(_, o)| o.out_arity(input)),
        }
    }

    pub fn apply(&self, spec: &CoalgebraSpec, t: &FormalTensor) -> Result<FormalTensor> {
        match self {
            CoOp::Id | CoOp::D(0) => Ok(t.clone()),
            CoOp::Delta => spec.delta_at(t, 0),
            CoOp::D(m) => spec.d_at(t, 0, *m),
            CoOp::Tensor(ops) => {
                if ops.len() != t.arity() {
                    return Err(Error::ArityMismatch { left: ops.len(), right: t.arity() });
                }
                let mut cur = t.clone();
                // right to left, so earlier positions stay put
                for (pos, op) in ops.iter().enumerate().rev() {
                    if !op.is_identity() {
                        cur = apply_at(op, spec, &cur, pos)?;
                    }
                }
                Ok(cur)
            }
            CoOp::Then(a, b) => b.apply(spec, &a.apply(spec, t)?),
            CoOp::Permute { perm, graded } => t.permute(perm, *graded),
            CoOp::Project(sig) => {
                if sig.len() != t.arity() {
                    return Err(Error::ArityMismatch { left: sig.len(), right: t.arity() });
                }
                Ok(t.filter_terms(|key| key.iter().zip(sig).all(|(l, s)| s.admits(l.parity()))))
            }
            CoOp::KoszulPairing => Ok(t.map_signs(|key| {
                let m = key.iter().filter(|l| l.parity().is_odd()).count();
                (m * m.saturating_sub(1) / 2) % 2 == 1
            })),
            CoOp::Sum(ops) => {
                let mut out: Option<FormalTensor> = None;
                for (c, op) in ops {
                    let v = op.apply(spec, t)?;
                    match &mut out {
                        None => out = Some(v.scale(c)),
                        Some(acc) => acc.add_scaled(&v, c)?,
                    }
                }
                Ok(out.unwrap_or_else(|| FormalTensor::zero(t.arity())))
            }
        }
    }
}

/// Applies a one-input operator to factor `pos`, splicing its output in.
fn apply_at(op: &CoOp, spec: &CoalgebraSpec, t: &FormalTensor, pos: usize) -> Result<FormalTensor> {
    let mut cache: HashMap<BasisLabel, FormalTensor> = HashMap::new();
    let mut out: Option<FormalTensor> = None;
    for (key, c) in t.iter() {
        let label = &key[pos];
        if !cache.contains_key(label) {
            let image = op.apply(spec, &FormalTensor::basis(vec![label.clone()]))?;
            cache.insert(label.clone(), image);
        }
        let image = &cache[label];
        let acc = out.get_or_insert_with(|| FormalTensor::zero(t.arity() - 1 + image.arity()));
        for (inner, x) in image.iter() {
            let mut k = Vec::with_capacity(acc.arity());
            k.extend_from_slice(&key[..pos]);
            k.extend_from_slice(inner);
            k.extend_from_slice(&key[pos + 1..]);
            acc.add_term(k, c * x);
        }
    }
    Ok(out.unwrap_or_else(|| FormalTensor::zero(t.arity() - 1 + op.out_arity(1))))
}

impl fmt::Display for CoOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoOp::Id => write!(f, "id"),
            CoOp::Delta => write!(f, "Δ"),
            CoOp::D(1) => write!(f, "d"),
            CoOp::D(m) => write!(f, "d^{m}"),
            CoOp::Tensor(ops) => {
                let parts: Vec<String> = ops.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join("⊗"))
            }
            CoOp::Then(a, b) => write!(f, "{b}{a}"),
            CoOp::Permute { perm, graded } => {
                let p: Vec<String> = perm.iter().map(ToString::to_string).collect();
                write!(f, "{}[{}]", if *graded { "σ̄" } else { "σ" }, p.join(""))
            }
            CoOp::Project(sig) => write!(f, "π[{}]", format_signature(sig)),
            CoOp::KoszulPairing => write!(f, "κ"),
            CoOp::Sum(ops) => {
                for (k, (c, op)) in ops.iter().enumerate() {
                    let neg = c < &Scalar::zero();
                    let abs = if neg { -c.clone() } else { c.clone() };
                    match (k == 0, neg) {
                        (true, true) => write!(f, "-")?,
                        (false, true) => write!(f, " - ")?,
                        (false, false) => write!(f, " + ")?,
                        _ => {}
                    }
                    if !abs.is_one() {
                        write!(f, "{}·", format_scalar(&abs))?;
                    }
                    write!(f, "{op}")?;
                }
                Ok(())
            }
        }
    }
}

/// Evaluation conventions for graded identities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IdentityOptions {
    /// Pair `α₁⊗…⊗α_k` with `b₁⊗…⊗b_k` using the Koszul-signed pairing
    /// instead of the plain product `Πα_i(b_i)`.
    pub koszul_pairing: bool,
}

/// The operator `Φ_p: C → C^⊗k` with `(α₁⊗…⊗α_k)(Φ_p(c)) = p(α₁,…,α_k)(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoidentityMap {
    pub op: CoOp,
    pub arity: usize,
}

impl CoidentityMap {
    pub fn apply_label(&self, spec: &CoalgebraSpec, l: &BasisLabel) -> Result<FormalTensor> {
        self.op.apply(spec, &FormalTensor::basis(vec![l.clone()]))
    }
}

impl fmt::Display for CoidentityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.op)
    }
}

fn translate_tree(m: &NAMonomial) -> CoOp {
    match m {
        NAMonomial::Leaf(v) => {
            if v.derivative == 0 {
                CoOp::Id
            } else {
                CoOp::D(v.derivative)
            }
        }
        NAMonomial::Node(a, b) => CoOp::Delta.then(CoOp::Tensor(vec![translate_tree(a), translate_tree(b)])),
    }
}

/// Builds `Φ_p`. Each monomial becomes nested `Δ`s with `d^m` at decorated
/// leaves, followed by the permutation from leaf order to slot order
/// (graded when `graded` and the sign rule is `Super`), then factorwise
/// parity projection per the signature.
pub fn translate(p: &NAPoly, graded: bool, opts: IdentityOptions) -> Result<CoidentityMap> {
    p.check_multilinear()?;
    let graded_flips = graded && p.sign_rule() == SignRule::Super;
    let mut terms = Vec::new();
    for (c, m) in p.terms() {
        let perm: Vec<usize> = m.leaf_order().into_iter().map(|s| s - 1).collect();
        let op = translate_tree(m).then(CoOp::Permute { perm, graded: graded_flips });
        terms.push((c.clone(), op));
    }
    let mut op = if terms.len() == 1 && terms[0].0.is_one() {
        terms.pop().expect("one term").1
    } else {
        CoOp::Sum(terms)
    };
    op = op.then(CoOp::Project(p.signature().to_vec()));
    if graded && opts.koszul_pairing {
        op = op.then(CoOp::KoszulPairing);
    }
    Ok(CoidentityMap { op, arity: p.arity() })
}

/// Checks `Φ_p(b) = 0` for every label `b` with index at most `max`.
pub fn check_identity(spec: &CoalgebraSpec, name: &str, p: &NAPoly, max: u64, opts: IdentityOptions) -> Result<CheckReport> {
    let map = translate(p, spec.is_graded(), opts)?;
    let mut report = residual_check(name, spec, max, |l| map.apply_label(spec, l))?;
    report.note(format!("identity {p}"));
    if p.signature().iter().any(|s| *s != SlotParity::Any) {
        report.note(format!("signature {}", format_signature(p.signature())));
    }
    if spec.is_graded() {
        report.note(format!(
            "sign rule {}, {} pairing",
            match p.sign_rule() {
                SignRule::Literal => "literal",
                SignRule::Super => "super",
            },
            if opts.koszul_pairing { "Koszul" } else { "plain" }
        ));
    }
    report.note(format!("coidentity {map}"));
    Ok(report)
}
