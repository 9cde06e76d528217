use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{Parity, Scalar};

/// How slot permutations are signed when an identity is evaluated on a
/// graded spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SignRule {
    /// Plain permutations, no Koszul signs.
    #[default]
    Literal,
    /// Graded flips: each monomial picks up the Koszul sign of reordering
    /// its odd arguments into slot order (the sign rule of a super identity).
    Super,
}

/// Parity constraint on one slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SlotParity {
    #[default]
    Any,
    Is(Parity),
}

impl SlotParity {
    pub fn admits(self, p: Parity) -> bool {
        match self {
            SlotParity::Any => true,
            SlotParity::Is(q) => p == q,
        }
    }
}

/// Parses a signature such as `"eeoo"`; `*` leaves a slot unconstrained.
pub fn parse_signature(s: &str) -> Result<Vec<SlotParity>> {
    s.chars()
        .map(|c| match c {
            'e' | 'E' | '0' => Ok(SlotParity::Is(Parity::Even)),
            'o' | 'O' | '1' => Ok(SlotParity::Is(Parity::Odd)),
            '*' | '.' => Ok(SlotParity::Any),
            _ => Err(Error::Parse(format!("bad signature character `{c}` (use e, o or *)"))),
        })
        .collect()
}

pub fn format_signature(sig: &[SlotParity]) -> String {
    sig.iter()
        .map(|p| match p {
            SlotParity::Any => '*',
            SlotParity::Is(Parity::Even) => 'e',
            SlotParity::Is(Parity::Odd) => 'o',
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NAVariable {
    /// 1-based slot.
    pub slot: usize,
    pub derivative: u32,
}

/// A binary product tree over variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NAMonomial {
    Leaf(NAVariable),
    Node(Box<NAMonomial>, Box<NAMonomial>),
}

impl NAMonomial {
    pub fn var(slot: usize) -> NAMonomial {
        NAMonomial::Leaf(NAVariable { slot, derivative: 0 })
    }

    pub fn node(a: NAMonomial, b: NAMonomial) -> NAMonomial {
        NAMonomial::Node(Box::new(a), Box::new(b))
    }

    /// Slots read left to right.
    pub fn leaf_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |v| out.push(v.slot));
        out
    }

    pub fn leaves(&self) -> Vec<NAVariable> {
        let mut out = Vec::new();
        self.visit(&mut |v| out.push(*v));
        out
    }

    fn visit(&self, f: &mut impl FnMut(&NAVariable)) {
        match self {
            NAMonomial::Leaf(v) => f(v),
            NAMonomial::Node(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            NAMonomial::Leaf(_) => 1,
            NAMonomial::Node(a, b) => a.degree() + b.degree(),
        }
    }

    /// Replaces leaves left to right by `f(position, leaf)`.
    pub fn relabel(&self, f: &mut impl FnMut(usize, &NAVariable) -> NAVariable) -> NAMonomial {
        fn go(m: &NAMonomial, pos: &mut usize, f: &mut impl FnMut(usize, &NAVariable) -> NAVariable) -> NAMonomial {
            match m {
                NAMonomial::Leaf(v) => {
                    let out = NAMonomial::Leaf(f(*pos, v));
                    *pos += 1;
                    out
                }
                NAMonomial::Node(a, b) => {
                    let a = go(a, pos, f);
                    let b = go(b, pos, f);
                    NAMonomial::node(a, b)
                }
            }
        }
        go(self, &mut 0, f)
    }
}

impl fmt::Display for NAMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NAMonomial::Leaf(v) => {
                write!(f, "x{}", v.slot)?;
                for _ in 0..v.derivative {
                    write!(f, "'")?;
                }
                Ok(())
            }
            NAMonomial::Node(a, b) => write!(f, "({a} {b})"),
        }
    }
}

impl PartialEq for NAPoly {
    /// Term order is presentation only.
    fn eq(&self, other: &NAPoly) -> bool {
        self.arity == other.arity
            && self.signature == other.signature
            && self.sign_rule == other.sign_rule
            && self.sorted_terms() == other.sorted_terms()
    }
}

impl Eq for NAPoly {}

impl std::hash::Hash for NAPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.signature.hash(state);
        self.sign_rule.hash(state);
        self.sorted_terms().hash(state);
    }
}

/// A finite linear combination of product trees over slots `1..=arity`,
/// with a parity signature and a sign rule.
#[derive(Clone, Debug)]
pub struct NAPoly {
    arity: usize,
    terms: Vec<(Scalar, NAMonomial)>,
    signature: Vec<SlotParity>,
    sign_rule: SignRule,
}

impl NAPoly {
    fn sorted_terms(&self) -> Vec<(&NAMonomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(c, m)| (m, c)).collect();
        v.sort();
        v
    }

    /// Combines equal monomials and drops zero terms, keeping first-appearance
    /// order. The arity is the largest slot used.
    pub fn new(terms: Vec<(Scalar, NAMonomial)>) -> NAPoly {
        let mut index: BTreeMap<NAMonomial, usize> = BTreeMap::new();
        let mut merged: Vec<(Scalar, NAMonomial)> = Vec::new();
        for (c, m) in terms {
            match index.get(&m) {
                Some(&k) => merged[k].0 += c,
                None => {
                    index.insert(m.clone(), merged.len());
                    merged.push((c, m));
                }
            }
        }
        let terms: Vec<(Scalar, NAMonomial)> = merged.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        let arity = terms.iter().flat_map(|(_, m)| m.leaf_order()).max().unwrap_or(0);
        NAPoly { arity, terms, signature: vec![SlotParity::Any; arity], sign_rule: SignRule::Literal }
    }

    pub fn monomial(m: NAMonomial) -> NAPoly {
        NAPoly::new(vec![(Scalar::one(), m)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(Scalar, NAMonomial)] {
        &self.terms
    }

    pub fn signature(&self) -> &[SlotParity] {
        &self.signature
    }

    pub fn sign_rule(&self) -> SignRule {
        self.sign_rule
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_signature(mut self, signature: Vec<SlotParity>) -> Result<NAPoly> {
        if signature.len() != self.arity {
            return Err(Error::Parse(format!("signature has {} slots, identity has {}", signature.len(), self.arity)));
        }
        self.signature = signature;
        Ok(self)
    }

    pub fn with_sign_rule(mut self, rule: SignRule) -> NAPoly {
        self.sign_rule = rule;
        self
    }

    pub fn add(&self, other: &NAPoly) -> NAPoly {
        self.combine(other, &Scalar::one())
    }

    pub fn sub(&self, other: &NAPoly) -> NAPoly {
        self.combine(other, &-Scalar::one())
    }

    fn combine(&self, other: &NAPoly, c: &Scalar) -> NAPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(x, m)| (x * c, m.clone())));
        NAPoly::new(terms).keep_meta(self)
    }

    pub fn scale(&self, c: &Scalar) -> NAPoly {
        NAPoly::new(self.terms.iter().map(|(x, m)| (x * c, m.clone())).collect()).keep_meta(self)
    }

    /// Bilinear product of two polynomials.
    pub fn mul(&self, other: &NAPoly) -> NAPoly {
        let mut terms = Vec::new();
        for (a, m) in &self.terms {
            for (b, n) in &other.terms {
                terms.push((a * b, NAMonomial::node(m.clone(), n.clone())));
            }
        }
        NAPoly::new(terms)
    }

    fn keep_meta(mut self, from: &NAPoly) -> NAPoly {
        if from.arity == self.arity {
            self.signature = from.signature.clone();
        }
        self.sign_rule = from.sign_rule;
        self
    }

    /// Every monomial uses each slot `1..=arity` exactly once.
    pub fn is_multilinear(&self) -> bool {
        self.terms.iter().all(|(_, m)| {
            let mut order = m.leaf_order();
            order.sort_unstable();
            order == (1..=self.arity).collect::<Vec<_>>()
        })
    }

    pub fn check_multilinear(&self) -> Result<()> {
        if self.is_multilinear() {
            Ok(())
        } else {
            Err(Error::NotMultilinear(self.to_string()))
        }
    }

    pub fn max_derivative(&self) -> u32 {
        self.terms.iter().flat_map(|(_, m)| m.leaves()).map(|v| v.derivative).max().unwrap_or(0)
    }

    /// Total number of derivatives in the most decorated monomial.
    pub fn total_derivatives(&self) -> u32 {
        self.terms.iter().map(|(_, m)| m.leaves().iter().map(|v| v.derivative).sum()).max().unwrap_or(0)
    }

    /// Substitutes slot `s` by slot `map[s - 1]` and merges equal monomials.
    pub fn substitute(&self, map: &[usize]) -> Result<NAPoly> {
        if map.len() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: map.len() });
        }
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| (c.clone(), m.relabel(&mut |_, v| NAVariable { slot: map[v.slot - 1], derivative: v.derivative })))
            .collect();
        Ok(NAPoly::new(terms).with_sign_rule(self.sign_rule))
    }
}

impl fmt::Display for NAPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, m)) in self.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k == 0, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            if !abs.is_one() {
                write!(f, "{abs} ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Full multilinearization of a homogeneous ungraded polynomial.
///
/// Slot `s` occurring `m_s` times is replaced by `m_s` fresh consecutive
/// slots (numbered in slot order) and every monomial is summed over all
/// ways of distributing its occurrences of `s` onto them. Substituting the
/// fresh slots back gives `∏ m_s!` times the input.
pub fn linearize(p: &NAPoly) -> Result<NAPoly> {
    if p.signature.contains(&SlotParity::Is(Parity::Odd)) || p.sign_rule == SignRule::Super {
        return Err(Error::Unsupported("linearization of graded identities is not implemented".into()));
    }
    let Some((_, first)) = p.terms.first() else {
        return Ok(NAPoly::new(Vec::new()));
    };
    let mult = |m: &NAMonomial| {
        let mut counts = vec![0usize; p.arity + 1];
        for s in m.leaf_order() {
            counts[s] += 1;
        }
        counts
    };
    let counts = mult(first);
    if p.terms.iter().any(|(_, m)| mult(m) != counts) {
        return Err(Error::Unsupported("identity is not homogeneous".into()));
    }
    // fresh block start for each original slot
    let mut start = vec![0usize; p.arity + 2];
    let mut next = 1;
    for s in 1..=p.arity {
        start[s] = next;
        next += counts[s];
    }
    let mut terms = Vec::new();
    for (c, m) in &p.terms {
        let order = m.leaf_order();
        // occurrence positions per slot
        let mut assignments: Vec<Vec<usize>> = vec![Vec::new()];
        for s in 1..=p.arity {
            let block: Vec<usize> = (start[s]..start[s] + counts[s]).collect();
            let perms = permutations(&block);
            assignments = assignments
                .into_iter()
                .flat_map(|a| perms.iter().map(move |q| [a.clone(), q.clone()].concat()))
                .collect();
        }
        for a in assignments {
            // a lists fresh slots block by block; map each leaf to its slot's next fresh slot
            let mut cursor: Vec<usize> = vec![0; p.arity + 1];
            let mut offset = vec![0usize; p.arity + 1];
            let mut acc = 0;
            for s in 1..=p.arity {
                offset[s] = acc;
                acc += counts[s];
            }
            let relabeled = m.relabel(&mut |pos, v| {
                let s = order[pos];
                let fresh = a[offset[s] + cursor[s]];
                cursor[s] += 1;
                NAVariable { slot: fresh, derivative: v.derivative }
            });
            terms.push((c.clone(), relabeled));
        }
    }
    Ok(NAPoly::new(terms))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}
