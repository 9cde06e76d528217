//! Index arithmetic for rules: rational polynomials in `(n, i)` for
//! coefficients and integer affine forms for produced indices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exactlin::{int, Scalar};

/// Polynomial in the input index `n` and the summation index `i`.
/// Keys are `(deg_n, deg_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct IndexPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl IndexPoly {
    pub fn zero() -> IndexPoly {
        IndexPoly::default()
    }

    pub fn constant(c: Scalar) -> IndexPoly {
        let mut p = IndexPoly::zero();
        p.add_term((0, 0), c);
        p
    }

    pub fn one() -> IndexPoly {
        IndexPoly::constant(Scalar::one())
    }

    pub fn n() -> IndexPoly {
        let mut p = IndexPoly::zero();
        p.add_term((1, 0), Scalar::one());
        p
    }

    pub fn i() -> IndexPoly {
        let mut p = IndexPoly::zero();
        p.add_term((0, 1), Scalar::one());
        p
    }

    fn add_term(&mut self, exp: (u32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &IndexPoly) -> IndexPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> IndexPoly {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, other: &IndexPoly) -> IndexPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> IndexPoly {
        let mut out = IndexPoly::zero();
        for (e, x) in &self.terms {
            out.add_term(*e, x * c);
        }
        out
    }

    pub fn mul(&self, other: &IndexPoly) -> IndexPoly {
        let mut out = IndexPoly::zero();
        for ((a1, b1), x) in &self.terms {
            for ((a2, b2), y) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> IndexPoly {
        let mut out = IndexPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, n: i64, i: i64) -> Scalar {
        let n = BigInt::from(n);
        let i = BigInt::from(i);
        let mut acc = Scalar::zero();
        for ((a, b), c) in &self.terms {
            let m = num_traits::pow(n.clone(), *a as usize) * num_traits::pow(i.clone(), *b as usize);
            acc += c * Scalar::from_integer(m);
        }
        acc
    }

    pub fn uses_i(&self) -> bool {
        self.terms.keys().any(|(_, b)| *b > 0)
    }

    /// `self(m)` with `m := a(n, i)`, treating `self` as a polynomial in `n`
    /// only (its `i`-part must be absent).
    pub fn compose_affine(&self, a: &Affine) -> Result<IndexPoly, Error> {
        if self.uses_i() {
            return Err(Error::NotExpressible(format!("coefficient `{self}` uses the summation index")));
        }
        let m = a.to_poly();
        let mut out = IndexPoly::zero();
        for ((deg, _), c) in &self.terms {
            out = out.add(&m.pow(*deg).scale(c));
        }
        Ok(out)
    }

    fn terms_display_order(&self) -> Vec<(&(u32, u32), &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|&(x, _)| std::cmp::Reverse((x.0 + x.1, x.0)));
        v
    }
}

impl fmt::Display for IndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.terms_display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || (*a == 0 && *b == 0) {
                factors.push(abs.to_string());
            }
            for (var, e) in [("n", *a), ("i", *b)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for IndexPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        ExprParser::new(s).parse_all()
    }
}

impl TryFrom<String> for IndexPoly {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<IndexPoly> for String {
    fn from(p: IndexPoly) -> String {
        p.to_string()
    }
}

/// `constant + n_coeff * n + i_coeff * i`, evaluated over the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Affine {
    pub constant: i64,
    pub n: i64,
    pub i: i64,
}

impl Affine {
    pub const fn new(constant: i64, n: i64, i: i64) -> Affine {
        Affine { constant, n, i }
    }

    pub const fn constant(c: i64) -> Affine {
        Affine { constant: c, n: 0, i: 0 }
    }

    /// `n + c`
    pub const fn shift(c: i64) -> Affine {
        Affine { constant: c, n: 1, i: 0 }
    }

    pub fn eval(&self, n: i64, i: i64) -> i64 {
        self.constant + self.n * n + self.i * i
    }

    pub fn to_poly(&self) -> IndexPoly {
        IndexPoly::constant(int(self.constant))
            .add(&IndexPoly::n().scale(&int(self.n)))
            .add(&IndexPoly::i().scale(&int(self.i)))
    }

    pub fn from_poly(p: &IndexPoly) -> Result<Affine, Error> {
        let mut out = Affine::default();
        for ((a, b), c) in &p.terms {
            if !c.is_integer() {
                return Err(Error::Parse(format!("index expression `{p}` has a non-integer coefficient")));
            }
            let v = c.to_integer().to_i64().ok_or_else(|| Error::Parse(format!("index coefficient too large in `{p}`")))?;
            match (a, b) {
                (0, 0) => out.constant = v,
                (1, 0) => out.n = v,
                (0, 1) => out.i = v,
                _ => return Err(Error::Parse(format!("index expression `{p}` is not affine"))),
            }
        }
        Ok(out)
    }

    /// `self(m)` with `m := inner(n, i)`; `self` must not use `i`.
    pub fn compose(&self, inner: &Affine) -> Result<Affine, Error> {
        if self.i != 0 {
            return Err(Error::NotExpressible(format!("index `{self}` uses the summation index")));
        }
        Ok(Affine {
            constant: self.constant + self.n * inner.constant,
            n: self.n * inner.n,
            i: self.n * inner.i,
        })
    }

    pub fn uses_i(&self) -> bool {
        self.i != 0
    }

    pub fn is_constant(&self) -> bool {
        self.n == 0 && self.i == 0
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl FromStr for Affine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Affine::from_poly(&s.parse::<IndexPoly>()?)
    }
}

impl TryFrom<String> for Affine {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Affine> for String {
    fn from(a: Affine) -> String {
        a.to_string()
    }
}

struct ExprParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str) -> Self {
        ExprParser { src, bytes: src.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<IndexPoly, Error> {
        if self.peek().is_none() {
            return Err(self.err("empty expression"));
        }
        let p = self.expr()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected character"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<IndexPoly, Error> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IndexPoly, Error> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&(Scalar::one() / Scalar::from_integer(d)));
                }
                Some(c) if c == b'(' || c == b'n' || c == b'i' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<IndexPoly, Error> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e = e.to_u32().filter(|e| *e <= 16).ok_or_else(|| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IndexPoly, Error> {
        match self.peek() {
            Some(b'n') => {
                self.pos += 1;
                Ok(IndexPoly::n())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(IndexPoly::i())
            }
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => Ok(IndexPoly::constant(Scalar::from_integer(self.integer()?))),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        self.src[start..self.pos].parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    #[test]
    fn parse_and_eval() {
        let p: IndexPoly = "n - i + 1".parse().unwrap();
        assert_eq!(p.eval(5, 2), int(4));
        let q: IndexPoly = "(n+1-2*i)".parse().unwrap();
        assert_eq!(q.eval(1, 1), int(0));
        let r: IndexPoly = "1/2*n^2 - 3".parse().unwrap();
        assert_eq!(r.eval(3, 0), rat(3, 2));
        assert!("n + ".parse::<IndexPoly>().is_err());
        assert!("k".parse::<IndexPoly>().is_err());
        assert!("n/0".parse::<IndexPoly>().is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["n - i + 1", "-2*i + n + 1", "1/2*n^2", "0", "3", "n*i - 1"] {
            let p: IndexPoly = s.parse().unwrap();
            let again: IndexPoly = p.to_string().parse().unwrap();
            assert_eq!(p, again, "{s} -> {p}");
        }
        assert_eq!("n + 1 - i".parse::<IndexPoly>().unwrap().to_string(), "n - i + 1");
    }

    #[test]
    fn affine_forms() {
        let a: Affine = "n - i + 1".parse().unwrap();
        assert_eq!(a, Affine::new(1, 1, -1));
        assert_eq!(a.eval(4, 1), 4);
        assert!("n^2".parse::<Affine>().is_err());
        assert!("n/2".parse::<Affine>().is_err());
        // d(x_m) = x_{m+1} composed with m = n - i
        let outer = Affine::shift(1);
        let inner: Affine = "n - i".parse().unwrap();
        assert_eq!(outer.compose(&inner).unwrap(), "n - i + 1".parse().unwrap());
    }

    #[test]
    fn compose_coefficient() {
        // (m + 1) with m = n - i gives n - i + 1
        let q: IndexPoly = "n + 1".parse().unwrap();
        let got = q.compose_affine(&"n - i".parse().unwrap()).unwrap();
        assert_eq!(got, "n - i + 1".parse().unwrap());
    }
}
