//! Identity mini-language.
//!
//! ```text
//! poly    := ['+' | '-'] term (('+' | '-') term)*
//! term    := [rational ['*']] product
//! product := primary [primary]            juxtaposition multiplies
//! primary := var | '(' poly ')' | '(' poly ',' poly ',' poly ')' | '[' poly ',' poly ']'
//! var     := 'x' digit{1-9} "'"*          primes are derivatives
//! rational:= digits ['/' digits]
//! ```
//!
//! `(a,b,c)` is the associator `(ab)c − a(bc)` and `[a,b]` the commutator
//! `ab − ba`. Three factors in a row must be parenthesized.

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{NAMonomial, NAPoly, NAVariable};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

pub fn parse_identity(s: &str) -> Result<NAPoly> {
    let mut p = Parser { chars: s.chars().collect(), pos: 0 };
    let poly = p.poly()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return p.err("unexpected trailing input");
    }
    if poly.is_zero() {
        return Err(Error::Parse(format!("identity `{s}` is identically zero")));
    }
    Ok(poly)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} at position {}", self.pos)))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{c}`"))
        }
    }

    fn poly(&mut self) -> Result<NAPoly> {
        let mut sign = Scalar::one();
        if self.eat('-') {
            sign = -sign;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?.scale(&sign);
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NAPoly> {
        let coeff = self.rational()?;
        if coeff.is_some() {
            self.eat('*');
        }
        let first = self.primary()?;
        let prod = if self.starts_primary() { first.mul(&self.primary()?) } else { first };
        if self.starts_primary() {
            return self.err("three factors in a row; add parentheses");
        }
        Ok(match coeff {
            Some(c) => prod.scale(&c),
            None => prod,
        })
    }

    fn starts_primary(&mut self) -> bool {
        matches!(self.peek(), Some('x' | '(' | '['))
    }

    fn rational(&mut self) -> Result<Option<Scalar>> {
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok(None);
        }
        let num = self.digits();
        let den = if self.eat('/') {
            if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return self.err("expected a denominator");
            }
            self.digits()
        } else {
            BigInt::one()
        };
        if num_traits::Zero::is_zero(&den) {
            return self.err("zero denominator");
        }
        Ok(Some(Scalar::new(num, den)))
    }

    fn digits(&mut self) -> BigInt {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().expect("digits")
    }

    fn primary(&mut self) -> Result<NAPoly> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                let slot = match self.chars.get(self.pos).and_then(|c| c.to_digit(10)) {
                    Some(d @ 1..=9) => d as usize,
                    _ => return self.err("variables are x1 .. x9"),
                };
                self.pos += 1;
                if self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return self.err("variables are x1 .. x9");
                }
                let mut derivative = 0;
                while self.chars.get(self.pos) == Some(&'\'') {
                    derivative += 1;
                    self.pos += 1;
                }
                Ok(NAPoly::monomial(NAMonomial::Leaf(NAVariable { slot, derivative })))
            }
            Some('(') => {
                self.pos += 1;
                let first = self.poly()?;
                if self.eat(',') {
                    let b = self.poly()?;
                    self.expect(',')?;
                    let c = self.poly()?;
                    self.expect(')')?;
                    return Ok(first.mul(&b).mul(&c).sub(&first.mul(&b.mul(&c))));
                }
                self.expect(')')?;
                Ok(first)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.poly()?;
                self.expect(',')?;
                let b = self.poly()?;
                self.expect(']')?;
                Ok(a.mul(&b).sub(&b.mul(&a)))
            }
            _ => self.err("expected a variable, `(` or `[`"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::int;

    #[test]
    fn products_and_brackets() {
        let p = parse_identity("((x1 x2) x3)").unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.to_string(), "((x1 x2) x3)");
        let c = parse_identity("[x1,x2]").unwrap();
        assert_eq!(c.terms().len(), 2);
        let a = parse_identity("(x1,x2,x3) - (x2,x1,x3)").unwrap();
        assert_eq!(a.terms().len(), 4);
        assert!(a.is_multilinear());
        let d = parse_identity("1/2 x1' x2'").unwrap();
        assert_eq!(d.terms()[0].0, crate::exactlin::rat(1, 2));
        assert_eq!(d.max_derivative(), 1);
    }

    #[test]
    fn juxtaposition_limits() {
        assert!(parse_identity("x1 x2 x3").is_err());
        assert!(parse_identity("(x1 x2").is_err());
        assert!(parse_identity("x0").is_err());
        assert!(parse_identity("x12").is_err());
        assert!(parse_identity("(x1 x2) - (x1 x2)").is_err());
        assert_eq!(parse_identity("2*(x1 x2) - (x1 x2)").unwrap().terms()[0].0, int(1));
    }
}
