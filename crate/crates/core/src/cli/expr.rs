//! Class expressions such as `2*D1*D4 + [1,2] + 1/2*(D3 + D4)`.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := scalar? factor ('*' factor)*
//! factor := 'D' int | '[' intlist ']' | '(' expr ')'
//! ```
//!
//! `*` is the quantum product. A scalar may also stand alone as a multiple
//! of the unit, and `-` before a term negates it. Indices are 1-based.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Int, Rational};
use crate::quantum::{QuantumClass, QuantumRing};
use crate::ray_set::RaySet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Divisor(usize),
    Stratum(Vec<usize>),
    Group(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub scalar: Rational,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{} at offset {}", what, self.pos)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<Int> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn label(&mut self) -> Result<usize> {
        let n = self.uint()?;
        match usize::try_from(&n) {
            Ok(k) if k >= 1 => Ok(k),
            _ => self.err("indices start at 1"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            // A leading '-' is consumed by the term itself.
            if self.eat(b'+') || self.peek() == Some(b'-') {
                terms.push(self.term()?);
            } else {
                break;
            }
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> Result<Term> {
        let mut scalar = Rational::one();
        if self.eat(b'-') {
            scalar = -scalar;
        }
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let num = self.uint()?;
            let value = if self.eat(b'/') {
                let den = self.uint()?;
                if den.is_zero() {
                    return self.err("zero denominator");
                }
                Rational::new(num, den)
            } else {
                Rational::from_integer(num)
            };
            scalar *= value;
            if !self.eat(b'*') {
                return Ok(Term { scalar, factors: Vec::new() });
            }
        }
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(Term { scalar, factors })
    }

    fn factor(&mut self) -> Result<Factor> {
        match self.peek() {
            Some(b'D') => {
                self.pos += 1;
                Ok(Factor::Divisor(self.label()?))
            }
            Some(b'[') => {
                self.pos += 1;
                let mut labels = Vec::new();
                if !self.eat(b']') {
                    loop {
                        labels.push(self.label()?);
                        if self.eat(b']') {
                            break;
                        }
                        if !self.eat(b',') {
                            return self.err("expected ',' or ']'");
                        }
                    }
                }
                Ok(Factor::Stratum(labels))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(Factor::Group(e))
            }
            _ => self.err("expected D<i>, [i,...] or ("),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Largest 1-based index mentioned.
    pub fn max_label(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| &t.factors)
            .map(|f| match f {
                Factor::Divisor(i) => *i,
                Factor::Stratum(v) => v.iter().copied().max().unwrap_or(0),
                Factor::Group(e) => e.max_label(),
            })
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, qr: &QuantumRing) -> Result<QuantumClass> {
        let m = qr.fan().num_rays();
        if self.max_label() > m {
            return Err(Error::Parse(format!("index {} out of range 1..{}", self.max_label(), m)));
        }
        let mut out = QuantumClass::zero();
        for t in &self.terms {
            let mut acc = qr.unit();
            for f in &t.factors {
                let v = match f {
                    Factor::Divisor(i) => {
                        QuantumClass::classical(qr.cohomology().monomial_class(&[i - 1])?, m)
                    }
                    Factor::Stratum(labels) => {
                        let set = RaySet::from_labels(labels.iter().copied())
                            .ok_or_else(|| Error::Parse("empty label".into()))?;
                        if set.len() != labels.len() {
                            return Err(Error::Parse(format!("repeated index in {:?}", labels)));
                        }
                        QuantumClass::classical(qr.cohomology().stratum_class(set)?, m)
                    }
                    Factor::Group(e) => e.evaluate(qr)?,
                };
                acc = qr.quantum_product(&acc, &v)?;
            }
            out = &out + &acc.scaled(&t.scalar);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn parses_grammar() {
        let e = parse("2*D1*D4 + [1,2] - 1/2*(D3 + D4)").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert_eq!(e.terms[0].scalar, Rational::from_integer(2.into()));
        assert_eq!(e.terms[0].factors, vec![Factor::Divisor(1), Factor::Divisor(4)]);
        assert_eq!(e.terms[1].factors, vec![Factor::Stratum(vec![1, 2])]);
        assert_eq!(e.terms[2].scalar, Rational::new((-1).into(), 2.into()));
        assert_eq!(e.max_label(), 4);
        assert!(parse("[]").is_ok());
        assert!(parse("3").is_ok());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "D", "D0", "[1,", "(D1", "D1 D2", "1/0*D1", "x"] {
            assert!(matches!(parse(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn evaluates_on_p2() {
        let qr = QuantumRing::new(&catalog::p2()).unwrap();
        let pt = parse("[1,2]").unwrap().evaluate(&qr).unwrap();
        assert_eq!(pt, QuantumClass::classical(qr.cohomology().point(), 3));
        let h2 = parse("D1*D2").unwrap().evaluate(&qr).unwrap();
        assert_eq!(h2, pt);
        let zero = parse("D1 - D3").unwrap().evaluate(&qr).unwrap();
        assert!(zero.is_zero());
        assert!(matches!(parse("D4").unwrap().evaluate(&qr), Err(Error::Parse(_))));
        assert!(matches!(parse("[1,1]").unwrap().evaluate(&qr), Err(Error::Parse(_))));
    }
}
