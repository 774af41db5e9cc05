//! Recursive-descent parser for the canonical polynomial strings produced by
//! `Poly`'s Display impl. Grammar: sums of products of powers of rationals,
//! parenthesized expressions, and the variables x, y, T.

use super::poly::{Poly, VAR_NAMES};
use super::scalar::Scalar;
use super::AlgebraError;
use num_bigint::BigInt;
use num_rational::BigRational;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: usize,
}

pub fn parse_poly(s: &str, vars: usize) -> Result<Poly, AlgebraError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        vars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(AlgebraError::Parse(format!(
            "trailing input at byte {} in {s:?}",
            p.pos
        )));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                -&self.term()?
            }
            Some(b'+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, AlgebraError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.uint()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Poly, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(AlgebraError::Parse("expected ')'".into()));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint_big()?;
                if self.peek() == Some(b'/') {
                    self.bump();
                    let den = self.uint_big()?;
                    if den == BigInt::from(0) {
                        return Err(AlgebraError::Parse("zero denominator".into()));
                    }
                    Ok(Poly::constant(self.vars, BigRational::new(num, den)))
                } else {
                    Ok(Poly::constant(self.vars, Scalar::from_integer(num)))
                }
            }
            Some(c) => {
                for (i, name) in VAR_NAMES.iter().enumerate().take(self.vars) {
                    if c == name.as_bytes()[0] {
                        self.bump();
                        return Ok(Poly::var(self.vars, i));
                    }
                }
                Err(AlgebraError::Parse(format!(
                    "unexpected character {:?}",
                    c as char
                )))
            }
            None => Err(AlgebraError::Parse("unexpected end of input".into())),
        }
    }

    fn uint(&mut self) -> Result<u32, AlgebraError> {
        let big = self.uint_big()?;
        big.try_into()
            .map_err(|_| AlgebraError::Parse("exponent too large".into()))
    }

    fn uint_big(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(AlgebraError::Parse("expected a number".into()));
        }
        let txt = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        txt.parse()
            .map_err(|_| AlgebraError::Parse("bad integer".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{frac, int};

    #[test]
    fn parses_terms() {
        let p = parse_poly("2*x^2*y - 1/2*y + 3", 2).unwrap();
        assert_eq!(p.eval(&[int(1), int(2)]).unwrap(), int(6));
        assert_eq!(p.eval(&[int(0), int(1)]).unwrap(), frac(5, 2));
        let q = parse_poly("(x + y)^2", 2).unwrap();
        assert_eq!(q, parse_poly("x^2 + 2*x*y + y^2", 2).unwrap());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x +", 2).is_err());
        assert!(parse_poly("z", 2).is_err());
        assert!(parse_poly("T", 2).is_err());
        assert!(parse_poly("T", 3).is_ok());
        assert!(parse_poly("1/0", 2).is_err());
    }
}
