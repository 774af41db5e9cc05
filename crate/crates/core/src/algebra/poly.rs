//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are stored in a BTreeMap from exponent vectors to nonzero rational
//! coefficients. The map is keyed by graded lexicographic order with the
//! first variable lowest (x < y < T), so the leading term is the last entry.
//! At most three variables are ever used: two affine chart coordinates plus
//! one auxiliary variable for saturation-style triviality checks.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::Scalar;
use super::AlgebraError;

pub const VAR_NAMES: [&str; 3] = ["x", "y", "T"];

/// Exponent vector, ordered graded-lexicographically (degree first, then
/// exponents of the most significant variable down).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(vars: usize) -> Self {
        Mono(vec![0; vars])
    }

    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Mono(e)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn div_into(&self, other: &Mono) -> Mono {
        Mono(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total().cmp(&other.total()) {
            Ordering::Equal => {
                // ties broken lexicographically, x most significant
                for (a, b) in self.0.iter().zip(other.0.iter()) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial. Invariant: no zero coefficients are stored, and every
/// key has length `vars`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: usize,
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero(vars: usize) -> Self {
        Poly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(vars), c);
        }
        Poly { vars, terms }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn var(vars: usize, i: usize) -> Self {
        assert!(i < vars);
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(vars, i), Scalar::one());
        Poly { vars, terms }
    }

    pub fn from_terms(vars: usize, iter: impl IntoIterator<Item = (Mono, Scalar)>) -> Self {
        let mut p = Poly::zero(vars);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        debug_assert_eq!(m.0.len(), self.vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total()).max()
    }

    pub fn deg_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Leading term under the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars);
        }
        Poly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars);
        }
        Poly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a.clone() * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        if point.len() != self.vars {
            return Err(AlgebraError::ArityMismatch {
                expected: self.vars,
                got: point.len(),
            });
        }
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.0.iter().enumerate() {
                for _ in 0..*e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Polynomial substitution: variable i is replaced by `subs[i]`.
    pub fn subst(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.vars);
        let out_vars = subs.first().map(|p| p.vars).unwrap_or(self.vars);
        let mut acc = Poly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(out_vars, c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    t = &t * &subs[i].pow(*e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut mm = m.clone();
                mm.0[var] = e - 1;
                out.add_term(mm, c.clone() * Scalar::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Pads the exponent vectors up to `vars` variables (new variables get
    /// exponent zero). Used to move bivariate generators into the three
    /// variable ring for saturation checks.
    pub fn lift_vars(&self, vars: usize) -> Poly {
        assert!(vars >= self.vars);
        Poly {
            vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(vars, 0);
                    (Mono(e), c.clone())
                })
                .collect(),
        }
    }

    /// Exact division; returns None when `self` is not a polynomial multiple
    /// of `div`.
    pub fn div_exact(&self, div: &Poly) -> Option<Poly> {
        assert_eq!(self.vars, div.vars);
        if div.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero(self.vars));
        }
        let (dm, dc) = div.leading().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.vars);
        while let Some((rm, rc)) = rem.leading() {
            if !dm.divides(rm) {
                return None;
            }
            let qm = dm.div_into(rm);
            let qc = rc / &dc;
            quot.add_term(qm.clone(), qc.clone());
            rem = &rem - &div.mul_term(&qm, &qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to one variable: index d holds the
    /// coefficient of var^d, itself a polynomial of degree zero in var.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.deg_in(var) as usize;
        let mut out = vec![Poly::zero(self.vars); deg + 1];
        for (m, c) in &self.terms {
            let d = m.0[var] as usize;
            let mut mm = m.clone();
            mm.0[var] = 0;
            out[d].add_term(mm, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: usize, var: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(vars);
        for (d, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut mm = m.clone();
                mm.0[var] += d as u32;
                out.add_term(mm, a.clone());
            }
        }
        out
    }

    /// Rational content: the positive rational c such that self / c has
    /// coprime integer coefficients; carries the sign of the leading
    /// coefficient.
    pub fn content(&self) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Scalar::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        content
    }

    /// Primitive part with coprime integer coefficients and positive leading
    /// coefficient under the graded lexicographic order.
    pub fn normalized(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.recip())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut printed = false;
            if !abs.is_one() || m.is_one() {
                write!(f, "{abs}")?;
                printed = true;
            }
            for (i, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "{}", VAR_NAMES[i])?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
                printed = true;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.vars, rhs.vars);
        let mut out = Poly::zero(self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::super::scalar::{frac, int};
    use super::*;

    fn p2(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn grlex_leading_term() {
        // x dominates y at equal degree; higher degree dominates
        let p = p2("x^2*y + x*y^2 + x^3 + 1");
        let (m, _) = p.leading().unwrap();
        assert_eq!(m.0, vec![3, 0]);
        let q = p2("x*y^2 + y^3 + x");
        assert_eq!(q.leading().unwrap().0 .0, vec![1, 2]);
    }

    #[test]
    fn eval_examples() {
        let p = p2("x^2 + y");
        assert_eq!(p.eval(&[int(2), int(3)]).unwrap(), int(7));
        let z = Poly::zero(2);
        assert_eq!(z.eval(&[int(9), int(-4)]).unwrap(), int(0));
        let d = p2("x - y");
        assert_eq!(d.eval(&[int(5), int(5)]).unwrap(), int(0));
        assert!(p.eval(&[int(1)]).is_err());
    }

    #[test]
    fn exact_division() {
        let a = p2("x^2 - y^2");
        let b = p2("x - y");
        assert_eq!(a.div_exact(&b).unwrap(), p2("x + y"));
        assert!(a.div_exact(&p2("x + 1")).is_none());
        assert!(p2("0").div_exact(&b).unwrap().is_zero());
    }

    #[test]
    fn normalization() {
        let p = p2("4*x + 4*y").scale(&frac(1, 2));
        assert_eq!(p.normalized(), p2("x + y"));
        let q = p2("-3*y + 6*x");
        assert_eq!(q.normalized(), p2("2*x - y"));
        assert_eq!(q.normalized().leading_coeff(), int(2));
        assert_eq!(p2("-x + y").normalized(), p2("x - y"));
    }

    #[test]
    fn subst_and_partial() {
        let p = p2("x*y + y");
        let q = p.subst(&[p2("x + 1"), p2("y^2")]);
        assert_eq!(q, p2("x*y^2 + 2*y^2"));
        assert_eq!(p.partial(0), p2("y"));
        assert_eq!(p.partial(1), p2("x + 1"));
    }

    #[test]
    fn display_round_trip() {
        for s in ["x^2*y - 1/2*x + 3", "-x + y", "7", "0", "x*y^2 + x^2*y"] {
            let p = p2(s);
            assert_eq!(parse_poly(&p.to_string(), 2).unwrap(), p);
        }
    }
}
