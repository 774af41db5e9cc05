//! Quotients of polynomials, always kept reduced: gcd(num, den) is a unit
//! and the denominator is primitive with positive leading coefficient.
//! Indeterminacy questions are only ever decided on these reduced
//! representatives.

use std::fmt;

use super::gcd::poly_gcd;
use super::poly::Poly;
use super::scalar::Scalar;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<RatFun, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let mut f = RatFun { num, den };
        f.reduce();
        Ok(f)
    }

    pub fn from_poly(num: Poly) -> RatFun {
        let den = Poly::one(num.vars());
        RatFun { num, den }
    }

    pub fn constant(vars: usize, c: Scalar) -> RatFun {
        RatFun::from_poly(Poly::constant(vars, c))
    }

    pub fn var(vars: usize, i: usize) -> RatFun {
        RatFun::from_poly(Poly::var(vars, i))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> usize {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.den.vars());
            return;
        }
        let g = poly_gcd(&self.num, &self.den);
        if !g.is_constant() {
            self.num = self.num.div_exact(&g).expect("gcd divides");
            self.den = self.den.div_exact(&g).expect("gcd divides");
        }
        // canonical denominator: primitive, positive leading coefficient
        let c = self.den.content();
        self.den = self.den.scale(&c.recip());
        self.num = self.num.scale(&c.recip());
    }

    pub fn add(&self, rhs: &RatFun) -> RatFun {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RatFun::new(num, den).expect("nonzero denominators")
    }

    pub fn sub(&self, rhs: &RatFun) -> RatFun {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RatFun::new(num, den).expect("nonzero denominators")
    }

    pub fn mul(&self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }

    pub fn div(&self, rhs: &RatFun) -> Result<RatFun, AlgebraError> {
        if rhs.num.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        RatFun::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> RatFun {
        RatFun {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Exact evaluation; None marks indeterminacy (the reduced denominator
    /// vanishes at the point).
    pub fn eval(&self, point: &[Scalar]) -> Result<Option<Scalar>, AlgebraError> {
        let d = self.den.eval(point)?;
        if num_traits::Zero::is_zero(&d) {
            return Ok(None);
        }
        let n = self.num.eval(point)?;
        Ok(Some(n / d))
    }

    /// Evaluates a polynomial at rational-function arguments, producing a
    /// single reduced fraction over the common denominator.
    fn poly_at(p: &Poly, subs: &[RatFun]) -> Result<RatFun, AlgebraError> {
        if p.vars() != subs.len() {
            return Err(AlgebraError::ArityMismatch {
                expected: p.vars(),
                got: subs.len(),
            });
        }
        let out_vars = subs
            .first()
            .map(|f| f.vars())
            .unwrap_or_else(|| p.vars());
        let degs: Vec<u32> = (0..p.vars()).map(|i| p.deg_in(i)).collect();
        let mut num = Poly::zero(out_vars);
        for (m, c) in p.terms() {
            let mut t = Poly::constant(out_vars, c.clone());
            for (i, e) in m.0.iter().enumerate() {
                t = &t * &subs[i].num.pow(*e);
                t = &t * &subs[i].den.pow(degs[i] - e);
            }
            num = &num + &t;
        }
        let mut den = Poly::one(out_vars);
        for (i, d) in degs.iter().enumerate() {
            den = &den * &subs[i].den.pow(*d);
        }
        RatFun::new(num, den)
    }

    /// Substitution of rational functions for the variables; the reduced
    /// quotient is returned, and a denominator that collapses to zero
    /// signals that the composite is not a rational function there.
    pub fn compose(&self, subs: &[RatFun]) -> Result<RatFun, AlgebraError> {
        let n = Self::poly_at(&self.num, subs)?;
        let d = Self::poly_at(&self.den, subs)?;
        if d.is_zero() {
            return Err(AlgebraError::IndeterminateComposition);
        }
        n.div(&d).map_err(|_| AlgebraError::IndeterminateComposition)
    }

    /// Partial derivative as a reduced rational function.
    pub fn partial(&self, var: usize) -> RatFun {
        let num = &(&self.num.partial(var) * &self.den) - &(&self.num * &self.den.partial(var));
        let den = &self.den * &self.den;
        RatFun::new(num, den).expect("nonzero denominator")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().map(|c| num_traits::One::is_one(&c)) == Some(true) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::super::scalar::int;
    use super::*;

    fn p2(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    fn rf(num: &str, den: &str) -> RatFun {
        RatFun::new(p2(num), p2(den)).unwrap()
    }

    #[test]
    fn reduction_is_mandatory() {
        let f = rf("x^2 - y^2", "x - y");
        assert_eq!(f, RatFun::from_poly(p2("x + y")));
        assert_eq!(f.eval(&[int(1), int(1)]).unwrap(), Some(int(2)));
    }

    #[test]
    fn compose_examples() {
        // x/y at (u*v, v) collapses to u
        let f = rf("x", "y");
        let g = f
            .compose(&[RatFun::from_poly(p2("x*y")), RatFun::from_poly(p2("y"))])
            .unwrap();
        assert_eq!(g, RatFun::from_poly(p2("x")));
        // identity substitution
        let idx = RatFun::from_poly(p2("x"));
        let idy = RatFun::from_poly(p2("y"));
        assert_eq!(idx.compose(&[idx.clone(), idy.clone()]).unwrap(), idx);
        // (x+y)/(x-y) at (1/u, 1/v) = (v+u)/(v-u)
        let f = rf("x + y", "x - y");
        let inv_x = rf("1", "x");
        let inv_y = rf("1", "y");
        let g = f.compose(&[inv_x, inv_y]).unwrap();
        assert_eq!(g, rf("y + x", "y - x"));
    }

    #[test]
    fn compose_round_trip_random() {
        // substituting shifted coordinates and shifting back returns the
        // original function, for a spread of low-degree fractions
        let mut state = 0xfeed5eedu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 7) as i64 - 3
        };
        let fwd = [rf("x + 2", "1"), rf("y - 3", "1")];
        let back = [rf("x - 2", "1"), rf("y + 3", "1")];
        let mut tried = 0;
        while tried < 50 {
            let mut num = Poly::zero(2);
            let mut den = Poly::zero(2);
            for _ in 0..4 {
                let (a, b) = (next().unsigned_abs() as u32 % 2, next().unsigned_abs() as u32 % 2);
                num.add_term(
                    super::super::poly::Mono(vec![a, b]),
                    int(next()),
                );
                den.add_term(
                    super::super::poly::Mono(vec![b, a]),
                    int(next()),
                );
            }
            if den.is_zero() {
                continue;
            }
            let f = RatFun::new(num, den).unwrap();
            let g = f.compose(&fwd).unwrap().compose(&back).unwrap();
            assert_eq!(g, f);
            tried += 1;
        }
    }

    #[test]
    fn indeterminate_composition_detected() {
        let f = rf("1", "x");
        let zero = RatFun::from_poly(Poly::zero(2));
        assert!(f.compose(&[zero, RatFun::from_poly(p2("y"))]).is_err());
    }

    #[test]
    fn pole_detection_on_reduced_form() {
        let f = rf("x", "x*y");
        // reduces to 1/y: no pole at x = 0 when y != 0
        assert_eq!(f.eval(&[int(0), int(2)]).unwrap(), Some(super::super::scalar::frac(1, 2)));
        assert_eq!(f.eval(&[int(3), int(0)]).unwrap(), None);
    }
}
