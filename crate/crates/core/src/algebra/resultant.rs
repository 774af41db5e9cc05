//! Resultants as Sylvester-matrix determinants. The determinant is computed
//! by fraction-free Bareiss elimination over the polynomial ring, so the
//! entries never leave exact arithmetic.

use super::poly::Poly;
use super::AlgebraError;

/// Determinant of a square matrix of polynomials (Bareiss).
fn det(mut m: Vec<Vec<Poly>>, vars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(vars);
    }
    let mut sign = false;
    let mut prev = Poly::one(vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|i| !m[*i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Resultant of p and q with respect to `var`. Vanishes at a value of the
/// remaining variables exactly when p and q share a root over the complex
/// numbers there, or both leading coefficients vanish.
pub fn resultant(p: &Poly, q: &Poly, var: usize) -> Result<Poly, AlgebraError> {
    assert_eq!(p.vars(), q.vars());
    let dp = p.deg_in(var) as usize;
    let dq = q.deg_in(var) as usize;
    if p.is_zero() || q.is_zero() || dp == 0 || dq == 0 {
        return Err(AlgebraError::DegenerateDegrees);
    }
    let vars = p.vars();
    let pc = p.coeffs_in(var);
    let qc = q.coeffs_in(var);
    let n = dp + dq;
    let mut m = vec![vec![Poly::zero(vars); n]; n];
    // dq rows of p's coefficients, then dp rows of q's, highest degree first
    for r in 0..dq {
        for (i, c) in pc.iter().rev().enumerate() {
            m[r][r + i] = c.clone();
        }
    }
    for r in 0..dp {
        for (i, c) in qc.iter().rev().enumerate() {
            m[dq + r][r + i] = c.clone();
        }
    }
    let d = det(m, vars);
    debug_assert_eq!(d.deg_in(var), 0);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::*;

    fn p2(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn resultant_examples() {
        // substitute y = x into y^2 - x
        let r = resultant(&p2("y^2 - x"), &p2("y - x"), 1).unwrap();
        assert_eq!(r, p2("x^2 - x"));
        // coprime constants: nonzero constant
        let r = resultant(&p2("y - 1"), &p2("y + 1"), 1).unwrap();
        assert_eq!(r, p2("2"));
        // 2x2 Sylvester determinant: det [[x, -1], [1, -x]] = 1 - x^2
        let r = resultant(&p2("x*y - 1"), &p2("y - x"), 1).unwrap();
        assert_eq!(r, p2("1 - x^2"));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(resultant(&p2("x"), &p2("y"), 1).is_err());
        assert!(resultant(&Poly::zero(2), &p2("y"), 1).is_err());
    }

    #[test]
    fn vanishes_exactly_at_shared_roots() {
        // p = (y - x)(y - 1), q = (y - 2x)(y + 3): share a root in y at
        // x where x = 2x (x=0), x = -3, 1 = 2x (x=1/2), or 1 = -3 (never)
        let p = &p2("y - x") * &p2("y - 1");
        let q = &p2("y - 2*x") * &p2("y + 3");
        let r = resultant(&p, &q, 1).unwrap();
        for (x, expect_zero) in [(0i64, true), (-3, true), (7, false)] {
            let v = r
                .eval(&[crate::algebra::scalar::int(x), crate::algebra::scalar::int(0)])
                .unwrap();
            assert_eq!(v.numer() == &num_bigint::BigInt::from(0), expect_zero, "x={x}");
        }
        let half = crate::algebra::scalar::frac(1, 2);
        let v = r.eval(&[half, crate::algebra::scalar::int(0)]).unwrap();
        assert!(num_traits::Zero::is_zero(&v));
    }
}
