//! Multivariate gcd by content/primitive-part recursion on one variable with
//! subresultant pseudo-remainder sequences. No factorization is involved.
//!
//! The result is normalized: coprime integer coefficients, positive leading
//! coefficient under the graded lexicographic order. gcd(0, 0) = 0.

use super::poly::Poly;
use super::AlgebraError;

/// Pseudo-remainder of a by b in the chosen variable: lc(b)^(da-db+1) * a
/// reduced modulo b, all arithmetic staying polynomial.
fn prem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.deg_in(var);
    debug_assert!(db > 0 || !b.is_zero());
    let b_coeffs = b.coeffs_in(var);
    let lc_b = b_coeffs[db as usize].clone();
    let mut r = a.clone();
    let da = a.deg_in(var);
    if da < db {
        return r;
    }
    let mut e = (da - db + 1) as i64;
    while !r.is_zero() && r.deg_in(var) >= db {
        let dr = r.deg_in(var);
        let r_coeffs = r.coeffs_in(var);
        let lc_r = r_coeffs[dr as usize].clone();
        // r = lc_b * r - lc_r * var^(dr-db) * b
        let shift = Poly::var(a.vars(), var).pow(dr - db);
        r = &(&lc_b * &r) - &(&(&lc_r * &shift) * b);
        e -= 1;
    }
    for _ in 0..e.max(0) {
        r = &r * &lc_b;
    }
    r
}

/// Content of p with respect to one variable: the gcd of its coefficients,
/// which live in the subring of polynomials with degree zero in that
/// variable.
fn content_in(p: &Poly, var: usize) -> Poly {
    let coeffs = p.coeffs_in(var);
    let mut g = Poly::zero(p.vars());
    for c in coeffs {
        if !c.is_zero() {
            g = poly_gcd(&g, &c);
        }
    }
    g
}

/// A greatest common divisor, normalized to content 1 with positive leading
/// coefficient. gcd(0, 0) = 0 by convention.
pub fn poly_gcd(p: &Poly, q: &Poly) -> Poly {
    assert_eq!(p.vars(), q.vars());
    if p.is_zero() {
        return q.normalized();
    }
    if q.is_zero() {
        return p.normalized();
    }
    if p.is_constant() || q.is_constant() {
        return Poly::one(p.vars());
    }
    // recurse on the most significant variable present in either operand
    let var = (0..p.vars())
        .rev()
        .find(|v| p.deg_in(*v) > 0 || q.deg_in(*v) > 0)
        .expect("nonconstant operands have a variable");
    if p.deg_in(var) == 0 {
        // p lives in the coefficient ring: gcd(p, q) = gcd(p, content(q))
        return poly_gcd(p, &content_in(q, var)).normalized();
    }
    if q.deg_in(var) == 0 {
        return poly_gcd(&content_in(p, var), q).normalized();
    }

    let cont_p = content_in(p, var);
    let cont_q = content_in(q, var);
    let cont_gcd = poly_gcd(&cont_p, &cont_q);
    let mut a = p.div_exact(&cont_p).expect("content divides");
    let mut b = q.div_exact(&cont_q).expect("content divides");
    if a.deg_in(var) < b.deg_in(var) {
        std::mem::swap(&mut a, &mut b);
    }

    // subresultant PRS
    let mut g = Poly::one(p.vars());
    let mut h = Poly::one(p.vars());
    loop {
        let delta = a.deg_in(var) - b.deg_in(var);
        let r = prem(&a, &b, var);
        if r.is_zero() {
            let pp = b.div_exact(&content_in(&b, var)).expect("content divides");
            return (&cont_gcd * &pp).normalized();
        }
        if r.deg_in(var) == 0 {
            return cont_gcd.normalized();
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = a.coeffs_in(var)[a.deg_in(var) as usize].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g
                .pow(d)
                .div_exact(&h.pow(d - 1))
                .expect("subresultant h update is exact"),
        };
    }
}

pub fn poly_gcd_many(polys: &[Poly]) -> Poly {
    let mut g = match polys.first() {
        Some(p) => Poly::zero(p.vars()),
        None => return Poly::zero(2),
    };
    for p in polys {
        g = poly_gcd(&g, p);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

/// Product of the distinct irreducible factors of p, computed as
/// p / gcd(p, dp/dx, dp/dy, ...).
pub fn squarefree_part(p: &Poly) -> Result<Poly, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut gens = vec![p.clone()];
    for v in 0..p.vars() {
        gens.push(p.partial(v));
    }
    let g = poly_gcd_many(&gens);
    Ok(p.div_exact(&g)
        .expect("gcd with derivatives divides")
        .normalized())
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::*;

    fn p2(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p2("x^2 - y^2"), &p2("x - y")), p2("x - y"));
        assert_eq!(poly_gcd(&p2("x"), &p2("y")), p2("1"));
        assert_eq!(poly_gcd(&p2("2*x + 2*y"), &p2("4*x + 4*y")), p2("x + y"));
        assert!(poly_gcd(&Poly::zero(2), &Poly::zero(2)).is_zero());
        assert_eq!(poly_gcd(&Poly::zero(2), &p2("3*x")), p2("x"));
    }

    #[test]
    fn gcd_divides_both() {
        let cases = [
            ("x^2*y - x", "x^3 + x"),
            ("(x + y)^3*(x - 1)", "(x + y)^2*(y + 2)"),
            ("x^2 + 2*x*y + y^2", "x^2 - y^2"),
            ("6*x^2*y^2", "4*x*y^3"),
        ];
        for (a, b) in cases {
            let pa = p2(a);
            let pb = p2(b);
            let g = poly_gcd(&pa, &pb);
            assert!(pa.div_exact(&g).is_some(), "gcd({a}, {b}) must divide {a}");
            assert!(pb.div_exact(&g).is_some(), "gcd({a}, {b}) must divide {b}");
        }
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p2("(x - 1)^2")).unwrap(), p2("x - 1"));
        assert_eq!(squarefree_part(&p2("x*y")).unwrap(), p2("x*y"));
        let cube = &p2("(x^2 + y)^3") * &p2("x");
        assert_eq!(squarefree_part(&cube).unwrap(), &p2("x") * &p2("x^2 + y"));
        assert!(squarefree_part(&Poly::zero(2)).is_err());
    }
}
