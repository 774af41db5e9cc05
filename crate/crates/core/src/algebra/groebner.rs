//! Buchberger's algorithm under the fixed graded lexicographic order, with
//! the product criterion for pair skipping, plus the Nullstellensatz checks
//! built on top of it: ideal triviality and "variety contained in a given
//! finite set of rational points".
//!
//! The latter is decided with the Rabinowitsch trick: V(I) avoids the locus
//! g != 0 exactly when 1 lies in I + (1 - T*g), so V(I) is contained in a
//! finite rational point set D when every product of per-point coordinate
//! differences is killed this way.

use std::collections::BTreeSet;

use num_traits::One;

use super::poly::{Mono, Poly};
use super::scalar::Scalar;

/// Remainder of p on division by the list: no term of the result is
/// divisible by any leading monomial of the divisors.
pub fn normal_form(p: &Poly, divisors: &[Poly]) -> Poly {
    let mut rem = Poly::zero(p.vars());
    let mut cur = p.clone();
    'outer: while let Some((m, c)) = cur.leading() {
        let m = m.clone();
        let c = c.clone();
        for d in divisors {
            if let Some((dm, dc)) = d.leading() {
                if dm.divides(&m) {
                    let qm = dm.div_into(&m);
                    let qc = &c / dc;
                    cur = &cur - &d.mul_term(&qm, &qc);
                    continue 'outer;
                }
            }
        }
        rem.add_term(m.clone(), c.clone());
        let mut rest = cur.clone();
        rest.add_term(m, -c);
        cur = rest;
    }
    rem
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let l = fm.lcm(gm);
    let a = f.mul_term(&fm.div_into(&l), &(Scalar::one() / fc));
    let b = g.mul_term(&gm.div_into(&l), &(Scalar::one() / gc));
    &a - &b
}

/// Reduced Groebner basis (monic, autoreduced, sorted by leading monomial).
/// Idempotent; the trivial ideal always reduces to [1].
pub fn groebner_basis(gens: &[Poly]) -> Vec<Poly> {
    let vars = gens.first().map(|p| p.vars()).unwrap_or(2);
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            if g.is_constant() {
                return vec![Poly::one(vars)];
            }
            basis.push(g.monic());
        }
    }
    basis.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    basis.dedup();

    let mut pairs: BTreeSet<(Mono, usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in 0..i {
            let l = basis[i].leading().unwrap().0.lcm(basis[j].leading().unwrap().0);
            pairs.insert((l, j, i));
        }
    }

    while let Some((l, i, j)) = pairs.pop_first() {
        let (mi, _) = basis[i].leading().unwrap();
        let (mj, _) = basis[j].leading().unwrap();
        // product criterion: coprime leading monomials reduce to zero
        if mi.mul(mj) == l {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![Poly::one(vars)];
        }
        let r = r.monic();
        let k = basis.len();
        for (idx, b) in basis.iter().enumerate() {
            let l = r.leading().unwrap().0.lcm(b.leading().unwrap().0);
            pairs.insert((l, idx, k));
        }
        basis.push(r);
    }

    // minimalize: drop elements whose leading monomial is divisible by
    // another's, then tail-reduce each survivor against the rest
    let mut keep: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && {
                let hm = h.leading().unwrap().0;
                hm.divides(lm) && (hm != lm || j < i)
            }
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced: Vec<Poly> = Vec::new();
    for i in 0..keep.len() {
        let others: Vec<Poly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = normal_form(&keep[i], &others);
        if !r.is_zero() {
            reduced.push(r.monic());
        }
    }
    reduced.sort_by(|a, b| b.leading().unwrap().0.cmp(a.leading().unwrap().0));
    if reduced.is_empty() {
        reduced.push(Poly::zero(vars));
    }
    reduced
}

/// Nullstellensatz test: the variety over the complex numbers is empty
/// exactly when the reduced basis is [1].
pub fn ideal_is_trivial(gens: &[Poly]) -> bool {
    let b = groebner_basis(gens);
    b.len() == 1 && b[0].constant_value().map(|c| c.is_one()).unwrap_or(false)
}

/// Checks V(gens) is contained in the given finite set of rational points,
/// all data bivariate. Returns the exclusion products used as witnesses
/// together with the verdict; an empty point list degenerates to plain
/// triviality.
pub fn variety_within_points(
    gens: &[Poly],
    points: &[(Scalar, Scalar)],
) -> (bool, Vec<Poly>) {
    if points.is_empty() {
        return (ideal_is_trivial(gens), Vec::new());
    }
    // one product per choice of coordinate to separate at each point
    let mut products: BTreeSet<Vec<(usize, Scalar)>> = BTreeSet::new();
    let n = points.len();
    for mask in 0..(1u32 << n) {
        let mut sel: Vec<(usize, Scalar)> = Vec::with_capacity(n);
        for (i, (px, py)) in points.iter().enumerate() {
            if mask & (1 << i) == 0 {
                sel.push((0, px.clone()));
            } else {
                sel.push((1, py.clone()));
            }
        }
        sel.sort();
        sel.dedup();
        products.insert(sel);
    }
    let lifted: Vec<Poly> = gens.iter().map(|g| g.lift_vars(3)).collect();
    let mut witnesses = Vec::new();
    let mut ok = true;
    for sel in products {
        let mut g = Poly::one(3);
        for (var, val) in &sel {
            let factor = &Poly::var(3, *var) - &Poly::constant(3, val.clone());
            g = &g * &factor;
        }
        witnesses.push(g.clone());
        if !ok {
            continue;
        }
        // 1 - T*g
        let mut sys = lifted.clone();
        let tg = &Poly::var(3, 2) * &g;
        sys.push(&Poly::one(3) - &tg);
        if !ideal_is_trivial(&sys) {
            ok = false;
        }
    }
    (ok, witnesses)
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::super::scalar::int;
    use super::*;

    fn p2(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    fn gb(srcs: &[&str]) -> Vec<Poly> {
        groebner_basis(&srcs.iter().map(|s| p2(s)).collect::<Vec<_>>())
    }

    #[test]
    fn basis_examples() {
        assert_eq!(gb(&["x", "y"]), vec![p2("x"), p2("y")]);
        assert_eq!(gb(&["x", "x + 1"]), vec![p2("1")]);
        // variety {(0,0), (1,1)}: both points kill every basis element
        let basis = gb(&["y - x^2", "y^2 - x*y"]);
        for p in &[(0, 0), (1, 1)] {
            for b in &basis {
                assert_eq!(b.eval(&[int(p.0), int(p.1)]).unwrap(), int(0));
            }
        }
        // and no spurious vanishing at a third point
        assert!(basis
            .iter()
            .any(|b| b.eval(&[int(2), int(4)]).unwrap() != int(0)));
    }

    #[test]
    fn idempotent_and_membership() {
        let gens = [p2("y - x^2"), p2("y^2 - x*y"), p2("x*y - x^2")];
        let basis = groebner_basis(&gens);
        let again = groebner_basis(&basis);
        assert_eq!(basis, again);
        for g in &gens {
            assert!(normal_form(g, &basis).is_zero());
        }
    }

    #[test]
    fn triviality_examples() {
        assert!(ideal_is_trivial(&[p2("x"), p2("y"), p2("1")]));
        assert!(!ideal_is_trivial(&[p2("x"), p2("y")]));
        // solutions exist over C though not over Q
        assert!(!ideal_is_trivial(&[p2("x^2 + 1"), p2("y")]));
    }

    #[test]
    fn trivial_ideal_has_no_grid_solutions() {
        let gens = [p2("x*y - 1"), p2("x + y"), p2("x^2 - y - 3")];
        if ideal_is_trivial(&gens) {
            for a in -5..5 {
                for b in -5..5 {
                    let all_zero = gens
                        .iter()
                        .all(|g| g.eval(&[int(a), int(b)]).unwrap() == int(0));
                    assert!(!all_zero);
                }
            }
        } else {
            panic!("expected trivial ideal");
        }
    }

    #[test]
    fn variety_within_examples() {
        // V(x, y) = {(0,0)}
        let (ok, _) = variety_within_points(&[p2("x"), p2("y")], &[(int(0), int(0))]);
        assert!(ok);
        // V(x, y) not within {(1, 1)}
        let (ok, _) = variety_within_points(&[p2("x"), p2("y")], &[(int(1), int(1))]);
        assert!(!ok);
        // V(x*(x-1), y) = {(0,0), (1,0)}
        let gens = [&p2("x") * &p2("x - 1"), p2("y")];
        let (ok, _) =
            variety_within_points(&gens, &[(int(0), int(0)), (int(1), int(0))]);
        assert!(ok);
        let (ok, _) = variety_within_points(&gens, &[(int(0), int(0))]);
        assert!(!ok);
        // irrational variety is never inside a rational point list
        let gens = [p2("x^2 - 2"), p2("y")];
        let (ok, _) = variety_within_points(&gens, &[(int(1), int(0))]);
        assert!(!ok);
    }
}
