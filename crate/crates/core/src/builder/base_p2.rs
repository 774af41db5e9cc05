//! Base cover of the projective plane: three lines avoiding the protected
//! points with empty triple intersection, each complement giving one chart.

use num_traits::Zero;

use crate::algebra::{Poly, RatFun, Scalar};
use crate::geometry::{ChartId, CurveRecord, Point2, RationalMap2};
use crate::surface::StandardAtlas;

use super::choice::{triple_stream, Chooser, Predicate};
use super::{BuildError, Chart, TriCover};

type Row = [Scalar; 3];

fn dot(l: &Row, p: &Row) -> Scalar {
    &l[0] * &p[0] + &l[1] * &p[1] + &l[2] * &p[2]
}

fn det3(m: &[Row; 3]) -> Scalar {
    let a = &m[0];
    let b = &m[1];
    let c = &m[2];
    &a[0] * &(&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * &(&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * &(&b[0] * &c[1] - &b[1] * &c[0])
}

fn adjugate(m: &[Row; 3]) -> [Row; 3] {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    [
        [minor(1, 2, 1, 2), -minor(0, 2, 1, 2), minor(0, 1, 1, 2)],
        [-minor(1, 2, 0, 2), minor(0, 2, 0, 2), -minor(0, 1, 0, 2)],
        [minor(1, 2, 0, 1), -minor(0, 2, 0, 1), minor(0, 1, 0, 1)],
    ]
}

fn proportional(a: &Row, b: &Row) -> bool {
    for i in 0..3 {
        for j in 0..i {
            if !(&a[i] * &b[j] - &a[j] * &b[i]).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Homogeneous coordinates of a point given in one of the three standard
/// charts of the plane.
pub fn homogenize(chart: &ChartId, p: &Point2) -> Row {
    let one = Scalar::from_integer(1.into());
    match chart.name.as_str() {
        "S0" => [p[0].clone(), p[1].clone(), one],
        "S1" => [one, p[0].clone(), p[1].clone()],
        "S2" => [p[0].clone(), one, p[1].clone()],
        other => panic!("not a plane base chart: {other}"),
    }
}

fn line_traces(l: &Row) -> Vec<(String, Poly)> {
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let cst = |s: &Scalar| Poly::constant(2, s.clone());
    vec![
        // S0: [x : y : 1]
        (
            "S0".to_string(),
            &(&x.scale(&l[0]) + &y.scale(&l[1])) + &cst(&l[2]),
        ),
        // S1: [1 : u : v]
        (
            "S1".to_string(),
            &(&x.scale(&l[1]) + &y.scale(&l[2])) + &cst(&l[0]),
        ),
        // S2: [s : 1 : t]
        (
            "S2".to_string(),
            &(&x.scale(&l[0]) + &y.scale(&l[2])) + &cst(&l[1]),
        ),
    ]
}

fn build_chart(atlas: &StandardAtlas, index: usize, l: &Row) -> Chart {
    // complete the line's coefficient row to an invertible matrix using the
    // first standard basis rows that work
    let basis: [Row; 3] = {
        let zero = Scalar::zero();
        let one = Scalar::from_integer(1.into());
        let e = [
            [one.clone(), zero.clone(), zero.clone()],
            [zero.clone(), one.clone(), zero.clone()],
            [zero.clone(), zero.clone(), one.clone()],
        ];
        let mut found = None;
        'outer: for i in 0..3 {
            for j in i + 1..3 {
                let m = [e[i].clone(), e[j].clone(), l.clone()];
                if !det3(&m).is_zero() {
                    found = Some(m);
                    break 'outer;
                }
            }
        }
        found.expect("a nonzero row extends to a basis")
    };
    let det = det3(&basis);
    let adj = adjugate(&basis);
    // inverse = adjugate / det; columns of the inverse give the projective
    // parametrization (s, t) -> basis^{-1} (s, t, 1)
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let lin = |row: &Row| -> Poly {
        &(&x.scale(&row[0]) + &y.scale(&row[1])) + &Poly::constant(2, row[2].clone())
    };
    let inv_row = |i: usize| -> Row {
        [
            &adj[i][0] / &det,
            &adj[i][1] / &det,
            &adj[i][2] / &det,
        ]
    };
    let hom0 = lin(&inv_row(0));
    let hom1 = lin(&inv_row(1));
    let hom2 = lin(&inv_row(2));
    let id = ChartId::new(0, format!("U{index}"));
    let s0 = atlas.find_chart("S0").expect("plane atlas has S0");
    let to_reference = RationalMap2::new(
        id.clone(),
        s0.clone(),
        RatFun::new(hom0.clone(), hom2.clone()).expect("unit column"),
        RatFun::new(hom1.clone(), hom2.clone()).expect("unit column"),
    );
    let from_reference = RationalMap2::new(
        s0.clone(),
        id.clone(),
        RatFun::new(lin(&basis[0]), lin(l)).expect("line is nonzero"),
        RatFun::new(lin(&basis[1]), lin(l)).expect("line is nonzero"),
    );
    let mut rec = CurveRecord::new(format!("L{index}"));
    for (name, trace) in line_traces(l) {
        let chart = atlas.find_chart(&name).expect("plane base chart");
        rec.set_trace(chart, trace);
    }
    Chart {
        id,
        reference: s0,
        to_reference,
        from_reference,
        complement: vec![rec],
    }
}

/// Chooses three projective lines missing every protected point with empty
/// triple intersection; each chart is the complement of one line.
pub fn base_cover_p2(
    atlas: &StandardAtlas,
    avoid: &[(ChartId, Point2)],
    chooser: &mut Chooser,
) -> Result<TriCover, BuildError> {
    let avoid_hom: Vec<Row> = avoid.iter().map(|(c, p)| homogenize(c, p)).collect();
    let build = |raw: &[Scalar]| -> Option<Row> {
        Some([raw[0].clone(), raw[1].clone(), raw[2].clone()])
    };
    let misses_avoid = |avoid_hom: &[Row]| {
        let avoid_hom = avoid_hom.to_vec();
        move |l: &Row| avoid_hom.iter().all(|p| !dot(l, p).is_zero())
    };

    let audit_start = chooser.audit().len();
    let l1 = chooser.choose(
        "base P2: line L0",
        &mut triple_stream(),
        &build,
        &[Predicate::new(
            "misses every protected point",
            misses_avoid(&avoid_hom),
        )],
    )?;
    let l2 = {
        let l1 = l1.clone();
        chooser.choose(
            "base P2: line L1",
            &mut triple_stream(),
            &build,
            &[
                Predicate::new("misses every protected point", misses_avoid(&avoid_hom)),
                Predicate::new("distinct from L0", move |l: &Row| !proportional(l, &l1)),
            ],
        )?
    };
    let l3 = {
        let l1 = l1.clone();
        let l2 = l2.clone();
        chooser.choose(
            "base P2: line L2",
            &mut triple_stream(),
            &build,
            &[
                Predicate::new("misses every protected point", misses_avoid(&avoid_hom)),
                Predicate::new("no common point with L0 and L1", move |l: &Row| {
                    !det3(&[l1.clone(), l2.clone(), l.clone()]).is_zero()
                }),
            ],
        )?
    };

    let charts = [
        build_chart(atlas, 0, &l1),
        build_chart(atlas, 1, &l2),
        build_chart(atlas, 2, &l3),
    ];
    Ok(TriCover {
        level: 0,
        charts,
        audit: chooser.audit()[audit_start..].to_vec(),
    })
}
