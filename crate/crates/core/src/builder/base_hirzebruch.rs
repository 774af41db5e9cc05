//! Base cover of a Hirzebruch surface. Three times over: pick a base point
//! of the projective line, trivialize the bundle over its complement, and
//! remove one constant section. The bookkeeping tracks the fiber curve and
//! the section closure left out by each chart, and the finite set not yet
//! covered after two charts, which may contain irrational points and is
//! therefore handled as ideals rather than coordinates.


use crate::algebra::{ideal_is_trivial, Poly, RatFun, Scalar};
use crate::geometry::{ChartId, CurveRecord, Ideal, Point2, ProjPoint, RationalMap2};
use crate::surface::StandardAtlas;

use super::choice::{int_stream, Chooser, Predicate};
use super::{BuildError, Chart, TriCover};

fn x() -> Poly {
    Poly::var(2, 0)
}

fn y() -> Poly {
    Poly::var(2, 1)
}

fn cpoly(s: &Scalar) -> Poly {
    Poly::constant(2, s.clone())
}

/// The trivialization gauge over the complement of the fiber at z = a: the
/// section coordinate is w~ = (z - a)^n w, expressed in each base chart.
fn w_tilde(n: u32, a: &Scalar, chart: &str) -> RatFun {
    let fiber_h0 = &x() - &cpoly(a); // z - a in H00/H01
    let fiber_h1 = &Poly::one(2) - &x().scale(a); // 1 - a z' in H10/H11
    match chart {
        "H00" => RatFun::from_poly(&fiber_h0.pow(n) * &y()),
        "H01" => RatFun::new(fiber_h0.pow(n), y()).expect("fiber coordinate"),
        "H10" => RatFun::from_poly(&fiber_h1.pow(n) * &y()),
        "H11" => RatFun::new(fiber_h1.pow(n), y()).expect("fiber coordinate"),
        other => panic!("not a Hirzebruch base chart: {other}"),
    }
}

/// Trace of the fiber over z = a in each base chart; None when invisible
/// (the fiber over 0 never meets the far charts' visible locus and vice
/// versa only through the cocycle).
fn fiber_trace(a: &Scalar, chart: &str) -> Option<Poly> {
    let t = match chart {
        "H00" | "H01" => &x() - &cpoly(a),
        "H10" | "H11" => &Poly::one(2) - &x().scale(a),
        other => panic!("not a Hirzebruch base chart: {other}"),
    };
    (!t.is_constant()).then(|| t.normalized())
}

/// Trace of the section closure {w~ = c} in each base chart, with the fiber
/// factors of a degenerate numerator stripped away (they belong to the
/// fiber, not to the section closure).
fn section_trace(n: u32, a: &Scalar, c: &Scalar, chart: &str) -> Option<Poly> {
    let wt = w_tilde(n, a, chart);
    let diff = wt.sub(&RatFun::constant(2, c.clone()));
    let mut t = diff.num().clone();
    if let Some(f) = fiber_trace(a, chart) {
        while let Some(q) = t.div_exact(&f) {
            t = q;
        }
    }
    (!t.is_constant()).then(|| t.normalized())
}

/// Exact fiber-gauge value of a point, None when the point sits at the
/// section at infinity of this gauge (no finite constant can collide).
fn w_tilde_at(n: u32, a: &Scalar, chart: &ChartId, p: &Point2) -> Option<Scalar> {
    w_tilde(n, a, &chart.name).eval(p).ok().flatten()
}

struct SectionData {
    base: Scalar,  // a_j
    value: Scalar, // c_j
}

fn build_chart(
    atlas: &StandardAtlas,
    n: u32,
    index: usize,
    sd: &SectionData,
) -> Chart {
    let id = ChartId::new(0, format!("U{index}"));
    let h00 = atlas.find_chart("H00").expect("Hirzebruch atlas");
    let a = &sd.base;
    let c = &sd.value;
    // chart coordinates (zt, wh): zt = 1/(z - a), wh = 1/(w~ - c)
    let from_reference = RationalMap2::new(
        h00.clone(),
        id.clone(),
        RatFun::new(Poly::one(2), &x() - &cpoly(a)).expect("fiber"),
        RatFun::new(
            Poly::one(2),
            &(&(&x() - &cpoly(a)).pow(n) * &y()) - &cpoly(c),
        )
        .expect("section"),
    );
    // inverse: z = a + 1/zt, w = (c + 1/wh) zt^n
    let to_reference = RationalMap2::new(
        id.clone(),
        h00.clone(),
        RatFun::new(&x().scale(a) + &Poly::one(2), x()).expect("base"),
        RatFun::new(
            &(&y().scale(c) + &Poly::one(2)) * &x().pow(n),
            y(),
        )
        .expect("fiber"),
    );
    let mut c1 = CurveRecord::new(format!("C1@{index}"));
    let mut c2 = CurveRecord::new(format!("C2@{index}"));
    for name in ["H00", "H01", "H10", "H11"] {
        let chart = atlas.find_chart(name).expect("Hirzebruch base chart");
        if let Some(t) = fiber_trace(a, name) {
            c1.set_trace(chart.clone(), t);
        }
        if let Some(t) = section_trace(n, a, c, name) {
            c2.set_trace(chart, t);
        }
    }
    Chart {
        id,
        reference: h00,
        to_reference,
        from_reference,
        complement: vec![c1, c2],
    }
}

/// One ideal-encoded component of the leftover set A, tested against fiber
/// and section choices without ever solving for its (possibly irrational)
/// points.
fn component_misses_fiber(comp: &Ideal, a: &Scalar) -> bool {
    match fiber_trace(a, &comp.chart.name) {
        Some(f) => {
            let mut gens = comp.generators.clone();
            gens.push(f);
            ideal_is_trivial(&gens)
        }
        None => true,
    }
}

fn component_misses_section(comp: &Ideal, n: u32, a: &Scalar, c: &Scalar) -> bool {
    match section_trace(n, a, c, &comp.chart.name) {
        Some(s) => {
            let mut gens = comp.generators.clone();
            gens.push(s);
            ideal_is_trivial(&gens)
        }
        None => true,
    }
}

/// Lemma-3 construction for the Hirzebruch surface with parameter n: three
/// charts, each the complement of a fiber plus a constant section in a
/// gauge adapted to a fresh base point.
pub fn base_cover_hirzebruch(
    atlas: &StandardAtlas,
    n: u32,
    avoid: &[(ChartId, Point2)],
    chooser: &mut Chooser,
) -> Result<TriCover, BuildError> {
    let audit_start = chooser.audit().len();
    let avoid_bases: Vec<ProjPoint> = avoid
        .iter()
        .map(|(c, p)| atlas.fiber_base(c, p))
        .collect();
    let scalar_build = |raw: &[Scalar]| -> Option<Scalar> { Some(raw[0].clone()) };

    let base_pred = |bases: Vec<ProjPoint>| {
        move |a: &Scalar| {
            let cand = ProjPoint::finite(a.clone());
            bases.iter().all(|b| !b.same(&cand))
        }
    };
    let gauge_pred = |points: Vec<(ChartId, Point2)>, n: u32| {
        move |pick: &(Scalar, Scalar)| {
            let (a, c) = pick;
            points
                .iter()
                .all(|(ch, p)| w_tilde_at(n, a, ch, p).map(|v| &v != c).unwrap_or(true))
        }
    };

    // P0 and the section value Q0
    let a0 = chooser.choose(
        "base Hirzebruch: P0",
        &mut int_stream(),
        &scalar_build,
        &[Predicate::new(
            "off the base image of every protected point",
            base_pred(avoid_bases.clone()),
        )],
    )?;
    let c0 = {
        let a0 = a0.clone();
        let gp = gauge_pred(avoid.to_vec(), n);
        chooser.choose(
            "base Hirzebruch: Q0",
            &mut int_stream(),
            &scalar_build,
            &[Predicate::new(
                "off the gauge values of every protected point",
                move |c: &Scalar| gp(&(a0.clone(), c.clone())),
            )],
        )?
    };

    // P1 distinct from P0, then Q1 avoiding the protected gauge values and
    // keeping the constant section different from the transported one
    let a1 = {
        let a0 = a0.clone();
        chooser.choose(
            "base Hirzebruch: P1",
            &mut int_stream(),
            &scalar_build,
            &[
                Predicate::new(
                    "off the base image of every protected point",
                    base_pred(avoid_bases.clone()),
                ),
                Predicate::new("distinct from P0", move |a: &Scalar| a != &a0),
            ],
        )?
    };
    let c1 = {
        let gp = gauge_pred(avoid.to_vec(), n);
        let a1c = a1.clone();
        // the first section seen in the second gauge: w~1 on {w~0 = c0} is
        // c0 (z - a1)^n / (z - a0)^n as a function of the base
        let transported = RatFun::new(
            (&x() - &cpoly(&a1)).pow(n).scale(&c0),
            (&x() - &cpoly(&a0)).pow(n),
        )
        .expect("distinct fibers");
        chooser.choose(
            "base Hirzebruch: Q1",
            &mut int_stream(),
            &scalar_build,
            &[
                Predicate::new("off the gauge values of every protected point", {
                    let a1 = a1c.clone();
                    move |c: &Scalar| gp(&(a1.clone(), c.clone()))
                }),
                Predicate::new("constant section differs from the transported one", {
                    move |c: &Scalar| {
                        !transported
                            .sub(&RatFun::constant(2, c.clone()))
                            .num()
                            .is_zero()
                    }
                }),
            ],
        )?
    };

    // the finite set not covered by the first two charts: the section
    // crossings with the other gauge's fiber (rational) and the pairwise
    // section intersection (possibly irrational, kept as ideals)
    let h00 = atlas.find_chart("H00").expect("Hirzebruch atlas");
    let pow_n = |s: &Scalar| -> Scalar {
        let mut acc = Scalar::from_integer(1.into());
        for _ in 0..n {
            acc = acc * s.clone();
        }
        acc
    };
    let r1 = (
        h00.clone(),
        [a1.clone(), &c0 / &pow_n(&(&a1 - &a0))],
    );
    let s1 = (
        h00.clone(),
        [a0.clone(), &c1 / &pow_n(&(&a0 - &a1))],
    );
    let mut a_components: Vec<Ideal> = Vec::new();
    for name in ["H00", "H01", "H10", "H11"] {
        let chart = atlas.find_chart(name).expect("Hirzebruch base chart");
        let (Some(t0), Some(t1)) = (
            section_trace(n, &a0, &c0, name),
            section_trace(n, &a1, &c1, name),
        ) else {
            continue;
        };
        let ideal = Ideal::new(chart, vec![t0, t1]);
        if !ideal.is_trivial() {
            debug_assert!(ideal.cuts_finite_set());
            a_components.push(ideal);
        }
    }
    let a_points: Vec<(ChartId, Point2)> = vec![r1, s1];

    // P2 keeps the leftover set inside the last chart's gauge domain
    let a2 = {
        let mut bases = avoid_bases.clone();
        bases.extend(a_points.iter().map(|(c, p)| atlas.fiber_base(c, p)));
        let comps = a_components.clone();
        let a0 = a0.clone();
        let a1 = a1.clone();
        chooser.choose(
            "base Hirzebruch: P2",
            &mut int_stream(),
            &scalar_build,
            &[
                Predicate::new(
                    "off the base image of every protected and leftover point",
                    base_pred(bases),
                ),
                Predicate::new("leftover ideals miss the fiber", move |a: &Scalar| {
                    comps.iter().all(|comp| component_misses_fiber(comp, a))
                }),
                Predicate::new("distinct from P0 and P1", move |a: &Scalar| {
                    a != &a0 && a != &a1
                }),
            ],
        )?
    };
    let c2 = {
        let mut pts = avoid.to_vec();
        pts.extend(a_points.iter().cloned());
        let gp = gauge_pred(pts, n);
        let comps = a_components.clone();
        let a2c = a2.clone();
        chooser.choose(
            "base Hirzebruch: Q2",
            &mut int_stream(),
            &scalar_build,
            &[
                Predicate::new("off the gauge values of protected and leftover points", {
                    let a2 = a2c.clone();
                    move |c: &Scalar| gp(&(a2.clone(), c.clone()))
                }),
                Predicate::new("leftover ideals miss the section", {
                    let a2 = a2c.clone();
                    move |c: &Scalar| {
                        comps
                            .iter()
                            .all(|comp| component_misses_section(comp, n, &a2, c))
                    }
                }),
            ],
        )?
    };

    let charts = [
        build_chart(atlas, n, 0, &SectionData { base: a0, value: c0 }),
        build_chart(atlas, n, 1, &SectionData { base: a1, value: c1 }),
        build_chart(atlas, n, 2, &SectionData { base: a2, value: c2 }),
    ];

    // the leftover set must sit inside the third chart
    for (chart_id, p) in &a_points {
        if !charts[2].contains(chart_id, p) {
            return Err(BuildError::Internal(
                "leftover point escaped the third chart".into(),
            ));
        }
    }
    for comp in &a_components {
        for rec in &charts[2].complement {
            if let Some(t) = rec.trace_in(&comp.chart) {
                let mut gens = comp.generators.clone();
                gens.push(t.clone());
                if !ideal_is_trivial(&gens) {
                    return Err(BuildError::Internal(
                        "leftover component touches the third chart complement".into(),
                    ));
                }
            }
        }
    }

    Ok(TriCover {
        level: 0,
        charts,
        audit: chooser.audit()[audit_start..].to_vec(),
    })
}
