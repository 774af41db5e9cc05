//! One blowup step: three lines through the center, one per current chart,
//! each chosen against exact open conditions, producing the three blowup
//! charts that cover the new surface.
//!
//! Line predicates against finite sets are decided in standard-chart
//! coordinates: the candidate's equation is pulled through the reduced
//! coordinate map and joined to the set's ideal. The pulled-back numerator
//! can only pick up extra factors supported on the candidate chart's own
//! complement, which the target sets never meet, so the tests are exact.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{variety_within_points, Poly, Scalar};
use crate::geometry::{
    normalize_direction, proper_transform_with_mult, same_direction, AffLine, ChartId,
    Point2, RationalMap2,
};
use crate::surface::StandardAtlas;

use super::choice::{int_stream, Chooser, Predicate};
use super::{
    line_misses_component, line_numerator, line_trace_record, map_from_chart, map_into_chart,
    BuildCtx, BuildError, Chart, PairComponent, TriCover,
};

/// The affine chart of a blowup attached to a line through the center: the
/// chart map sends (u, v) to P + u e + u v d where d is the line's
/// direction and e a canonically chosen complementary basis vector.
#[derive(Debug, Clone)]
pub struct BlowupChart {
    /// new chart to ambient coordinates (polynomial)
    pub down: RationalMap2,
    /// ambient to new chart coordinates
    pub up: RationalMap2,
    /// the exceptional point missing from this chart: the line's own
    /// direction
    pub missing_direction: (Scalar, Scalar),
    /// the exceptional coordinate in the new chart
    pub exceptional: Poly,
}

pub fn blowup_chart(
    p: &Point2,
    l: &AffLine,
    new_id: ChartId,
) -> Result<BlowupChart, BuildError> {
    if !l.contains(p) {
        return Err(BuildError::Geometry(
            crate::geometry::GeometryError::LineMissesPoint,
        ));
    }
    let d = l.direction();
    let one = Scalar::from_integer(1.into());
    // first standard basis vector unless it is the line's own direction
    let e: (Scalar, Scalar) = if d.1.is_zero() {
        (Scalar::zero(), one.clone())
    } else {
        (one.clone(), Scalar::zero())
    };
    let det = &e.0 * &d.1 - &e.1 * &d.0;
    debug_assert!(!det.is_zero());
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let uv = &x * &y;
    let comp = |p0: &Scalar, e0: &Scalar, d0: &Scalar| {
        &(&x.scale(e0) + &uv.scale(d0)) + &Poly::constant(2, p0.clone())
    };
    let down = RationalMap2::new(
        new_id.clone(),
        l.chart.clone(),
        crate::algebra::RatFun::from_poly(comp(&p[0], &e.0, &d.0)),
        crate::algebra::RatFun::from_poly(comp(&p[1], &e.1, &d.1)),
    );
    let dx = &x - &Poly::constant(2, p[0].clone());
    let dy = &y - &Poly::constant(2, p[1].clone());
    let s1 = &(&dx.scale(&d.1) - &dy.scale(&d.0)).scale(&det.recip());
    let s2 = &(&dy.scale(&e.0) - &dx.scale(&e.1)).scale(&det.recip());
    let up = RationalMap2::new(
        l.chart.clone(),
        new_id,
        crate::algebra::RatFun::from_poly(s1.clone()),
        crate::algebra::RatFun::new(s2.clone(), s1.clone()).expect("nonzero linear form"),
    );
    Ok(BlowupChart {
        down,
        up,
        missing_direction: d,
        exceptional: x,
    })
}

/// Per-chart candidate context for one step.
struct ChartCtx {
    /// reduced maps from each standard chart into the constructed chart
    into: BTreeMap<ChartId, RationalMap2>,
    /// center coordinates inside the constructed chart
    p_local: Point2,
    /// Jacobian at the center of the map from the constructed chart to the
    /// center's standard chart
    jac_to_wp: [[Scalar; 2]; 2],
    /// future-center images in these coordinates
    a1_local: Vec<Point2>,
}

fn apply_jac(j: &[[Scalar; 2]; 2], v: &(Scalar, Scalar)) -> (Scalar, Scalar) {
    normalize_direction(&(
        &(&j[0][0] * &v.0) + &(&j[0][1] * &v.1),
        &(&j[1][0] * &v.0) + &(&j[1][1] * &v.1),
    ))
}

fn chart_ctx(
    atlas: &StandardAtlas,
    level: usize,
    chart: &Chart,
    wp: &ChartId,
    p: &Point2,
    a1: &[(ChartId, Point2)],
) -> Result<ChartCtx, BuildError> {
    let mut into = BTreeMap::new();
    for w in atlas.chart_ids().into_iter().filter(|c| c.level <= level) {
        into.insert(w.clone(), map_into_chart(atlas, &w, chart)?);
    }
    let p_local = into
        .get(wp)
        .and_then(|m| m.eval(p))
        .ok_or_else(|| {
            BuildError::Internal(format!("center not visible in {}", chart.id.name))
        })?;
    let back = map_from_chart(atlas, chart, wp)?;
    let jac_to_wp = back.jacobian_at(&p_local).ok_or_else(|| {
        BuildError::Internal("chart change degenerate at the center".into())
    })?;
    let mut a1_local = Vec::new();
    for (c, q) in a1 {
        let img = into.get(c).and_then(|m| m.eval(q)).ok_or_else(|| {
            BuildError::Internal("future center escaped a chart".into())
        })?;
        a1_local.push(img);
    }
    Ok(ChartCtx {
        into,
        p_local,
        jac_to_wp,
        a1_local,
    })
}

/// Candidate line through the center inside one constructed chart; slope
/// candidates come from the seeded integer stream.
struct LineCand {
    slope: Scalar,
    eq: Poly,
}

fn line_build(chart_id: &ChartId, p: &Point2) -> impl Fn(&[Scalar]) -> Option<LineCand> {
    let chart_id = chart_id.clone();
    let p = p.clone();
    move |raw: &[Scalar]| {
        let m = raw[0].clone();
        let line = AffLine::through(chart_id.clone(), &p, &(Scalar::from_integer(1.into()), m.clone()))
            .ok()?;
        Some(LineCand {
            slope: m,
            eq: line.equation,
        })
    }
}

fn misses_components<'a>(
    desc: &str,
    ctx: &'a ChartCtx,
    comps: &'a [PairComponent],
) -> Predicate<'a, LineCand> {
    Predicate::new(desc, move |cand: &LineCand| {
        comps.iter().all(|pc| {
            let n = line_numerator(&cand.eq, &ctx.into[&pc.chart]);
            line_misses_component(&n, pc)
        })
    })
}

fn avoids_a1<'a>(ctx: &'a ChartCtx) -> Predicate<'a, LineCand> {
    Predicate::new("avoids the images of future centers", move |cand: &LineCand| {
        ctx.a1_local
            .iter()
            .all(|q| !cand.eq.eval(q).expect("bivariate line").is_zero())
    })
}

fn direction_off_a2<'a>(
    ctx: &'a ChartCtx,
    a2_dirs: &'a [(Scalar, Scalar)],
) -> Predicate<'a, LineCand> {
    Predicate::new(
        "exceptional point off the future centers on the new curve",
        move |cand: &LineCand| {
            let d = apply_jac(&ctx.jac_to_wp, &(Scalar::from_integer(1.into()), cand.slope.clone()));
            a2_dirs.iter().all(|a| !same_direction(&d, a))
        },
    )
}

/// Lemma-5 step: blow up the center and rebuild the three charts from lines
/// through it, keeping every future center inside the new triple
/// intersection.
#[allow(clippy::too_many_arguments)]
pub fn inductive_step(
    atlas: &StandardAtlas,
    bctx: &mut BuildCtx,
    cover: &TriCover,
    step: usize,
    p: &(ChartId, Point2),
    a1: &[(ChartId, Point2)],
    a2: &[(ChartId, Point2)],
    chooser: &mut Chooser,
) -> Result<TriCover, BuildError> {
    let level = step - 1;
    if cover.level != level {
        return Err(BuildError::PreconditionViolated(format!(
            "cover is at level {}, expected {}",
            cover.level, level
        )));
    }
    let (wp, pc) = p;
    for chart in &cover.charts {
        if !chart.contains(wp, pc) {
            return Err(BuildError::PreconditionViolated(format!(
                "center lies outside chart {}",
                chart.id.name
            )));
        }
    }
    if a1.iter().any(|q| atlas.points_equal(q, p)) {
        return Err(BuildError::PreconditionViolated(
            "center coincides with a future-center image".into(),
        ));
    }

    let audit_start = chooser.audit().len();
    let ctx0 = chart_ctx(atlas, level, &cover.charts[0], wp, pc, a1)?;
    let ctx1 = chart_ctx(atlas, level, &cover.charts[1], wp, pc, a1)?;
    let ctx2 = chart_ctx(atlas, level, &cover.charts[2], wp, pc, a1)?;

    let a2_dirs: Vec<(Scalar, Scalar)> = a2
        .iter()
        .map(|(c, q)| {
            debug_assert!(q[0].is_zero());
            if c.name.ends_with('a') {
                normalize_direction(&(Scalar::from_integer(1.into()), q[1].clone()))
            } else {
                normalize_direction(&(q[1].clone(), Scalar::from_integer(1.into())))
            }
        })
        .collect();

    let z12 = bctx.intersect_families(
        atlas,
        level,
        &cover.charts[1].complement,
        &cover.charts[2].complement,
    );
    let z02 = bctx.intersect_families(
        atlas,
        level,
        &cover.charts[0].complement,
        &cover.charts[2].complement,
    );
    let z01 = bctx.intersect_families(
        atlas,
        level,
        &cover.charts[0].complement,
        &cover.charts[1].complement,
    );

    // first line: miss the set not covered by the other two charts, miss
    // the future centers, and keep its exceptional point generic
    let l0 = chooser.choose(
        &format!("step {step}: line in U0"),
        &mut int_stream(),
        &line_build(&cover.charts[0].id, &ctx0.p_local),
        &[
            misses_components("misses the leftover of the other two charts", &ctx0, &z12),
            avoids_a1(&ctx0),
            direction_off_a2(&ctx0, &a2_dirs),
        ],
    )?;
    let l0_rec = line_trace_record(
        atlas,
        level,
        &cover.charts[0],
        &l0.eq,
        format!("l0@{step}"),
    )?;

    // the first line's tangent direction seen in the second chart
    let t1_in_u1 = {
        let d_wp = apply_jac(
            &ctx0.jac_to_wp,
            &(Scalar::from_integer(1.into()), l0.slope.clone()),
        );
        let fwd = ctx1.into[wp].jacobian_at(pc).ok_or_else(|| {
            BuildError::Internal("chart change degenerate at the center".into())
        })?;
        apply_jac(&fwd, &d_wp)
    };

    let l0_on_z2 = bctx.intersect_families(
        atlas,
        level,
        std::slice::from_ref(&l0_rec),
        &cover.charts[2].complement,
    );
    let l1 = chooser.choose(
        &format!("step {step}: line in U1"),
        &mut int_stream(),
        &line_build(&cover.charts[1].id, &ctx1.p_local),
        &[
            misses_components("misses the leftover of the other two charts", &ctx1, &z02),
            Predicate::new("meets the first line transversally at the center", {
                let t1 = t1_in_u1.clone();
                move |cand: &LineCand| {
                    !same_direction(&(Scalar::from_integer(1.into()), cand.slope.clone()), &t1)
                }
            }),
            misses_components(
                "misses the first line's crossings with the third complement",
                &ctx1,
                &l0_on_z2,
            ),
            avoids_a1(&ctx1),
            direction_off_a2(&ctx1, &a2_dirs),
        ],
    )?;
    let l1_rec = line_trace_record(
        atlas,
        level,
        &cover.charts[1],
        &l1.eq,
        format!("l1@{step}"),
    )?;

    let z0_on_l1 = bctx.intersect_families(
        atlas,
        level,
        &cover.charts[0].complement,
        std::slice::from_ref(&l1_rec),
    );
    let l0_on_z1 = bctx.intersect_families(
        atlas,
        level,
        std::slice::from_ref(&l0_rec),
        &cover.charts[1].complement,
    );
    let l0_on_l1 = bctx.intersect_families(
        atlas,
        level,
        std::slice::from_ref(&l0_rec),
        std::slice::from_ref(&l1_rec),
    );
    let l2 = chooser.choose(
        &format!("step {step}: line in U2"),
        &mut int_stream(),
        &line_build(&cover.charts[2].id, &ctx2.p_local),
        &[
            misses_components("misses the leftover of the other two charts", &ctx2, &z01),
            misses_components(
                "misses the first complement's crossings with the second line",
                &ctx2,
                &z0_on_l1,
            ),
            misses_components(
                "misses the first line's crossings with the second complement",
                &ctx2,
                &l0_on_z1,
            ),
            Predicate::new("meets the first two lines' crossings only at the center", {
                let comps = &l0_on_l1;
                let ctx2 = &ctx2;
                let wp = wp.clone();
                let pc = pc.clone();
                move |cand: &LineCand| {
                    comps.iter().all(|pcmp| {
                        let n = line_numerator(&cand.eq, &ctx2.into[&pcmp.chart]);
                        let mut pts: Vec<(Scalar, Scalar)> = pcmp
                            .allowed
                            .iter()
                            .filter(|p| {
                                n.eval(&[p[0].clone(), p[1].clone()])
                                    .map(|v| v.is_zero())
                                    .unwrap_or(false)
                            })
                            .map(|p| (p[0].clone(), p[1].clone()))
                            .collect();
                        if let Some(q) = atlas.transport_point(&wp, &pc, &pcmp.chart) {
                            if !pts.iter().any(|(a, b)| a == &q[0] && b == &q[1]) {
                                pts.push((q[0].clone(), q[1].clone()));
                            }
                        }
                        let mut gens = pcmp.basis.clone();
                        gens.push(n);
                        variety_within_points(&gens, &pts).0
                    })
                }
            }),
            avoids_a1(&ctx2),
            direction_off_a2(&ctx2, &a2_dirs),
        ],
    )?;
    let l2_rec = line_trace_record(
        atlas,
        level,
        &cover.charts[2],
        &l2.eq,
        format!("l2@{step}"),
    )?;

    // assemble the three blowup charts
    let ba = atlas
        .find_chart(&format!("B{step}a"))
        .ok_or_else(|| BuildError::Internal("missing standard blowup chart".into()))?;
    let bb = atlas
        .find_chart(&format!("B{step}b"))
        .ok_or_else(|| BuildError::Internal("missing standard blowup chart".into()))?;
    let downs = [
        atlas.transition_or_identity(&ba, wp),
        atlas.transition_or_identity(&bb, wp),
    ];

    let mut charts: Vec<Chart> = Vec::with_capacity(3);
    for (j, (ctx, (cand, rec))) in [
        (&ctx0, (&l0, &l0_rec)),
        (&ctx1, (&l1, &l1_rec)),
        (&ctx2, (&l2, &l2_rec)),
    ]
    .into_iter()
    .enumerate()
    {
        let old = &cover.charts[j];
        let new_id = ChartId::new(step, format!("U{j}"));
        let line = AffLine::new(old.id.clone(), cand.eq.clone())?;
        let bc = blowup_chart(&ctx.p_local, &line, new_id.clone())?;

        // U'_j -> Ba through the center's standard chart
        let to_wp = {
            let m1 = old.to_reference.compose(&bc.down)?;
            atlas
                .transition_or_identity(&old.reference, wp)
                .compose(&m1)?
        };
        let to_reference = atlas.transition_or_identity(wp, &ba).compose(&to_wp)?;
        let from_reference = {
            let m1 = atlas
                .transition_or_identity(wp, &old.reference)
                .compose(&downs[0])?;
            let m2 = old.from_reference.compose(&m1)?;
            bc.up.compose(&m2)?
        };

        // complements: the strict transforms of the chosen line and of the
        // previous complement curves
        let mut complement = Vec::with_capacity(old.complement.len() + 1);
        let mut line_rec = rec.clone();
        let tw = rec
            .trace_in(wp)
            .cloned()
            .ok_or_else(|| BuildError::Internal("line invisible at the center chart".into()))?;
        for (nc, down) in [(&ba, &downs[0]), (&bb, &downs[1])] {
            let (pt, mult) = proper_transform_with_mult(&tw, down)?;
            debug_assert_eq!(mult, 1, "chosen lines pass simply through the center");
            line_rec.set_trace(nc.clone(), pt);
        }
        complement.push(line_rec);
        for c in &old.complement {
            let mut rec = c.clone();
            if let Some(tw) = c.trace_in(wp).cloned() {
                for (nc, down) in [(&ba, &downs[0]), (&bb, &downs[1])] {
                    let (pt, mult) = proper_transform_with_mult(&tw, down)?;
                    debug_assert_eq!(mult, 0, "old complements avoid the center");
                    rec.set_trace(nc.clone(), pt);
                }
            }
            complement.push(rec);
        }

        charts.push(Chart {
            id: new_id,
            reference: ba.clone(),
            to_reference,
            from_reference,
            complement,
        });
    }

    let charts: [Chart; 3] = charts.try_into().expect("three charts");
    let new_cover = TriCover {
        level: step,
        charts,
        audit: chooser.audit()[audit_start..].to_vec(),
    };

    // every future center must sit inside the new triple intersection
    for (c, q) in a2 {
        if !new_cover.contains_in_all(c, q) {
            return Err(BuildError::Internal(
                "future center on the exceptional curve escaped the new cover".into(),
            ));
        }
    }
    for (c, q) in a1 {
        if !new_cover.contains_in_all(c, q) {
            return Err(BuildError::Internal(
                "future center escaped the new cover".into(),
            ));
        }
    }
    Ok(new_cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ideal_is_trivial, parse_poly};
    use crate::algebra::scalar::int;

    fn p2poly(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    fn chart(name: &str) -> ChartId {
        ChartId::new(0, name)
    }

    #[test]
    fn standard_model_at_the_origin() {
        // P = (0,0), l: x = 0 gives (u, v) -> (u, u v)
        let l = AffLine::new(chart("A"), p2poly("x")).unwrap();
        let bc = blowup_chart(&[int(0), int(0)], &l, chart("N")).unwrap();
        assert_eq!(
            bc.down.eval(&[int(2), int(3)]).unwrap(),
            [int(2), int(6)]
        );
        assert_eq!(bc.missing_direction, (int(0), int(1)));
        // pullback of the line equation: exceptional coordinate times a
        // nonvanishing cofactor
        let pullback = p2poly("x")
            .subst(&[bc.down.components[0].num().clone(), bc.down.components[1].num().clone()]);
        let cof = pullback.div_exact(&bc.exceptional).unwrap();
        assert!(cof.div_exact(&bc.exceptional).is_none());
        assert!(ideal_is_trivial(&[cof]));
    }

    #[test]
    fn translated_center() {
        // P = (1,2), l: x = 1 gives (u, v) -> (u + 1, u v + 2)
        let l = AffLine::new(chart("A"), p2poly("x - 1")).unwrap();
        let bc = blowup_chart(&[int(1), int(2)], &l, chart("N")).unwrap();
        assert_eq!(bc.down.eval(&[int(0), int(9)]).unwrap(), [int(1), int(2)]);
        assert_eq!(bc.down.eval(&[int(1), int(1)]).unwrap(), [int(2), int(3)]);
        // up then down is the identity off the center
        let q = bc.up.eval(&[int(4), int(5)]).unwrap();
        assert_eq!(bc.down.eval(&q).unwrap(), [int(4), int(5)]);
    }

    #[test]
    fn two_lines_cover_the_exceptional_curve() {
        let l1 = AffLine::new(chart("A"), p2poly("x")).unwrap();
        let l2 = AffLine::new(chart("A"), p2poly("y")).unwrap();
        let b1 = blowup_chart(&[int(0), int(0)], &l1, chart("N1")).unwrap();
        let b2 = blowup_chart(&[int(0), int(0)], &l2, chart("N2")).unwrap();
        assert_ne!(b1.missing_direction, b2.missing_direction);
        assert_eq!(b1.missing_direction, (int(0), int(1)));
        assert_eq!(b2.missing_direction, (int(1), int(0)));
    }

    #[test]
    fn line_must_pass_through_the_center() {
        let l = AffLine::new(chart("A"), p2poly("x - 1")).unwrap();
        assert!(blowup_chart(&[int(0), int(0)], &l, chart("N")).is_err());
    }
}
