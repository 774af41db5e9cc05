//! Independent certification that a constructed cover actually covers.
//!
//! Everything runs over the standard atlas, never over the constructed
//! charts themselves: a point missing from all three charts is by
//! definition invisible there. Per standard chart the three complements'
//! triple intersection must be empty over the complex numbers, except at
//! the finitely many rational points that later blowups removed from the
//! chart; those exceptions are discharged with Rabinowitsch-style
//! saturation witnesses. Pairwise complement intersections must carry no
//! shared curve component (their traces have constant gcd), transition
//! round trips are sampled exactly, and a seeded point sample cross-checks
//! membership.

use num_traits::{One, Zero};

use crate::algebra::{groebner_basis, poly_gcd, Poly, Scalar};
use crate::builder::{cover_transition, BuildError, TriCover};
use crate::geometry::{ChartId, Point2};
use crate::rng::DetRng;
use crate::surface::StandardAtlas;

/// One emptiness check: the traces of up to three complement components in
/// one standard chart, their reduced Groebner basis, and (when the variety
/// is allowed to sit on removed points) one saturation basis per exclusion
/// product. Re-running the bases from the stored generators must reproduce
/// them exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptinessCheck {
    pub labels: Vec<String>,
    pub gens: Vec<Poly>,
    pub basis: Vec<Poly>,
    pub excluded: Vec<Point2>,
    /// (exclusion product g, reduced basis of gens + (1 - T g))
    pub saturations: Vec<(Poly, Vec<Poly>)>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ChartEmptinessRecord {
    pub chart: ChartId,
    /// product of all visible component traces, per constructed chart
    pub traces: [Poly; 3],
    pub removed: Vec<Point2>,
    pub checks: Vec<EmptinessCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct PairwiseRecord {
    pub chart: ChartId,
    pub pair: (usize, usize),
    pub gcd: Poly,
    pub constant: bool,
}

#[derive(Debug, Clone)]
pub struct TransitionFailure {
    pub from: ChartId,
    pub to: ChartId,
    pub point: Point2,
}

#[derive(Debug, Clone)]
pub struct TransitionReport {
    pub samples: u32,
    pub seed: u64,
    pub checked: u64,
    pub failures: Vec<TransitionFailure>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SamplingReport {
    pub seed: u64,
    pub count: u32,
    pub failures: Vec<(ChartId, Point2)>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct CoverageCertificate {
    pub level: usize,
    pub emptiness: Vec<ChartEmptinessRecord>,
}

#[derive(Debug, Clone)]
pub enum EmptinessOutcome {
    Certificate(CoverageCertificate),
    Counterexample {
        chart: ChartId,
        labels: Vec<String>,
        basis: Vec<Poly>,
    },
}

impl EmptinessOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, EmptinessOutcome::Certificate(_))
    }

    pub fn certificate(self) -> Option<CoverageCertificate> {
        match self {
            EmptinessOutcome::Certificate(c) => Some(c),
            EmptinessOutcome::Counterexample { .. } => None,
        }
    }
}

/// For each standard chart and each constructed chart, the product of all
/// visible complement traces (1 when the complement avoids the chart).
pub fn complement_traces(
    cover: &TriCover,
    atlas: &StandardAtlas,
) -> Vec<(ChartId, [Poly; 3])> {
    let mut out = Vec::new();
    for w in atlas
        .chart_ids()
        .into_iter()
        .filter(|c| c.level <= cover.level)
    {
        let mut per_chart: Vec<Poly> = Vec::with_capacity(3);
        for chart in &cover.charts {
            let mut prod = Poly::one(2);
            for rec in &chart.complement {
                if let Some(t) = rec.trace_in(&w) {
                    prod = &prod * t;
                }
            }
            per_chart.push(prod.normalized());
        }
        out.push((w, per_chart.try_into().expect("three charts")));
    }
    out
}

fn removed_in(atlas: &StandardAtlas, w: &ChartId, level: usize) -> Vec<Point2> {
    atlas
        .removed
        .get(w)
        .map(|v| {
            v.iter()
                .filter(|(l, _)| *l <= level)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .unwrap_or_default()
}

/// Nullstellensatz emptiness of the triple complement intersection in every
/// standard chart, allowing the variety only at removed points. Checks run
/// component by component: the full products' variety is the union of the
/// component triples' varieties.
pub fn verify_emptiness(cover: &TriCover, atlas: &StandardAtlas) -> EmptinessOutcome {
    let traces = complement_traces(cover, atlas);
    let mut records = Vec::new();
    for (w, prods) in traces {
        let removed = removed_in(atlas, &w, cover.level);
        let mut checks: Vec<EmptinessCheck> = Vec::new();
        let mut chart_pass = true;
        let z0 = &cover.charts[0].complement;
        let z1 = &cover.charts[1].complement;
        let z2 = &cover.charts[2].complement;
        for c0 in z0 {
            let Some(t0) = c0.trace_in(&w) else { continue };
            for c1 in z1 {
                let Some(t1) = c1.trace_in(&w) else { continue };
                let pair_gens = vec![t0.clone(), t1.clone()];
                let pair_basis = groebner_basis(&pair_gens);
                let pair_trivial = pair_basis.len() == 1 && pair_basis[0].constant_value().map(|c| c.is_one()).unwrap_or(false);
                checks.push(EmptinessCheck {
                    labels: vec![c0.label.clone(), c1.label.clone()],
                    gens: pair_gens,
                    basis: pair_basis.clone(),
                    excluded: Vec::new(),
                    saturations: Vec::new(),
                    pass: true,
                });
                if pair_trivial {
                    continue;
                }
                for c2 in z2 {
                    let Some(t2) = c2.trace_in(&w) else { continue };
                    let mut gens = pair_basis.clone();
                    gens.push(t2.clone());
                    let basis = groebner_basis(&gens);
                    let trivial = basis.len() == 1 && basis[0].constant_value().map(|c| c.is_one()).unwrap_or(false);
                    let labels = vec![c0.label.clone(), c1.label.clone(), c2.label.clone()];
                    if trivial {
                        checks.push(EmptinessCheck {
                            labels,
                            gens,
                            basis,
                            excluded: Vec::new(),
                            saturations: Vec::new(),
                            pass: true,
                        });
                        continue;
                    }
                    // the variety may only consist of removed points; only
                    // those annihilating every generator can occur
                    let candidates: Vec<Point2> = removed
                        .iter()
                        .filter(|p| {
                            [t0, t1, t2].iter().all(|t| {
                                t.eval(&[p[0].clone(), p[1].clone()])
                                    .map(|v| v.is_zero())
                                    .unwrap_or(false)
                            })
                        })
                        .cloned()
                        .collect();
                    let pts: Vec<(Scalar, Scalar)> = candidates
                        .iter()
                        .map(|p| (p[0].clone(), p[1].clone()))
                        .collect();
                    let (ok, products) =
                        crate::algebra::variety_within_points(&basis, &pts);
                    let mut saturations = Vec::new();
                    for g in &products {
                        let lifted: Vec<Poly> = basis.iter().map(|b| b.lift_vars(3)).collect();
                        let mut sys = lifted;
                        let tg = &Poly::var(3, 2) * g;
                        sys.push(&Poly::one(3) - &tg);
                        saturations.push((g.clone(), groebner_basis(&sys)));
                    }
                    checks.push(EmptinessCheck {
                        labels: labels.clone(),
                        gens,
                        basis: basis.clone(),
                        excluded: candidates,
                        saturations,
                        pass: ok,
                    });
                    if !ok {
                        return EmptinessOutcome::Counterexample {
                            chart: w,
                            labels,
                            basis,
                        };
                    }
                }
            }
        }
        chart_pass &= checks.iter().all(|c| c.pass);
        records.push(ChartEmptinessRecord {
            chart: w,
            traces: prods,
            removed,
            checks,
            pass: chart_pass,
        });
    }
    EmptinessOutcome::Certificate(CoverageCertificate {
        level: cover.level,
        emptiness: records,
    })
}

/// Re-derives every stored basis from its stored generators; the
/// certificate stands only if each recomputation matches exactly.
pub fn replay_certificate(cert: &CoverageCertificate) -> bool {
    for rec in &cert.emptiness {
        for check in &rec.checks {
            let basis = groebner_basis(&check.gens);
            if basis != check.basis {
                return false;
            }
            for (g, stored) in &check.saturations {
                let mut sys: Vec<Poly> = check.basis.iter().map(|b| b.lift_vars(3)).collect();
                let tg = &Poly::var(3, 2) * g;
                sys.push(&Poly::one(3) - &tg);
                if &groebner_basis(&sys) != stored {
                    return false;
                }
            }
            let computed_pass = if check.saturations.is_empty() {
                check.basis.len() == 1
                    && check.basis[0]
                        .constant_value()
                        .map(|c| c.is_one())
                        .unwrap_or(false)
            } else {
                check.saturations.iter().all(|(_, b)| {
                    b.len() == 1 && b[0].constant_value().map(|c| c.is_one()).unwrap_or(false)
                })
            };
            // pair prefilter checks are recorded pass=true unconditionally
            if check.labels.len() == 3 && computed_pass != check.pass {
                return false;
            }
        }
        if !rec.pass {
            return false;
        }
    }
    true
}

/// No two complements may share a curve component: in every standard chart
/// the pairwise gcd of the trace products is constant.
pub fn verify_pairwise_finite(
    cover: &TriCover,
    atlas: &StandardAtlas,
) -> (Vec<PairwiseRecord>, bool) {
    let traces = complement_traces(cover, atlas);
    let mut records = Vec::new();
    let mut pass = true;
    for (w, prods) in &traces {
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let g = poly_gcd(&prods[i], &prods[j]);
            let constant = g.is_constant();
            pass &= constant;
            records.push(PairwiseRecord {
                chart: w.clone(),
                pair: (i, j),
                gcd: g,
                constant,
            });
        }
    }
    (records, pass)
}

/// Sampled round trips through the transition maps between the constructed
/// charts and through each chart's reference maps.
pub fn verify_transitions(
    cover: &TriCover,
    atlas: &StandardAtlas,
    samples: u32,
    seed: u64,
) -> Result<TransitionReport, BuildError> {
    let mut rng = DetRng::new(seed ^ 0x7ab51);
    let mut failures = Vec::new();
    let mut checked = 0u64;
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let fwd = cover_transition(atlas, &cover.charts[i], &cover.charts[j])?;
            let back = cover_transition(atlas, &cover.charts[j], &cover.charts[i])?;
            let mut done = 0;
            let mut tries = 0;
            while done < samples && tries < samples * 8 {
                tries += 1;
                let p = [rng.rational(9, 5), rng.rational(9, 5)];
                let Some(q) = fwd.eval(&p) else { continue };
                let Some(r) = back.eval(&q) else { continue };
                checked += 1;
                done += 1;
                if r != p {
                    failures.push(TransitionFailure {
                        from: cover.charts[i].id.clone(),
                        to: cover.charts[j].id.clone(),
                        point: p,
                    });
                }
            }
        }
    }
    for chart in &cover.charts {
        let mut done = 0;
        let mut tries = 0;
        while done < samples && tries < samples * 8 {
            tries += 1;
            let p = [rng.rational(9, 5), rng.rational(9, 5)];
            let Some(q) = chart.from_reference.eval(&p) else { continue };
            let Some(r) = chart.to_reference.eval(&q) else { continue };
            checked += 1;
            done += 1;
            if r != p {
                failures.push(TransitionFailure {
                    from: chart.reference.clone(),
                    to: chart.id.clone(),
                    point: p,
                });
            }
        }
    }
    let pass = failures.is_empty();
    Ok(TransitionReport {
        samples,
        seed,
        checked,
        failures,
        pass,
    })
}

/// Seeded random rational points in random standard charts, each tested for
/// membership in at least one constructed chart through the complement
/// traces. Any uncovered point contradicts a passing certificate.
pub fn sample_coverage(
    cover: &TriCover,
    atlas: &StandardAtlas,
    count: u32,
    seed: u64,
) -> SamplingReport {
    let charts: Vec<ChartId> = atlas
        .chart_ids()
        .into_iter()
        .filter(|c| c.level <= cover.level)
        .collect();
    let mut rng = DetRng::new(seed ^ 0xc0c0a);
    let mut failures = Vec::new();
    let mut produced = 0;
    while produced < count {
        let w = charts[rng.below(charts.len() as u64) as usize].clone();
        let p = [rng.rational(20, 6), rng.rational(20, 6)];
        // points removed by later blowups are not points of the surface
        let gone = atlas
            .removed
            .get(&w)
            .map(|v| v.iter().any(|(l, q)| *l <= cover.level && q == &p))
            .unwrap_or(false);
        if gone {
            continue;
        }
        produced += 1;
        let covered = cover.charts.iter().any(|chart| chart.contains(&w, &p));
        if !covered {
            failures.push((w, p));
        }
    }
    let pass = failures.is_empty();
    SamplingReport {
        seed,
        count,
        failures,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::algebra::scalar::int;
    use crate::builder::{construct_cover, ChoiceConfig};
    use crate::geometry::CurveRecord;
    use crate::surface::parse_presentation;

    fn build(sp_json: &str) -> (TriCover, StandardAtlas) {
        let sp = parse_presentation(sp_json).unwrap();
        construct_cover(&sp, &ChoiceConfig::default()).unwrap()
    }

    #[test]
    fn plane_base_cover_certifies() {
        let (cover, atlas) = build(r#"{"base":"P2","centers":[]}"#);
        let traces = complement_traces(&cover, &atlas);
        assert_eq!(traces.len(), 3);
        let outcome = verify_emptiness(&cover, &atlas);
        assert!(outcome.is_pass());
        let (_, pass) = verify_pairwise_finite(&cover, &atlas);
        assert!(pass);
        let t = verify_transitions(&cover, &atlas, 100, 1).unwrap();
        assert!(t.pass, "{:?}", t.failures.first());
        let s = sample_coverage(&cover, &atlas, 500, 1);
        assert!(s.pass, "{:?}", s.failures.first());
    }

    #[test]
    fn two_charts_of_the_plane_do_not_cover() {
        // complements of {y != 0} and {z != 0} both contain [1 : 0 : 0]
        let (cover, atlas) = build(r#"{"base":"P2","centers":[]}"#);
        let mut broken = cover.clone();
        // make the third chart a copy of the first: the triple complement
        // intersection becomes the first two complements' intersection
        broken.charts[2] = broken.charts[0].clone();
        let outcome = verify_emptiness(&broken, &atlas);
        // the first complement line meets the second somewhere
        assert!(!outcome.is_pass());
        match outcome {
            EmptinessOutcome::Counterexample { basis, .. } => {
                assert!(!basis.is_empty());
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn tampering_with_a_trace_is_caught() {
        let (cover, atlas) = build(r#"{"base":"P2","centers":[]}"#);
        let mut tampered = cover.clone();
        // multiply every complement trace in S0 by the same extra line: the
        // triple intersection then contains that whole line
        let w = atlas.find_chart("S0").unwrap();
        let x = Poly::var(2, 0);
        let line = &x - &Poly::constant(2, int(3));
        for (i, chart) in tampered.charts.iter_mut().enumerate() {
            let mut extra = CurveRecord::new(format!("junk{i}"));
            extra.set_trace(w.clone(), line.clone());
            chart.complement.push(extra);
        }
        assert!(!verify_emptiness(&tampered, &atlas).is_pass());
        // the shared component also breaks pairwise finiteness
        let (_, finite) = verify_pairwise_finite(&tampered, &atlas);
        assert!(!finite);
    }

    #[test]
    fn one_blowup_certifies_in_all_five_charts() {
        let (cover, atlas) =
            build(r#"{"base":"P2","centers":[{"level":1,"chart":"S0","coords":["1","1"]}]}"#);
        assert_eq!(cover.level, 1);
        let outcome = verify_emptiness(&cover, &atlas);
        match &outcome {
            EmptinessOutcome::Certificate(c) => {
                assert_eq!(c.emptiness.len(), 5);
                assert!(c.emptiness.iter().all(|r| r.pass));
                assert!(replay_certificate(c));
            }
            EmptinessOutcome::Counterexample { chart, labels, .. } => {
                panic!("not covered in {}: {:?}", chart.name, labels)
            }
        }
        let s = sample_coverage(&cover, &atlas, 500, 3);
        assert!(s.pass, "{:?}", s.failures.first());
        let (_, finite) = verify_pairwise_finite(&cover, &atlas);
        assert!(finite);
    }

    #[test]
    fn deleting_a_chart_breaks_the_certificate() {
        let (cover, atlas) =
            build(r#"{"base":"P2","centers":[{"level":1,"chart":"S0","coords":["1","1"]}]}"#);
        for removed in 0..3 {
            let mut partial = cover.clone();
            let keep: Vec<usize> = (0..3).filter(|k| *k != removed).collect();
            // two charts cannot cover: duplicate one so the intersection of
            // complements is governed by the remaining two
            partial.charts[removed] = partial.charts[keep[0]].clone();
            assert!(
                !verify_emptiness(&partial, &atlas).is_pass(),
                "dropping chart {removed} must break coverage"
            );
        }
    }

    #[test]
    fn corrupted_transition_is_reported() {
        let (cover, atlas) = build(r#"{"base":"P2","centers":[]}"#);
        let mut bad = cover.clone();
        let swapped = RationalMap2::new(
            bad.charts[0].to_reference.source.clone(),
            bad.charts[0].to_reference.target.clone(),
            bad.charts[0].to_reference.components[1].clone(),
            bad.charts[0].to_reference.components[0].clone(),
        );
        bad.charts[0].to_reference = swapped;
        let report = verify_transitions(&bad, &atlas, 50, 2).unwrap();
        assert!(!report.pass);
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn hirzebruch_base_certifies() {
        let (cover, atlas) = build(r#"{"base":{"hirzebruch":2},"centers":[]}"#);
        let outcome = verify_emptiness(&cover, &atlas);
        match &outcome {
            EmptinessOutcome::Certificate(c) => {
                assert_eq!(c.emptiness.len(), 4);
                assert!(c.emptiness.iter().all(|r| r.pass));
            }
            EmptinessOutcome::Counterexample { chart, labels, .. } => {
                panic!("not covered in {}: {:?}", chart.name, labels)
            }
        }
        let s = sample_coverage(&cover, &atlas, 400, 9);
        assert!(s.pass, "{:?}", s.failures.first());
    }

    use crate::geometry::RationalMap2;

    #[test]
    fn empty_sample_report_passes() {
        let (cover, atlas) = build(r#"{"base":"P2","centers":[]}"#);
        let s = sample_coverage(&cover, &atlas, 0, 0);
        assert!(s.pass && s.failures.is_empty());
    }

    #[test]
    fn exceptional_traces_divide_once() {
        // after one blowup the new complement traces in the blowup charts
        // come from one exact division by the exceptional coordinate
        let (cover, atlas) =
            build(r#"{"base":"P2","centers":[{"level":1,"chart":"S0","coords":["0","0"]}]}"#);
        let b1a = atlas.find_chart("B1a").unwrap();
        let down = atlas.transition(&b1a, &atlas.find_chart("S0").unwrap()).unwrap();
        for chart in &cover.charts {
            // the line record is first; compare against pullback-and-divide
            let rec = &chart.complement[0];
            let s0 = atlas.find_chart("S0").unwrap();
            let tw = rec.trace_in(&s0).unwrap();
            let (expected, mult) =
                crate::geometry::proper_transform_with_mult(tw, down).unwrap();
            assert_eq!(mult, 1);
            if let Some(tr) = rec.trace_in(&b1a) {
                assert_eq!(tr, &expected);
            } else {
                assert!(expected.is_constant());
            }
            let u = Poly::var(2, 0);
            if let Some(tr) = rec.trace_in(&b1a) {
                assert!(tr.div_exact(&u).is_none(), "no leftover exceptional factor");
            }
        }
        let _ = parse_poly("x", 2).unwrap();
    }
}
