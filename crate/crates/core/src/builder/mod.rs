//! The constructive pipeline: base covers of the minimal model, blowup
//! charts attached to chosen lines, the inductive step, and the top-level
//! orchestration that walks the whole tower.
//!
//! Every generic choice is drawn from a seeded deterministic stream and
//! checked against exact predicates before it is accepted; the audit log
//! records each accepted candidate so a replay can re-verify every
//! predicate from scratch.

pub mod base_hirzebruch;
pub mod base_p2;
pub mod choice;
pub mod step;

pub use base_hirzebruch::base_cover_hirzebruch;
pub use base_p2::base_cover_p2;
pub use choice::{AuditEntry, ChoiceConfig, Chooser};
pub use step::{blowup_chart, inductive_step, BlowupChart};

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{groebner_basis, Poly, RatFun};
use crate::geometry::{ChartId, CurveRecord, GeometryError, Point2, RationalMap2};
use crate::surface::{
    future_center_sets, MinimalModel, PresentationError, StandardAtlas, SurfacePresentation,
};

#[derive(Debug, Clone, Error)]
pub enum BuildError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("choice at {site:?} exhausted after {attempts} candidates")]
    ChoiceExhausted { site: String, attempts: u32 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error("internal error: {0}")]
    Internal(String),
}

/// One of the three constructed affine-plane charts: abstract coordinates
/// plus birational maps to a designated standard chart of the same level,
/// and the list of curves making up its complement on the surface.
#[derive(Debug, Clone)]
pub struct Chart {
    pub id: ChartId,
    pub reference: ChartId,
    pub to_reference: RationalMap2,
    pub from_reference: RationalMap2,
    pub complement: Vec<CurveRecord>,
}

impl Chart {
    /// Exact membership of a surface point (given in a standard chart) in
    /// this constructed chart: no complement trace may vanish there.
    pub fn contains(&self, chart: &ChartId, p: &Point2) -> bool {
        self.complement
            .iter()
            .all(|rec| rec.eval_in(chart, p).map(|v| !v.is_zero()).unwrap_or(false))
    }
}

/// The three charts covering one level of the tower.
#[derive(Debug, Clone)]
pub struct TriCover {
    pub level: usize,
    pub charts: [Chart; 3],
    pub audit: Vec<AuditEntry>,
}

impl TriCover {
    pub fn contains_in_all(&self, chart: &ChartId, p: &Point2) -> bool {
        self.charts.iter().all(|c| c.contains(chart, p))
    }
}

/// Per-run scratch state: memoized pairwise intersection bases keyed by
/// standard chart and curve labels (traces never change once computed, so
/// the memo stays valid across steps).
#[derive(Default)]
pub struct BuildCtx {
    pair_memo: BTreeMap<(ChartId, String, String), Option<Vec<Poly>>>,
}

/// A nonempty finite piece of the intersection of two tracked curves,
/// encoded by a Groebner basis in one standard chart. The traces of curves
/// through an already blown-up center still vanish at its old location, so
/// the removed points sitting in the variety are carried along as allowed
/// exceptions: they are not points of the surface.
#[derive(Debug, Clone)]
pub struct PairComponent {
    pub chart: ChartId,
    pub basis: Vec<Poly>,
    pub labels: (String, String),
    pub allowed: Vec<Point2>,
}

impl BuildCtx {
    /// All nonempty per-chart components of the intersection of two curve
    /// families, over the standard charts up to the given level.
    pub fn intersect_families(
        &mut self,
        atlas: &StandardAtlas,
        level: usize,
        fam_a: &[CurveRecord],
        fam_b: &[CurveRecord],
    ) -> Vec<PairComponent> {
        let mut out = Vec::new();
        for chart in atlas.chart_ids().into_iter().filter(|c| c.level <= level) {
            let removed: Vec<Point2> = atlas
                .removed
                .get(&chart)
                .map(|v| {
                    v.iter()
                        .filter(|(l, _)| *l <= level)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .unwrap_or_default();
            for a in fam_a {
                let Some(ta) = a.trace_in(&chart) else { continue };
                for b in fam_b {
                    let Some(tb) = b.trace_in(&chart) else { continue };
                    let key = (chart.clone(), a.label.clone(), b.label.clone());
                    let basis = self
                        .pair_memo
                        .entry(key)
                        .or_insert_with(|| {
                            let gb = groebner_basis(&[ta.clone(), tb.clone()]);
                            if gb.len() == 1 && gb[0].is_constant() {
                                None
                            } else {
                                Some(gb)
                            }
                        })
                        .clone();
                    if let Some(basis) = basis {
                        let allowed: Vec<Point2> = removed
                            .iter()
                            .filter(|p| {
                                [ta, tb].iter().all(|t| {
                                    t.eval(&[p[0].clone(), p[1].clone()])
                                        .map(|v| v.is_zero())
                                        .unwrap_or(false)
                                })
                            })
                            .cloned()
                            .collect();
                        out.push(PairComponent {
                            chart: chart.clone(),
                            basis,
                            labels: (a.label.clone(), b.label.clone()),
                            allowed,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Reduced coordinate map from a standard chart into a constructed chart.
pub fn map_into_chart(
    atlas: &StandardAtlas,
    from: &ChartId,
    chart: &Chart,
) -> Result<RationalMap2, BuildError> {
    let hop = atlas.transition_or_identity(from, &chart.reference);
    Ok(chart.from_reference.compose(&hop)?)
}

/// Reduced coordinate map from a constructed chart onto a standard chart.
pub fn map_from_chart(
    atlas: &StandardAtlas,
    chart: &Chart,
    to: &ChartId,
) -> Result<RationalMap2, BuildError> {
    let hop = atlas.transition_or_identity(&chart.reference, to);
    Ok(hop.compose(&chart.to_reference)?)
}

/// Numerator of a line equation pulled through a coordinate map; by the
/// divisor argument its zero set meets the chart's interior exactly along
/// the line, with any extra factors supported on the chart's complement.
pub fn line_numerator(line: &Poly, into: &RationalMap2) -> Poly {
    let f = RatFun::from_poly(line.clone())
        .compose(&into.components)
        .expect("line pullback along a dominant map");
    f.num().normalized()
}

/// Exact trace table of a line chosen inside a constructed chart: pull the
/// equation into each standard chart and strip the factors supported on the
/// chart's complement curves.
pub fn line_trace_record(
    atlas: &StandardAtlas,
    level: usize,
    chart: &Chart,
    line: &Poly,
    label: impl Into<String>,
) -> Result<CurveRecord, BuildError> {
    let mut rec = CurveRecord::new(label);
    for w in atlas.chart_ids().into_iter().filter(|c| c.level <= level) {
        let into = map_into_chart(atlas, &w, chart)?;
        let f = RatFun::from_poly(line.clone()).compose(&into.components)?;
        if f.num().is_constant() {
            continue;
        }
        let mut n = f.num().normalized();
        for c in &chart.complement {
            if let Some(t) = c.trace_in(&w) {
                while let Some(q) = n.div_exact(t) {
                    n = q;
                }
            }
        }
        rec.set_trace(w, n);
    }
    Ok(rec)
}

/// Candidate test: the line (given by its pulled-back numerator per chart)
/// misses the finite set cut by the component basis, removed points aside.
pub fn line_misses_component(numerator: &Poly, comp: &PairComponent) -> bool {
    let mut gens = comp.basis.clone();
    gens.push(numerator.clone());
    let pts: Vec<(crate::algebra::Scalar, crate::algebra::Scalar)> = comp
        .allowed
        .iter()
        .filter(|p| {
            numerator
                .eval(&[p[0].clone(), p[1].clone()])
                .map(|v| v.is_zero())
                .unwrap_or(false)
        })
        .map(|p| (p[0].clone(), p[1].clone()))
        .collect();
    crate::algebra::variety_within_points(&gens, &pts).0
}

/// Applies the construction across the whole tower: base cover of the
/// minimal model protecting every future center, then one inductive step
/// per blowup with the future-center sets threaded through.
pub fn construct_cover(
    sp: &SurfacePresentation,
    cfg: &ChoiceConfig,
) -> Result<(TriCover, StandardAtlas), BuildError> {
    let atlas = StandardAtlas::build(sp)?;
    let mut chooser = Chooser::search(cfg.clone());
    let cover = construct_with(&atlas, sp, &mut chooser)?;
    Ok((cover, atlas))
}

/// Re-runs the construction forcing the logged choices; every predicate is
/// re-evaluated from scratch and any failure is a replay mismatch.
pub fn replay_cover(
    sp: &SurfacePresentation,
    cfg: &ChoiceConfig,
    audit: &[AuditEntry],
) -> Result<TriCover, BuildError> {
    let atlas = StandardAtlas::build(sp)?;
    let mut chooser = Chooser::replay(cfg.clone(), audit)?;
    construct_with(&atlas, sp, &mut chooser)
}

fn construct_with(
    atlas: &StandardAtlas,
    sp: &SurfacePresentation,
    chooser: &mut Chooser,
) -> Result<TriCover, BuildError> {
    let mut ctx = BuildCtx::default();
    // every center, pushed to the minimal model, must end up in all three
    // base charts
    let mut avoid: Vec<(ChartId, Point2)> = Vec::new();
    for (ck, pk) in &atlas.centers {
        let at0 = atlas.pushforward(ck, pk, 0);
        if !avoid.iter().any(|e| atlas.points_equal(e, &at0)) {
            avoid.push(at0);
        }
    }
    let mut cover = match &sp.base {
        MinimalModel::Plane => base_cover_p2(atlas, &avoid, chooser)?,
        MinimalModel::Hirzebruch(n) => base_cover_hirzebruch(atlas, *n, &avoid, chooser)?,
    };
    for (chart, p) in &avoid {
        if !cover.contains_in_all(chart, p) {
            return Err(BuildError::Internal(format!(
                "base cover misses protected point in {}",
                chart.name
            )));
        }
    }
    for i in 1..=atlas.levels {
        let (a1, a2) = future_center_sets(atlas, i);
        let p = atlas.centers[i - 1].clone();
        cover = inductive_step(atlas, &mut ctx, &cover, i, &p, &a1, &a2, chooser)?;
    }
    cover.audit = chooser.audit().to_vec();
    Ok(cover)
}

/// Transition map between two constructed charts of the same cover, routed
/// through their reference charts.
pub fn cover_transition(
    atlas: &StandardAtlas,
    from: &Chart,
    to: &Chart,
) -> Result<RationalMap2, BuildError> {
    let down = map_from_chart(atlas, from, &to.reference)?;
    Ok(to.from_reference.compose(&down)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::surface::{parse_presentation, BlowupCenter};

    fn p2_sp(centers: &[(&str, i64, i64)]) -> SurfacePresentation {
        SurfacePresentation {
            base: MinimalModel::Plane,
            centers: centers
                .iter()
                .enumerate()
                .map(|(i, (chart, a, b))| BlowupCenter {
                    level: i + 1,
                    chart: chart.to_string(),
                    coords: [int(*a), int(*b)],
                })
                .collect(),
        }
    }

    #[test]
    fn empty_tower_is_the_base_case() {
        let sp = p2_sp(&[]);
        let (cover, _) = construct_cover(&sp, &ChoiceConfig::default()).unwrap();
        assert_eq!(cover.level, 0);
        assert_eq!(cover.charts.len(), 3);
        assert!(!cover.audit.is_empty());
    }

    #[test]
    fn cover_transitions_round_trip() {
        let sp = p2_sp(&[("S0", 1, 1)]);
        let (cover, atlas) = construct_cover(&sp, &ChoiceConfig::default()).unwrap();
        let mut rng = crate::rng::DetRng::new(5);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let fwd = cover_transition(&atlas, &cover.charts[i], &cover.charts[j]).unwrap();
                let back = cover_transition(&atlas, &cover.charts[j], &cover.charts[i]).unwrap();
                let mut checked = 0;
                let mut tries = 0;
                while checked < 100 && tries < 400 {
                    tries += 1;
                    let p = [rng.rational(8, 5), rng.rational(8, 5)];
                    if let Some(q) = fwd.eval(&p) {
                        if let Some(r) = back.eval(&q) {
                            assert_eq!(r, p);
                            checked += 1;
                        }
                    }
                }
                assert!(checked >= 100, "not enough sample points evaluated");
            }
        }
    }

    #[test]
    fn replay_reproduces_the_cover() {
        let sp = parse_presentation(
            r#"{"base":"P2","centers":[{"level":1,"chart":"S0","coords":["1","1"]}]}"#,
        )
        .unwrap();
        let cfg = ChoiceConfig::default();
        let (cover, _) = construct_cover(&sp, &cfg).unwrap();
        let replayed = replay_cover(&sp, &cfg, &cover.audit).unwrap();
        for (a, b) in cover.charts.iter().zip(replayed.charts.iter()) {
            assert_eq!(a.to_reference.components, b.to_reference.components);
            assert_eq!(a.complement.len(), b.complement.len());
        }
    }
}
