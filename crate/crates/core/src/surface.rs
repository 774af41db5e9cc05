//! The input data model: a minimal model (projective plane or Hirzebruch
//! surface) plus an ordered list of blowup centers, possibly infinitely
//! near. Building the standard atlas also validates the presentation: every
//! chart reference must resolve and no center may name a point that an
//! earlier blowup already removed.
//!
//! The standard atlas is the certified covering family the verifier works
//! over: the base charts of the minimal model plus two standard blowup
//! charts per center. Transitions between all chart pairs are precomputed
//! and reduced; membership of a point in a chart is decided by a round trip
//! through the transition pair.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{parse_scalar, Poly, RatFun, Scalar};
use crate::geometry::{
    proper_transform_with_mult, ChartId, CurveRecord, Point2, ProjPoint, RationalMap2,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("n must be >= 0 (got {0})")]
    NegativeParameter(i64),
    #[error("base must be \"P2\" or {{\"hirzebruch\": n}}")]
    BadBase,
    #[error("center levels must be consecutive starting at 1 (center {index} has level {level})")]
    NonConsecutiveLevels { index: usize, level: usize },
    #[error("center {level}: dangling chart reference {chart:?}")]
    DanglingChart { level: usize, chart: String },
    #[error("center {level}: chart {chart:?} does not exist before this level")]
    ChartTooNew { level: usize, chart: String },
    #[error("duplicate center: center {level} names a point removed by blowup {earlier}")]
    DuplicateCenter { level: usize, earlier: usize },
    #[error("syntax error: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalModel {
    Plane,
    Hirzebruch(u32),
}

#[derive(Debug, Clone)]
pub struct BlowupCenter {
    pub level: usize,
    pub chart: String,
    pub coords: Point2,
}

#[derive(Debug, Clone)]
pub struct SurfacePresentation {
    pub base: MinimalModel,
    pub centers: Vec<BlowupCenter>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawBase {
    Tag(String),
    Hirzebruch { hirzebruch: i64 },
}

#[derive(Deserialize)]
struct RawCenter {
    level: usize,
    chart: String,
    coords: [String; 2],
}

#[derive(Deserialize)]
struct RawPresentation {
    base: RawBase,
    #[serde(default)]
    centers: Vec<RawCenter>,
}

/// Parses the structured input document. Coordinates are exact rational
/// strings like "3/7"; no floating point is accepted anywhere.
pub fn parse_presentation(text: &str) -> Result<SurfacePresentation, PresentationError> {
    let raw: RawPresentation =
        serde_json::from_str(text).map_err(|e| PresentationError::Syntax(e.to_string()))?;
    let base = match raw.base {
        RawBase::Tag(t) if t == "P2" => MinimalModel::Plane,
        RawBase::Tag(_) => return Err(PresentationError::BadBase),
        RawBase::Hirzebruch { hirzebruch } => {
            if hirzebruch < 0 {
                return Err(PresentationError::NegativeParameter(hirzebruch));
            }
            MinimalModel::Hirzebruch(hirzebruch as u32)
        }
    };
    let mut centers = Vec::new();
    for (i, c) in raw.centers.into_iter().enumerate() {
        if c.level != i + 1 {
            return Err(PresentationError::NonConsecutiveLevels {
                index: i,
                level: c.level,
            });
        }
        let x = parse_scalar(&c.coords[0])
            .map_err(|e| PresentationError::Syntax(format!("center {}: {e}", c.level)))?;
        let y = parse_scalar(&c.coords[1])
            .map_err(|e| PresentationError::Syntax(format!("center {}: {e}", c.level)))?;
        centers.push(BlowupCenter {
            level: c.level,
            chart: c.chart,
            coords: [x, y],
        });
    }
    Ok(SurfacePresentation { base, centers })
}

/// One chart of the standard atlas. Blowup charts remember their parent
/// chart, the center they sit over, and which of the two standard models
/// they are.
#[derive(Debug, Clone)]
pub struct StdChart {
    pub id: ChartId,
    pub parent: Option<BlowupChartInfo>,
}

#[derive(Debug, Clone)]
pub struct BlowupChartInfo {
    pub parent: ChartId,
    pub center: Point2,
    /// false: (u, v) -> (a + u, b + u v); true: (u, v) -> (a + u v, b + u)
    pub swapped: bool,
}

pub type ExceptionalRecord = CurveRecord;

#[derive(Debug, Clone)]
pub struct StandardAtlas {
    pub base: MinimalModel,
    pub levels: usize,
    pub charts: Vec<StdChart>,
    transitions: BTreeMap<(ChartId, ChartId), RationalMap2>,
    /// per chart: surface points removed by later blowups, with the level
    /// that removed them
    pub removed: BTreeMap<ChartId, Vec<(usize, Point2)>>,
    /// resolved centers: chart id plus exact coordinates, one per level
    pub centers: Vec<(ChartId, Point2)>,
    /// trace tables of each exceptional curve E_i at the top level
    pub exceptional: Vec<ExceptionalRecord>,
    pub warnings: Vec<String>,
}

fn rf(num: Poly, den: Poly) -> RatFun {
    RatFun::new(num, den).expect("nonzero denominator")
}

fn x() -> Poly {
    Poly::var(2, 0)
}

fn y() -> Poly {
    Poly::var(2, 1)
}

fn c(v: i64) -> Poly {
    Poly::constant(2, Scalar::from_integer(v.into()))
}

impl StandardAtlas {
    /// Builds the tower atlas, validating the presentation along the way.
    pub fn build(sp: &SurfacePresentation) -> Result<StandardAtlas, PresentationError> {
        let mut atlas = StandardAtlas {
            base: sp.base.clone(),
            levels: sp.centers.len(),
            charts: Vec::new(),
            transitions: BTreeMap::new(),
            removed: BTreeMap::new(),
            centers: Vec::new(),
            exceptional: Vec::new(),
            warnings: Vec::new(),
        };
        match &sp.base {
            MinimalModel::Plane => atlas.build_p2_base(),
            MinimalModel::Hirzebruch(n) => {
                if *n == 1 {
                    atlas.warnings.push(
                        "Hirzebruch parameter 1: not minimal as a model, construction proceeds"
                            .into(),
                    );
                }
                atlas.build_hirzebruch_base(*n);
            }
        }
        for (i, center) in sp.centers.iter().enumerate() {
            let level = i + 1;
            debug_assert_eq!(center.level, level);
            let chart = atlas
                .charts
                .iter()
                .map(|c| c.id.clone())
                .find(|id| id.name == center.chart)
                .ok_or_else(|| PresentationError::DanglingChart {
                    level,
                    chart: center.chart.clone(),
                })?;
            if chart.level > level - 1 {
                return Err(PresentationError::ChartTooNew {
                    level,
                    chart: center.chart.clone(),
                });
            }
            if let Some((earlier, _)) = atlas
                .removed
                .get(&chart)
                .and_then(|v| v.iter().find(|(_, q)| q == &center.coords))
            {
                let earlier = *earlier;
                return Err(PresentationError::DuplicateCenter { level, earlier });
            }
            atlas.blow_up(level, chart, center.coords.clone());
        }
        Ok(atlas)
    }

    fn add_transition(&mut self, map: RationalMap2) {
        self.transitions
            .insert((map.source.clone(), map.target.clone()), map);
    }

    fn build_p2_base(&mut self) {
        let s0 = ChartId::new(0, "S0");
        let s1 = ChartId::new(0, "S1");
        let s2 = ChartId::new(0, "S2");
        for id in [&s0, &s1, &s2] {
            self.charts.push(StdChart {
                id: id.clone(),
                parent: None,
            });
        }
        // S0 = {z != 0} with (x, y) -> [x : y : 1]
        // S1 = {x != 0} with (u, v) -> [1 : u : v]
        // S2 = {y != 0} with (s, t) -> [s : 1 : t]
        let t = |a: &ChartId, b: &ChartId, fx: RatFun, fy: RatFun| {
            RationalMap2::new(a.clone(), b.clone(), fx, fy)
        };
        self.add_transition(t(&s0, &s1, rf(y(), x()), rf(c(1), x())));
        self.add_transition(t(&s0, &s2, rf(x(), y()), rf(c(1), y())));
        self.add_transition(t(&s1, &s0, rf(c(1), y()), rf(x(), y())));
        self.add_transition(t(&s1, &s2, rf(c(1), x()), rf(y(), x())));
        self.add_transition(t(&s2, &s0, rf(x(), y()), rf(c(1), y())));
        self.add_transition(t(&s2, &s1, rf(c(1), x()), rf(y(), x())));
    }

    fn build_hirzebruch_base(&mut self, n: u32) {
        let h00 = ChartId::new(0, "H00");
        let h01 = ChartId::new(0, "H01");
        let h10 = ChartId::new(0, "H10");
        let h11 = ChartId::new(0, "H11");
        for id in [&h00, &h01, &h10, &h11] {
            self.charts.push(StdChart {
                id: id.clone(),
                parent: None,
            });
        }
        // coordinates (z, w); the fiber coordinate transforms across the
        // base transition by the degree-n cocycle w' = z^n w
        let zn = x().pow(n);
        let t = |a: &ChartId, b: &ChartId, fx: RatFun, fy: RatFun| {
            RationalMap2::new(a.clone(), b.clone(), fx, fy)
        };
        // fiber swaps within a base chart
        self.add_transition(t(&h00, &h01, RatFun::from_poly(x()), rf(c(1), y())));
        self.add_transition(t(&h01, &h00, RatFun::from_poly(x()), rf(c(1), y())));
        self.add_transition(t(&h10, &h11, RatFun::from_poly(x()), rf(c(1), y())));
        self.add_transition(t(&h11, &h10, RatFun::from_poly(x()), rf(c(1), y())));
        // base swaps carrying the cocycle
        self.add_transition(t(&h00, &h10, rf(c(1), x()), RatFun::from_poly(&zn * &y())));
        self.add_transition(t(&h10, &h00, rf(c(1), x()), RatFun::from_poly(&zn * &y())));
        self.add_transition(t(&h01, &h11, rf(c(1), x()), rf(y(), zn.clone())));
        self.add_transition(t(&h11, &h01, rf(c(1), x()), rf(y(), zn.clone())));
        // mixed swaps
        self.add_transition(t(&h00, &h11, rf(c(1), x()), rf(c(1), &zn * &y())));
        self.add_transition(t(&h11, &h00, rf(c(1), x()), rf(zn.clone(), y())));
        self.add_transition(t(&h01, &h10, rf(c(1), x()), rf(zn.clone(), y())));
        self.add_transition(t(&h10, &h01, rf(c(1), x()), rf(c(1), &zn * &y())));
    }

    fn blow_up(&mut self, level: usize, parent: ChartId, center: Point2) {
        let a = center[0].clone();
        let b = center[1].clone();
        let ba = ChartId::new(level, format!("B{level}a"));
        let bb = ChartId::new(level, format!("B{level}b"));
        let pa = Poly::constant(2, a.clone());
        let pb = Poly::constant(2, b.clone());

        // Ba: (u, v) -> (a + u, b + u v), exceptional u = 0, misses the
        // vertical direction. Bb swaps the roles.
        let ba_down = RationalMap2::new(
            ba.clone(),
            parent.clone(),
            RatFun::from_poly(&pa + &x()),
            RatFun::from_poly(&pb + &(&x() * &y())),
        );
        let ba_up = RationalMap2::new(
            parent.clone(),
            ba.clone(),
            RatFun::from_poly(&x() - &pa),
            rf(&y() - &pb, &x() - &pa),
        );
        let bb_down = RationalMap2::new(
            bb.clone(),
            parent.clone(),
            RatFun::from_poly(&pa + &(&x() * &y())),
            RatFun::from_poly(&pb + &x()),
        );
        let bb_up = RationalMap2::new(
            parent.clone(),
            bb.clone(),
            RatFun::from_poly(&y() - &pb),
            rf(&x() - &pa, &y() - &pb),
        );

        // removed points: the center disappears from every chart that saw it
        for chart in self.charts.iter().map(|c| c.id.clone()).collect::<Vec<_>>() {
            if chart == parent {
                self.removed
                    .entry(chart)
                    .or_default()
                    .push((level, center.clone()));
            } else if let Some(q) = self.transport_point(&parent, &center, &chart) {
                self.removed.entry(chart).or_default().push((level, q));
            }
        }

        // the new charts inherit the locations of points removed earlier:
        // those sit under older exceptional curves and are not points of the
        // surface either
        let mut inherited: Vec<(ChartId, usize, Point2)> = Vec::new();
        for (lvl, q) in self.removed.get(&parent).cloned().unwrap_or_default() {
            if lvl >= level {
                continue;
            }
            for (new_id, up, down) in [(&ba, &ba_up, &ba_down), (&bb, &bb_up, &bb_down)] {
                if let Some(img) = up.eval(&q) {
                    if down.eval(&img).as_ref() == Some(&q) {
                        inherited.push((new_id.clone(), lvl, img));
                    }
                }
            }
        }
        for (chart, lvl, img) in inherited {
            self.removed.entry(chart).or_default().push((lvl, img));
        }

        // transitions between the new charts and everything else
        let existing: Vec<ChartId> = self.charts.iter().map(|c| c.id.clone()).collect();
        for (down, up) in [(&ba_down, &ba_up), (&bb_down, &bb_up)] {
            for old in &existing {
                if *old == parent {
                    continue;
                }
                let to_old = self
                    .transition(&parent, old)
                    .expect("tower transitions are complete")
                    .clone();
                let from_old = self
                    .transition(old, &parent)
                    .expect("tower transitions are complete")
                    .clone();
                let out = to_old.compose(down).expect("tower transition composes");
                let back = up.compose(&from_old).expect("tower transition composes");
                self.add_transition(out);
                self.add_transition(back);
            }
            self.add_transition(down.clone());
            self.add_transition(up.clone());
        }
        let sib = bb_up.compose(&ba_down).expect("sibling transition");
        let sib_back = ba_up.compose(&bb_down).expect("sibling transition");
        self.add_transition(sib);
        self.add_transition(sib_back);

        // exceptional curve records: the new E is u = 0 in both new charts,
        // invisible everywhere else; older exceptional curves gain their
        // proper transforms in the new charts
        for rec in self.exceptional.iter_mut() {
            if let Some(tr) = rec.traces.get(&parent).cloned() {
                for (new_id, down) in [(&ba, &ba_down), (&bb, &bb_down)] {
                    let (pt, _) =
                        proper_transform_with_mult(&tr, down).expect("trace is nonzero");
                    rec.set_trace(new_id.clone(), pt);
                }
            }
        }
        let mut e = CurveRecord::new(format!("E{level}"));
        e.set_trace(ba.clone(), x());
        e.set_trace(bb.clone(), x());
        self.exceptional.push(e);

        self.charts.push(StdChart {
            id: ba,
            parent: Some(BlowupChartInfo {
                parent: parent.clone(),
                center: center.clone(),
                swapped: false,
            }),
        });
        self.charts.push(StdChart {
            id: bb,
            parent: Some(BlowupChartInfo {
                parent: parent.clone(),
                center: center.clone(),
                swapped: true,
            }),
        });
        self.centers.push((parent, center));
    }

    pub fn chart_ids(&self) -> Vec<ChartId> {
        self.charts.iter().map(|c| c.id.clone()).collect()
    }

    pub fn chart(&self, id: &ChartId) -> Option<&StdChart> {
        self.charts.iter().find(|c| &c.id == id)
    }

    pub fn find_chart(&self, name: &str) -> Option<ChartId> {
        self.charts
            .iter()
            .map(|c| &c.id)
            .find(|id| id.name == name)
            .cloned()
    }

    /// Reduced transition map between two distinct charts.
    pub fn transition(&self, from: &ChartId, to: &ChartId) -> Option<&RationalMap2> {
        self.transitions.get(&(from.clone(), to.clone()))
    }

    pub fn transition_or_identity(&self, from: &ChartId, to: &ChartId) -> RationalMap2 {
        if from == to {
            RationalMap2::identity(from.clone())
        } else {
            self.transition(from, to)
                .unwrap_or_else(|| panic!("missing transition {} -> {}", from.name, to.name))
                .clone()
        }
    }

    /// Moves a point to another chart's coordinates; the result must
    /// round-trip back exactly, which rules out points the target chart does
    /// not contain (for example exceptional points under a blowdown).
    pub fn transport_point(&self, from: &ChartId, p: &Point2, to: &ChartId) -> Option<Point2> {
        if from == to {
            return Some(p.clone());
        }
        let fwd = self.transition(from, to)?;
        let q = fwd.eval(p)?;
        let back = self.transition(to, from)?.eval(&q)?;
        (back == *p).then_some(q)
    }

    /// Equality of surface points given in possibly different charts.
    pub fn points_equal(&self, a: &(ChartId, Point2), b: &(ChartId, Point2)) -> bool {
        if a.0 == b.0 {
            return a.1 == b.1;
        }
        match self.transport_point(&a.0, &a.1, &b.0) {
            Some(q) => q == b.1,
            None => false,
        }
    }

    /// Whether the point survives to the top of the tower (was not blown up
    /// at a level after its chart's birth).
    pub fn point_is_alive(&self, chart: &ChartId, p: &Point2) -> bool {
        self.removed
            .get(chart)
            .map(|v| v.iter().all(|(_, q)| q != p))
            .unwrap_or(true)
    }

    /// Image of a point under the composed blowdowns to the target level.
    /// Exceptional points collapse to their center.
    pub fn pushforward(
        &self,
        chart: &ChartId,
        p: &Point2,
        target_level: usize,
    ) -> (ChartId, Point2) {
        let mut chart = chart.clone();
        let mut p = p.clone();
        while chart.level > target_level {
            let info = self
                .chart(&chart)
                .and_then(|c| c.parent.as_ref())
                .expect("blowup charts have parents")
                .clone();
            let down = self
                .transition(&chart, &info.parent)
                .expect("blowdown transition exists");
            p = down.eval(&p).expect("blowdowns are polynomial");
            chart = info.parent;
        }
        (chart, p)
    }

    /// Projective-line image of a Hirzebruch chart point under the bundle
    /// projection.
    pub fn fiber_base(&self, chart: &ChartId, p: &Point2) -> ProjPoint {
        debug_assert!(matches!(self.base, MinimalModel::Hirzebruch(_)));
        let (c0, p0) = self.pushforward(chart, p, 0);
        match c0.name.as_str() {
            "H00" | "H01" => ProjPoint::finite(p0[0].clone()),
            _ => ProjPoint(Scalar::from_integer(1.into()), p0[0].clone()),
        }
    }
}

/// The finite sets steering one inductive step: images of future blowup
/// centers away from the current center (on the surface below), and future
/// centers sitting on the new exceptional curve (in the new blowup charts).
pub fn future_center_sets(
    atlas: &StandardAtlas,
    step: usize,
) -> (Vec<(ChartId, Point2)>, Vec<(ChartId, Point2)>) {
    assert!(step >= 1 && step <= atlas.levels);
    let mut a1: Vec<(ChartId, Point2)> = Vec::new();
    let mut a2: Vec<(ChartId, Point2)> = Vec::new();
    let current = {
        let (c, p) = &atlas.centers[step - 1];
        (c.clone(), p.clone())
    };
    for k in step + 1..=atlas.levels {
        let (ck, pk) = &atlas.centers[k - 1];
        let at_i = atlas.pushforward(ck, pk, step);
        let on_e = at_i.0.level == step && at_i.1[0].is_zero();
        if on_e {
            // canonical representation: prefer the unswapped chart
            let canon = if at_i.0.name.ends_with('b') && !at_i.1[1].is_zero() {
                let ba = atlas.find_chart(&format!("B{step}a")).unwrap();
                let q = atlas
                    .transport_point(&at_i.0, &at_i.1, &ba)
                    .expect("direction visible in sibling chart");
                (ba, q)
            } else {
                at_i
            };
            if !a2.iter().any(|e| atlas.points_equal(e, &canon)) {
                a2.push(canon);
            }
        } else {
            let below = atlas.pushforward(&at_i.0, &at_i.1, step - 1);
            debug_assert!(!atlas.points_equal(&below, &current));
            if !a1.iter().any(|e| atlas.points_equal(e, &below)) {
                a1.push(below);
            }
        }
    }
    let _ = current;
    (a1, a2)
}

/// Checks chart references, distinctness of centers, and level
/// consecutiveness. Returns warnings (for example Hirzebruch parameter 1).
pub fn validate_presentation(
    sp: &SurfacePresentation,
) -> Result<Vec<String>, PresentationError> {
    StandardAtlas::build(sp).map(|a| a.warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{frac, int};
    use crate::rng::DetRng;

    fn p2_presentation(centers: &[(&str, i64, i64)]) -> SurfacePresentation {
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
    fn parse_examples() {
        let sp = parse_presentation(r#"{"base":"P2","centers":[]}"#).unwrap();
        assert_eq!(sp.base, MinimalModel::Plane);
        assert!(sp.centers.is_empty());

        let sp = parse_presentation(
            r#"{"base":{"hirzebruch":2},"centers":[{"level":1,"chart":"H00","coords":["1","1"]}]}"#,
        )
        .unwrap();
        assert_eq!(sp.base, MinimalModel::Hirzebruch(2));
        assert_eq!(sp.centers.len(), 1);
        assert_eq!(sp.centers[0].coords, [int(1), int(1)]);

        let err = parse_presentation(r#"{"base":{"hirzebruch":-1}}"#).unwrap_err();
        assert_eq!(err, PresentationError::NegativeParameter(-1));
    }

    #[test]
    fn validation_examples() {
        assert!(validate_presentation(&p2_presentation(&[])).is_ok());

        // two centers naming the same surface point
        let dup = p2_presentation(&[("S0", 1, 2), ("S0", 1, 2)]);
        assert!(matches!(
            validate_presentation(&dup),
            Err(PresentationError::DuplicateCenter { level: 2, earlier: 1 })
        ));

        // infinitely near center on the first exceptional curve
        let sp = SurfacePresentation {
            base: MinimalModel::Hirzebruch(2),
            centers: vec![
                BlowupCenter {
                    level: 1,
                    chart: "H00".into(),
                    coords: [int(0), int(0)],
                },
                BlowupCenter {
                    level: 2,
                    chart: "B1a".into(),
                    coords: [int(0), int(3)],
                },
            ],
        };
        assert!(validate_presentation(&sp).is_ok());

        let sp = p2_presentation(&[("S9", 0, 0)]);
        assert!(matches!(
            validate_presentation(&sp),
            Err(PresentationError::DanglingChart { .. })
        ));

        let hz1 = SurfacePresentation {
            base: MinimalModel::Hirzebruch(1),
            centers: vec![],
        };
        assert_eq!(validate_presentation(&hz1).unwrap().len(), 1);
    }

    #[test]
    fn p2_atlas_round_trips() {
        let atlas = StandardAtlas::build(&p2_presentation(&[])).unwrap();
        assert_eq!(atlas.charts.len(), 3);
        assert_eq!(atlas.transitions.len(), 6);
        let ids = atlas.chart_ids();
        let mut rng = DetRng::new(7);
        for _ in 0..50 {
            let p = [rng.rational(10, 4), rng.rational(10, 4)];
            for from in &ids {
                for to in &ids {
                    if from == to {
                        continue;
                    }
                    if let Some(q) = atlas.transition(from, to).unwrap().eval(&p) {
                        if let Some(back) = atlas.transition(to, from).unwrap().eval(&q) {
                            assert_eq!(back, p, "{} -> {}", from.name, to.name);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hirzebruch_cocycle() {
        // constant section w = c maps to w' = c z^n across the base swap
        let atlas = StandardAtlas::build(&SurfacePresentation {
            base: MinimalModel::Hirzebruch(2),
            centers: vec![],
        })
        .unwrap();
        assert_eq!(atlas.charts.len(), 4);
        assert_eq!(atlas.transitions.len(), 12);
        let h00 = atlas.find_chart("H00").unwrap();
        let h10 = atlas.find_chart("H10").unwrap();
        let t = atlas.transition(&h00, &h10).unwrap();
        let z = int(3);
        let w = frac(5, 2);
        let img = t.eval(&[z.clone(), w.clone()]).unwrap();
        assert_eq!(img[0], frac(1, 3));
        assert_eq!(img[1], int(9) * w);

        // full cycles through all four charts return to the start
        let ids = atlas.chart_ids();
        let mut rng = DetRng::new(11);
        for _ in 0..30 {
            let p = [rng.rational(6, 3), rng.rational(6, 3)];
            for path in [["H00", "H01", "H11", "H10"], ["H00", "H10", "H11", "H01"]] {
                let mut cur = Some(p.clone());
                let mut chart = ids[0].clone();
                assert_eq!(chart.name, "H00");
                for next in path.iter().skip(1).chain(std::iter::once(&"H00")) {
                    let to = atlas.find_chart(next).unwrap();
                    cur = cur.and_then(|q| atlas.transition(&chart, &to).unwrap().eval(&q));
                    chart = to;
                }
                if let Some(q) = cur {
                    assert_eq!(q, p);
                }
            }
        }
    }

    #[test]
    fn sigma0_is_a_product() {
        let atlas = StandardAtlas::build(&SurfacePresentation {
            base: MinimalModel::Hirzebruch(0),
            centers: vec![],
        })
        .unwrap();
        let h00 = atlas.find_chart("H00").unwrap();
        let h10 = atlas.find_chart("H10").unwrap();
        // trivial cocycle: the fiber coordinate is unchanged
        let t = atlas.transition(&h00, &h10).unwrap();
        let img = t.eval(&[int(4), int(7)]).unwrap();
        assert_eq!(img, [frac(1, 4), int(7)]);
    }

    #[test]
    fn pushforward_examples() {
        let atlas = StandardAtlas::build(&p2_presentation(&[("S0", 0, 0)])).unwrap();
        assert_eq!(atlas.charts.len(), 5);
        let b1a = atlas.find_chart("B1a").unwrap();
        // exceptional point collapses to the center
        let (c0, p0) = atlas.pushforward(&b1a, &[int(0), int(5)], 0);
        assert_eq!(c0.name, "S0");
        assert_eq!(p0, [int(0), int(0)]);
        // a second exceptional point collapses to the same place
        let (_, p1) = atlas.pushforward(&b1a, &[int(0), int(-2)], 0);
        assert_eq!(p1, p0);
        // points off the exceptional curve transport by substitution
        let (c2, p2) = atlas.pushforward(&b1a, &[int(2), int(3)], 0);
        assert_eq!(c2.name, "S0");
        assert_eq!(p2, [int(2), int(6)]);
    }

    #[test]
    fn pushforward_composes() {
        let sp = SurfacePresentation {
            base: MinimalModel::Plane,
            centers: vec![
                BlowupCenter {
                    level: 1,
                    chart: "S0".into(),
                    coords: [int(0), int(0)],
                },
                BlowupCenter {
                    level: 2,
                    chart: "B1a".into(),
                    coords: [int(0), int(1)],
                },
            ],
        };
        let atlas = StandardAtlas::build(&sp).unwrap();
        let b2a = atlas.find_chart("B2a").unwrap();
        let mut rng = DetRng::new(3);
        for _ in 0..25 {
            let p = [rng.rational(5, 3), rng.rational(5, 3)];
            let via = {
                let (c1, p1) = atlas.pushforward(&b2a, &p, 1);
                atlas.pushforward(&c1, &p1, 0)
            };
            let direct = atlas.pushforward(&b2a, &p, 0);
            assert_eq!(via, direct);
        }
    }

    #[test]
    fn future_center_examples() {
        // one blowup: nothing in the future
        let atlas = StandardAtlas::build(&p2_presentation(&[("S0", 0, 0)])).unwrap();
        let (a1, a2) = future_center_sets(&atlas, 1);
        assert!(a1.is_empty() && a2.is_empty());

        // two distinct level-0 centers
        let atlas =
            StandardAtlas::build(&p2_presentation(&[("S0", 0, 0), ("S0", 1, 1)])).unwrap();
        let (a1, a2) = future_center_sets(&atlas, 1);
        assert_eq!(a1.len(), 1);
        assert!(a2.is_empty());
        assert_eq!(a1[0].1, [int(1), int(1)]);

        // infinitely near second center
        let sp = SurfacePresentation {
            base: MinimalModel::Plane,
            centers: vec![
                BlowupCenter {
                    level: 1,
                    chart: "S0".into(),
                    coords: [int(0), int(0)],
                },
                BlowupCenter {
                    level: 2,
                    chart: "B1a".into(),
                    coords: [int(0), int(1)],
                },
            ],
        };
        let atlas = StandardAtlas::build(&sp).unwrap();
        let (a1, a2) = future_center_sets(&atlas, 1);
        assert!(a1.is_empty());
        assert_eq!(a2.len(), 1);
        assert_eq!(a2[0].0.name, "B1a");
        assert_eq!(a2[0].1, [int(0), int(1)]);
    }

    #[test]
    fn future_centers_account_for_everything() {
        let sp = p2_presentation(&[("S0", 0, 0), ("S0", 1, 1), ("S1", 2, 3), ("S0", -1, 4)]);
        let atlas = StandardAtlas::build(&sp).unwrap();
        for i in 1..=4usize {
            let (a1, a2) = future_center_sets(&atlas, i);
            assert_eq!(a1.len() + a2.len(), 4 - i);
        }
    }

    #[test]
    fn exceptional_traces_follow_the_tower() {
        let sp = SurfacePresentation {
            base: MinimalModel::Plane,
            centers: vec![
                BlowupCenter {
                    level: 1,
                    chart: "S0".into(),
                    coords: [int(0), int(0)],
                },
                BlowupCenter {
                    level: 2,
                    chart: "B1a".into(),
                    coords: [int(0), int(0)],
                },
            ],
        };
        let atlas = StandardAtlas::build(&sp).unwrap();
        let e1 = &atlas.exceptional[0];
        assert!(e1.trace_in(&atlas.find_chart("B1a").unwrap()).is_some());
        // E1 is u = 0 through the second center: vertical direction, so its
        // strict transform shows up in B2b only
        let b2a = atlas.find_chart("B2a").unwrap();
        let b2b = atlas.find_chart("B2b").unwrap();
        assert!(e1.trace_in(&b2a).is_none());
        let tr = e1.trace_in(&b2b).unwrap();
        assert_eq!(tr, &Poly::var(2, 1));
        // removed points recorded: the level-2 center is gone from B1a
        let b1a = atlas.find_chart("B1a").unwrap();
        let removed = atlas.removed.get(&b1a).unwrap();
        assert!(removed.iter().any(|(l, p)| *l == 2 && p == &[int(0), int(0)]));
        assert!(!atlas.point_is_alive(&b1a, &[int(0), int(0)]));
        assert!(atlas.point_is_alive(&b1a, &[int(0), int(1)]));
    }
}
