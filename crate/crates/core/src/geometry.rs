//! Charts, rational maps between charts, affine lines, Moebius maps, proper
//! transforms, and finite algebraic point sets.
//!
//! A point of the surface is always carried as (chart, exact coordinates).
//! Finite point sets that may contain irrational points are never
//! enumerated; they stay encoded as bivariate ideals in the chart where they
//! were born and all tests against them go through Groebner bases.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    groebner_basis, ideal_is_trivial, poly_gcd, resultant, AlgebraError, Poly, RatFun, Scalar,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("line must pass through the given point")]
    LineMissesPoint,
    #[error("equation must have total degree exactly 1")]
    NotALine,
    #[error("curve is singular at the point (both partials vanish)")]
    SingularPoint,
    #[error("invalid homogeneous pair (0 : 0)")]
    InvalidProjectivePoint,
    #[error("component in chart {0} cannot be transported to chart {1}")]
    NotTransportable(String, String),
    #[error("map composition mismatched charts: {0} vs {1}")]
    ChartMismatch(String, String),
    #[error("blowup map must be polynomial")]
    NonPolynomialBlowup,
    #[error("Moebius map must have nonzero determinant")]
    DegenerateMobius,
}

/// Identifies a chart: the tower level where it first exists plus a symbolic
/// name unique within the run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChartId {
    pub level: usize,
    pub name: String,
}

impl ChartId {
    pub fn new(level: usize, name: impl Into<String>) -> Self {
        ChartId {
            level,
            name: name.into(),
        }
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

pub type Point2 = [Scalar; 2];

/// Point of the projective line as an exact homogeneous pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint(pub Scalar, pub Scalar);

impl ProjPoint {
    pub fn finite(z: Scalar) -> Self {
        ProjPoint(z, Scalar::from_integer(1.into()))
    }

    pub fn infinity() -> Self {
        ProjPoint(Scalar::from_integer(1.into()), Scalar::zero())
    }

    pub fn same(&self, other: &ProjPoint) -> bool {
        (&self.0 * &other.1 - &self.1 * &other.0).is_zero()
    }
}

/// Rational map between two charts, given by a reduced fraction per target
/// coordinate in the source coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap2 {
    pub source: ChartId,
    pub target: ChartId,
    pub components: [RatFun; 2],
}

impl RationalMap2 {
    pub fn new(source: ChartId, target: ChartId, x: RatFun, y: RatFun) -> Self {
        RationalMap2 {
            source,
            target,
            components: [x, y],
        }
    }

    pub fn identity(chart: ChartId) -> Self {
        RationalMap2 {
            source: chart.clone(),
            target: chart,
            components: [RatFun::var(2, 0), RatFun::var(2, 1)],
        }
    }

    /// Exact image point, or None when a reduced denominator vanishes.
    pub fn eval(&self, p: &Point2) -> Option<Point2> {
        let x = self.components[0].eval(p).ok()??;
        let y = self.components[1].eval(p).ok()??;
        Some([x, y])
    }

    /// g after f (this = g): source of f, target of g. Components are
    /// reduced; a composition indeterminate everywhere is an error.
    pub fn compose(&self, f: &RationalMap2) -> Result<RationalMap2, GeometryError> {
        if f.target != self.source {
            return Err(GeometryError::ChartMismatch(
                f.target.name.clone(),
                self.source.name.clone(),
            ));
        }
        let x = self.components[0].compose(&f.components)?;
        let y = self.components[1].compose(&f.components)?;
        Ok(RationalMap2 {
            source: f.source.clone(),
            target: self.target.clone(),
            components: [x, y],
        })
    }

    /// Jacobian matrix evaluated at a point where the map is defined.
    pub fn jacobian_at(&self, p: &Point2) -> Option<[[Scalar; 2]; 2]> {
        let mut out = [
            [Scalar::zero(), Scalar::zero()],
            [Scalar::zero(), Scalar::zero()],
        ];
        for (i, comp) in self.components.iter().enumerate() {
            for j in 0..2 {
                out[i][j] = comp.partial(j).eval(p).ok()??;
            }
        }
        Some(out)
    }
}

/// Affine line in a chart: a polynomial of total degree exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffLine {
    pub chart: ChartId,
    pub equation: Poly,
}

impl AffLine {
    pub fn new(chart: ChartId, equation: Poly) -> Result<Self, GeometryError> {
        if equation.total_degree() != Some(1) {
            return Err(GeometryError::NotALine);
        }
        Ok(AffLine {
            chart,
            equation: equation.normalized(),
        })
    }

    /// Line through p with direction (dx, dy).
    pub fn through(
        chart: ChartId,
        p: &Point2,
        dir: &(Scalar, Scalar),
    ) -> Result<Self, GeometryError> {
        // dy*(x - px) - dx*(y - py)
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let eq = &(&x - &Poly::constant(2, p[0].clone())).scale(&dir.1)
            - &(&y - &Poly::constant(2, p[1].clone())).scale(&dir.0);
        AffLine::new(chart, eq)
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.equation.eval(p).map(|v| v.is_zero()).unwrap_or(false)
    }

    /// Direction vector of the line, as a normalized projective pair.
    pub fn direction(&self) -> (Scalar, Scalar) {
        let gx = self.equation.partial(0).constant_value().unwrap();
        let gy = self.equation.partial(1).constant_value().unwrap();
        normalize_direction(&(-gy, gx))
    }
}

/// Scales a nonzero rational pair to coprime integers with the first nonzero
/// entry positive, so directions compare by equality.
pub fn normalize_direction(d: &(Scalar, Scalar)) -> (Scalar, Scalar) {
    use num_integer::Integer;
    assert!(!d.0.is_zero() || !d.1.is_zero());
    let mut num_gcd = num_bigint::BigInt::from(0);
    let mut den_lcm = num_bigint::BigInt::from(1);
    for s in [&d.0, &d.1] {
        if !s.is_zero() {
            num_gcd = num_gcd.gcd(s.numer());
            den_lcm = den_lcm.lcm(s.denom());
        }
    }
    let mut c = Scalar::new(num_gcd, den_lcm);
    let first = if d.0.is_zero() { &d.1 } else { &d.0 };
    if first.is_negative() {
        c = -c;
    }
    (&d.0 / &c, &d.1 / &c)
}

pub fn same_direction(a: &(Scalar, Scalar), b: &(Scalar, Scalar)) -> bool {
    (&a.0 * &b.1 - &a.1 * &b.0).is_zero()
}

/// Moebius transformation z -> (a z + b) / (c z + d) on the projective line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusMap {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl MobiusMap {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self, GeometryError> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(GeometryError::DegenerateMobius);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: Scalar::from_integer(1.into()),
            b: Scalar::zero(),
            c: Scalar::zero(),
            d: Scalar::from_integer(1.into()),
        }
    }

    /// The canonical map sending P to infinity: identity for P = infinity,
    /// z -> 1/(z - p) for finite P = p.
    pub fn to_infinity(p: &ProjPoint) -> Result<Self, GeometryError> {
        if p.0.is_zero() && p.1.is_zero() {
            return Err(GeometryError::InvalidProjectivePoint);
        }
        if p.1.is_zero() {
            return Ok(MobiusMap::identity());
        }
        let val = &p.0 / &p.1;
        MobiusMap::new(
            Scalar::zero(),
            Scalar::from_integer(1.into()),
            Scalar::from_integer(1.into()),
            -val,
        )
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint(
            &self.a * &p.0 + &self.b * &p.1,
            &self.c * &p.0 + &self.d * &p.1,
        )
    }

    pub fn determinant(&self) -> Scalar {
        &self.a * &self.d - &self.b * &self.c
    }
}

/// Bivariate ideal attached to the chart its generators live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    pub chart: ChartId,
    pub generators: Vec<Poly>,
}

impl Ideal {
    pub fn new(chart: ChartId, generators: Vec<Poly>) -> Self {
        assert!(!generators.is_empty());
        assert!(generators.iter().all(|g| g.vars() == 2));
        Ideal { chart, generators }
    }

    pub fn groebner(&self) -> Ideal {
        Ideal {
            chart: self.chart.clone(),
            generators: groebner_basis(&self.generators),
        }
    }

    pub fn is_trivial(&self) -> bool {
        ideal_is_trivial(&self.generators)
    }

    /// The variety is finite when two generators are coprime or when
    /// elimination by resultants produces a nonzero univariate polynomial in
    /// each variable.
    pub fn cuts_finite_set(&self) -> bool {
        if self.is_trivial() {
            return true;
        }
        let gens = &self.generators;
        for i in 0..gens.len() {
            for j in 0..i {
                if !poly_gcd(&gens[i], &gens[j]).is_constant() {
                    continue;
                }
                let mut univariate_in = [false, false];
                for var in 0..2 {
                    let elim = 1 - var;
                    // a generator of degree zero in the eliminated variable
                    // is itself a nonzero element of Q[var]
                    if [&gens[i], &gens[j]]
                        .iter()
                        .any(|g| !g.is_zero() && g.deg_in(elim) == 0)
                    {
                        univariate_in[var] = true;
                        continue;
                    }
                    if let Ok(r) = resultant(&gens[i], &gens[j], elim) {
                        univariate_in[var] = !r.is_zero();
                    }
                }
                if univariate_in[0] && univariate_in[1] {
                    return true;
                }
            }
        }
        false
    }
}

/// Finite algebraic point set: explicit rational points plus ideal-encoded
/// components, each remembering its birth chart.
#[derive(Debug, Clone, Default)]
pub struct ZeroDimSet {
    pub points: Vec<(ChartId, Point2)>,
    pub components: Vec<Ideal>,
}

impl ZeroDimSet {
    pub fn empty() -> Self {
        ZeroDimSet::default()
    }

    pub fn from_points(points: Vec<(ChartId, Point2)>) -> Self {
        ZeroDimSet {
            points,
            components: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.components.is_empty()
    }

    pub fn push_point(&mut self, chart: ChartId, p: Point2) {
        if !self
            .points
            .iter()
            .any(|(c, q)| *c == chart && q == &p)
        {
            self.points.push((chart, p));
        }
    }

    /// True when some point of the set lies on the curve c = 0. The curve is
    /// transported into each component's chart through the supplied
    /// transition lookup; components whose chart admits no transition are an
    /// error, not a guess.
    pub fn meets_curve(
        &self,
        c: &Poly,
        chart: &ChartId,
        transition: &dyn Fn(&ChartId, &ChartId) -> Option<RationalMap2>,
    ) -> Result<bool, GeometryError> {
        for (pc, p) in &self.points {
            let value = if pc == chart {
                c.eval(p).map_err(GeometryError::from)?
            } else {
                let t = transition(pc, chart).ok_or_else(|| {
                    GeometryError::NotTransportable(pc.name.clone(), chart.name.clone())
                })?;
                match t.eval(p) {
                    Some(img) => c.eval(&img).map_err(GeometryError::from)?,
                    None => continue, // point invisible in the curve's chart
                }
            };
            if value.is_zero() {
                return Ok(true);
            }
        }
        for comp in &self.components {
            let local = if comp.chart == *chart {
                c.clone()
            } else {
                // express the curve in the component's chart coordinates
                let t = transition(&comp.chart, chart).ok_or_else(|| {
                    GeometryError::NotTransportable(comp.chart.name.clone(), chart.name.clone())
                })?;
                let f = RatFun::from_poly(c.clone()).compose(&t.components)?;
                f.num().clone()
            };
            let mut gens = comp.generators.clone();
            gens.push(local);
            if !ideal_is_trivial(&gens) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Trace table of one irreducible curve: its defining polynomial in every
/// standard chart that meets it. A missing entry means the curve avoids that
/// chart entirely (the trace there is the empty product 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub label: String,
    pub traces: BTreeMap<ChartId, Poly>,
}

impl CurveRecord {
    pub fn new(label: impl Into<String>) -> Self {
        CurveRecord {
            label: label.into(),
            traces: BTreeMap::new(),
        }
    }

    pub fn set_trace(&mut self, chart: ChartId, trace: Poly) {
        if trace.is_constant() {
            return; // invisible in this chart
        }
        self.traces.insert(chart, trace.normalized());
    }

    pub fn trace_in(&self, chart: &ChartId) -> Option<&Poly> {
        self.traces.get(chart)
    }

    /// Exact evaluation of the trace at a point of the chart; invisible
    /// components evaluate to 1.
    pub fn eval_in(&self, chart: &ChartId, p: &Point2) -> Result<Scalar, GeometryError> {
        match self.traces.get(chart) {
            Some(t) => Ok(t.eval(p)?),
            None => Ok(Scalar::from_integer(1.into())),
        }
    }
}

/// Pull the curve back along a polynomial blowup map and divide out the
/// exceptional coordinate (the first variable) exactly as often as it
/// divides. Returns the proper transform and the extracted multiplicity.
pub fn proper_transform_with_mult(
    curve: &Poly,
    blowup: &RationalMap2,
) -> Result<(Poly, u32), GeometryError> {
    if curve.is_zero() {
        return Err(GeometryError::Algebra(AlgebraError::ZeroPolynomial));
    }
    let comps: Vec<Poly> = blowup
        .components
        .iter()
        .map(|c| {
            if c.den().is_constant() {
                let d = c.den().constant_value().unwrap();
                Ok(c.num().scale(&d.recip()))
            } else {
                Err(GeometryError::NonPolynomialBlowup)
            }
        })
        .collect::<Result<_, _>>()?;
    let mut total = curve.subst(&comps);
    let u = Poly::var(2, 0);
    let mut mult = 0;
    while let Some(q) = total.div_exact(&u) {
        total = q;
        mult += 1;
    }
    Ok((total.normalized(), mult))
}

pub fn proper_transform(curve: &Poly, blowup: &RationalMap2) -> Result<Poly, GeometryError> {
    proper_transform_with_mult(curve, blowup).map(|(p, _)| p)
}

/// Tangent direction of a curve at a smooth point of it, as a normalized
/// projective pair (-df/dy, df/dx).
pub fn tangent_direction(curve: &Poly, p: &Point2) -> Result<(Scalar, Scalar), GeometryError> {
    let gx = curve.partial(0).eval(p)?;
    let gy = curve.partial(1).eval(p)?;
    if gx.is_zero() && gy.is_zero() {
        return Err(GeometryError::SingularPoint);
    }
    Ok(normalize_direction(&(-gy, gx)))
}
