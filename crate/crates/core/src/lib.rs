//! Exact construction of three affine-plane charts covering a smooth
//! projective rational surface given as a blowup tower over the projective
//! plane or a Hirzebruch surface, together with a machine-checkable
//! certificate that the three charts really cover.
//!
//! All arithmetic is exact over the rationals. Emptiness of algebraic sets
//! is decided over the complex numbers through Groebner bases.

pub mod algebra;
pub mod builder;
pub mod geometry;
pub mod report;
pub mod rng;
pub mod surface;
pub mod verifier;

pub use algebra::{
    groebner_basis, ideal_is_trivial, parse_poly, poly_gcd, resultant, squarefree_part, Poly,
    RatFun, Scalar,
};
pub use builder::{
    base_cover_hirzebruch, base_cover_p2, blowup_chart, construct_cover, inductive_step,
    replay_cover, AuditEntry, BuildError, Chart, ChoiceConfig, TriCover,
};
pub use verifier::{
    complement_traces, replay_certificate, sample_coverage, verify_emptiness,
    verify_pairwise_finite, verify_transitions, CoverageCertificate, EmptinessOutcome,
};
pub use surface::{
    future_center_sets, parse_presentation, validate_presentation, BlowupCenter, MinimalModel,
    PresentationError, StandardAtlas, SurfacePresentation,
};
pub use geometry::{
    proper_transform, tangent_direction, AffLine, ChartId, CurveRecord, GeometryError, Ideal,
    MobiusMap, Point2, ProjPoint, RationalMap2, ZeroDimSet,
};
