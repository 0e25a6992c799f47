//! Spacelike curves with timelike binormal in Minkowski 3-space E³₁.
//!
//! The crate covers the Lorentzian vector algebra of E³₁, Frenet frames and
//! Darboux data of spacelike curves, their involutes, the spherical
//! indicatrices of those involutes on the de Sitter plane S²₁ and the
//! hyperbolic plane H²₀, natural lifts to the tangent bundle, and the
//! geodesic spray used to decide whether a lift is an integral curve.

pub mod curve;
pub mod diff;
pub mod error;
pub mod expr;
pub mod frenet;
pub mod indicatrix;
pub mod involute;
pub mod lorentz;
pub mod ode;
pub mod par;

pub use curve::{
    arclength_reparametrize, nonhelix_control, prescribed_curvature, unit_speed_check, w_curve_circle,
    w_curve_circular_helix, w_curve_exists, w_curve_hyperbolic_helix, worked_example, CurveMap, DerivativeMode,
    Domain, ExprCurve, ParametricCurve,
};
pub use error::{GeomError, Result};
pub use expr::{Expr, ParseError};
pub use frenet::{darboux, frenet_apparatus, frenet_residuals, is_general_helix, DarbouxCase, DarbouxData, FrenetApparatus, HelixVerdict};
pub use indicatrix::{
    geodesic_curvatures, geodesic_residual, geodesic_spray, indicatrix, integrate_spray, lift_integral_check,
    natural_lift, verdict_binormal_lift, verdict_normal_lift, verdict_tangent_lift, GeodesicCurvatures,
    GeodesicVerdict, IndicatrixCurve, IndicatrixKind, SphericalCurve, TangentBundlePoint, VerdictConfig,
};
pub use involute::{
    involute, involute_causal_signature, involute_frame_transfer, involute_frenet_numeric, InvoluteCurve,
    InvoluteFrame, OffsetConvention,
};
pub use lorentz::{
    causal_character, lorentz_angle, lorentz_cross, minkowski_inner, pseudo_norm, sphere_membership, AngleKind,
    AngleResult, CausalCharacter, Sphere, SphereMembership, Vec3,
};
