use thiserror::Error;

use crate::expr::ParseError;
use crate::lorentz::CausalCharacter;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("null or zero vector where a non-null vector is required")]
    NullInput,
    #[error("vectors are linearly dependent")]
    DependentInput,
    #[error("parameter s = {s} is outside the domain [{min}, {max}]")]
    OutOfDomain { s: f64, min: f64, max: f64 },
    #[error("finite-difference stencil of reach {reach} at s = {s} leaves the domain (margin {margin})")]
    StepTooLarge { s: f64, margin: f64, reach: f64 },
    #[error("curve is not spacelike at s = {s} (g(α′, α′) = {q})")]
    NotSpacelike { s: f64, q: f64 },
    #[error("curvature vanishes at s = {s} (κ = {kappa})")]
    VanishingCurvature { s: f64, kappa: f64 },
    #[error("frame at s = {s} is outside the spacelike/timelike-binormal class: {detail}")]
    WrongCausalType { s: f64, detail: String },
    #[error("Darboux vector is null at s = {s}: |κ| = |τ| (κ = {kappa}, τ = {tau})")]
    NullDarboux { s: f64, kappa: f64, tau: f64 },
    #[error("no spacelike W-curve with timelike binormal has |τ| = |κ| (κ = {kappa}, τ = {tau})")]
    EqualCurvatures { kappa: f64, tau: f64 },
    #[error("curvatures κ = {kappa}, τ = {tau} violate the generator's case: {detail}")]
    CaseViolation { kappa: f64, tau: f64, detail: String },
    #[error("involute is singular at s = {s} (c = {c})")]
    SingularParameter { s: f64, c: f64 },
    #[error("transferred involute frame is inconsistent: {detail}")]
    FrameInconsistent { detail: String },
    #[error("curve has degenerate speed at s = {s}")]
    DegenerateSpeed { s: f64 },
    #[error("curve has a null tangent at s = {s}")]
    NullTangent { s: f64 },
    #[error("tangent-bundle point violates its invariants: {detail}")]
    InvariantViolation { detail: String },
    #[error("spray trajectory left the sphere at s = {s} (defect {defect:e})")]
    DriftExceeded { s: f64, defect: f64 },
    #[error("Darboux case changes along the curve ({first} at s = {s0}, {second} at s = {s1})")]
    MixedDarbouxCase {
        first: CausalCharacter,
        second: CausalCharacter,
        s0: f64,
        s1: f64,
    },
    #[error("non-finite value encountered at s = {s}")]
    NonFinite { s: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Expr(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, GeomError>;
