//! Spherical indicatrices of involutes, natural lifts to the tangent bundle
//! of S²₁ / H²₀, the geodesic spray, and geodesic verdicts.
//!
//! On both model spheres the position vector is the unit normal and the shape
//! operator is `S(v) = −v`, so the spray is `X(v) = −ε g(v, v)·base` with
//! `ε = g(base, base)`. Its integral curves solve `β″ = −ε g(β′, β′) β`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::ParametricCurve;
use crate::diff;
use crate::error::{GeomError, Result};
use crate::frenet::{darboux, frenet_apparatus, is_general_helix_with, DarbouxCase, HelixVerdict};
use crate::involute::{involute_frame_transfer, InvoluteCurve};
use crate::lorentz::{minkowski_inner, Sphere, Vec3};
use crate::ode;
use crate::par;

/// Tolerance for sphere membership and tangency of tangent-bundle points.
pub const BUNDLE_TOL: f64 = 1e-8;

/// Point of T(S²₁) or T(H²₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentBundlePoint {
    pub base: Vec3,
    pub vector: Vec3,
    pub sphere: Sphere,
}

impl TangentBundlePoint {
    /// Checked constructor: `base` on the sphere and `vector` g-orthogonal to it,
    /// both within `BUNDLE_TOL` (scaled by the Euclidean magnitudes involved).
    pub fn new(base: Vec3, vector: Vec3, sphere: Sphere) -> Result<Self> {
        Self::with_tolerance(base, vector, sphere, BUNDLE_TOL)
    }

    pub fn with_tolerance(base: Vec3, vector: Vec3, sphere: Sphere, tol: f64) -> Result<Self> {
        let p = Self { base, vector, sphere };
        p.validate(tol)?;
        Ok(p)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if !(self.base.is_finite() && self.vector.is_finite()) {
            return Err(GeomError::InvariantViolation { detail: "non-finite component".into() });
        }
        let defect = self.membership_defect();
        if defect > tol * self.base.euclidean_norm_sq().max(1.0) {
            return Err(GeomError::InvariantViolation {
                detail: format!("base {} is off {} by {defect:e}", self.base, self.sphere),
            });
        }
        let tangency = minkowski_inner(self.base, self.vector).abs();
        let scale = (self.base.euclidean_norm() * self.vector.euclidean_norm()).max(1.0);
        if tangency > tol * scale {
            return Err(GeomError::InvariantViolation {
                detail: format!("vector {} is not tangent at {} (g = {tangency:e})", self.vector, self.base),
            });
        }
        Ok(())
    }

    /// `|g(base, base) − ε|`.
    pub fn membership_defect(&self) -> f64 {
        (minkowski_inner(self.base, self.base) - self.sphere.epsilon()).abs()
    }

    /// Membership defect relative to `max(1, |base|²)`, the rounding scale of `g`.
    pub fn relative_membership_defect(&self) -> f64 {
        self.membership_defect() / self.base.euclidean_norm_sq().max(1.0)
    }

    /// The attached vector is zero (up to rounding), as for a constant indicatrix.
    pub fn is_degenerate(&self) -> bool {
        self.vector.euclidean_norm() <= 1e-12 * self.base.euclidean_norm().max(1.0)
    }
}

/// Spray acceleration `−ε g(v, v)·base`.
pub fn geodesic_spray(v: &TangentBundlePoint) -> Result<Vec3> {
    v.validate(BUNDLE_TOL)?;
    Ok(spray(v.sphere, v.base, v.vector))
}

fn spray(sphere: Sphere, base: Vec3, vector: Vec3) -> Vec3 {
    base * (-sphere.epsilon() * minkowski_inner(vector, vector))
}

/// Curve on one of the model spheres with first and second derivatives.
pub trait SphericalCurve: Sync {
    fn sphere(&self) -> Sphere;
    fn point(&self, s: f64) -> Result<Vec3>;
    fn velocity(&self, s: f64) -> Result<Vec3>;
    fn acceleration(&self, s: f64) -> Result<Vec3>;
    /// Speeds below this count as degenerate.
    fn speed_floor(&self) -> f64;
}

/// A parametric curve declared to lie on a model sphere.
#[derive(Debug, Clone)]
pub struct SphereCurve {
    pub curve: ParametricCurve,
    pub sphere: Sphere,
}

impl SphericalCurve for SphereCurve {
    fn sphere(&self) -> Sphere {
        self.sphere
    }

    fn point(&self, s: f64) -> Result<Vec3> {
        self.curve.point(s)
    }

    fn velocity(&self, s: f64) -> Result<Vec3> {
        self.curve.derivative(s, 1)
    }

    fn acceleration(&self, s: f64) -> Result<Vec3> {
        self.curve.derivative(s, 2)
    }

    fn speed_floor(&self) -> f64 {
        if self.curve.mode().is_closed() {
            1e-10
        } else {
            1e-6
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndicatrixKind {
    Tangent,
    PrincipalNormal,
    Binormal,
}

impl IndicatrixKind {
    pub const ALL: [IndicatrixKind; 3] = [IndicatrixKind::Tangent, IndicatrixKind::PrincipalNormal, IndicatrixKind::Binormal];

    /// Model sphere carrying this indicatrix in the given Darboux case.
    pub fn sphere(self, case: DarbouxCase) -> Sphere {
        match (self, case) {
            (IndicatrixKind::Tangent, _) => Sphere::S12,
            (IndicatrixKind::PrincipalNormal, DarbouxCase::SpacelikeOmega) => Sphere::H02,
            (IndicatrixKind::PrincipalNormal, DarbouxCase::TimelikeOmega) => Sphere::S12,
            (IndicatrixKind::Binormal, DarbouxCase::SpacelikeOmega) => Sphere::S12,
            (IndicatrixKind::Binormal, DarbouxCase::TimelikeOmega) => Sphere::H02,
        }
    }
}

impl fmt::Display for IndicatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndicatrixKind::Tangent => "tangent",
            IndicatrixKind::PrincipalNormal => "normal",
            IndicatrixKind::Binormal => "binormal",
        })
    }
}

impl std::str::FromStr for IndicatrixKind {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tangent" | "t" => Ok(IndicatrixKind::Tangent),
            "normal" | "principal_normal" | "principal-normal" | "n" => Ok(IndicatrixKind::PrincipalNormal),
            "binormal" | "b" => Ok(IndicatrixKind::Binormal),
            other => Err(GeomError::InvalidArgument(format!("unknown indicatrix kind '{other}'"))),
        }
    }
}

/// Involute frame vector `t*`, `n*` or `b*` translated to the origin.
///
/// Frames come from the evolute through [`involute_frame_transfer`], so the
/// indicatrix is defined wherever the evolute's Darboux data are; the
/// optional guard excludes the band around the involute's singular point.
#[derive(Debug, Clone)]
pub struct IndicatrixCurve {
    kind: IndicatrixKind,
    sphere: Sphere,
    case: DarbouxCase,
    evolute: ParametricCurve,
    guard: Option<(f64, f64)>,
    /// Largest `|t|²_E` of the evolute: Minkowski normalization of boosted
    /// frames loses digits in proportion to it.
    boost: f64,
}

/// Darboux case shared by all interior samples of the evolute.
pub fn uniform_case(evolute: &ParametricCurve, n_samples: usize) -> Result<DarbouxCase> {
    let samples = evolute.interior_samples(n_samples.max(2))?;
    let cases = par::map(&samples, true, |s| frenet_apparatus(evolute, s).and_then(|f| darboux(&f)).map(|d| (s, d.case)));
    let mut first: Option<(f64, DarbouxCase)> = None;
    for item in cases {
        let (s, case) = item?;
        match first {
            None => first = Some((s, case)),
            Some((s0, c0)) if c0 != case => {
                return Err(GeomError::MixedDarbouxCase {
                    first: c0.omega_character(),
                    second: case.omega_character(),
                    s0,
                    s1: s,
                })
            }
            _ => {}
        }
    }
    Ok(first.expect("at least two samples").1)
}

const CASE_SAMPLES: usize = 64;

/// Indicatrix of the given kind for the involute `inv`.
pub fn indicatrix(inv: &InvoluteCurve, kind: IndicatrixKind) -> Result<IndicatrixCurve> {
    let mut c = IndicatrixCurve::of_evolute(inv.evolute(), kind)?;
    c.guard = Some((inv.c(), inv.guard()));
    Ok(c)
}

impl IndicatrixCurve {
    /// Indicatrix built from the evolute alone (no involute constant, no guard).
    ///
    /// The involute's frame does not depend on `c`, so this is the same curve
    /// as [`indicatrix`] away from `s = c`.
    pub fn of_evolute(evolute: &ParametricCurve, kind: IndicatrixKind) -> Result<Self> {
        let case = uniform_case(evolute, CASE_SAMPLES)?;
        let mut boost = 1.0f64;
        for s in evolute.interior_samples(CASE_SAMPLES)? {
            boost = boost.max(evolute.derivative(s, 1)?.euclidean_norm_sq());
        }
        Ok(Self { kind, sphere: kind.sphere(case), case, evolute: evolute.clone(), guard: None, boost })
    }

    pub fn kind(&self) -> IndicatrixKind {
        self.kind
    }

    pub fn case(&self) -> DarbouxCase {
        self.case
    }

    pub fn evolute(&self) -> &ParametricCurve {
        &self.evolute
    }

    /// `(c, half-width)` of the excluded band, if any.
    pub fn guard(&self) -> Option<(f64, f64)> {
        self.guard
    }

    pub fn in_guard(&self, s: f64) -> bool {
        self.guard.is_some_and(|(c, w)| (s - c).abs() <= w)
    }

    fn eval(&self, s: f64) -> Result<Vec3> {
        let fr = frenet_apparatus(&self.evolute, s)?;
        let dd = darboux(&fr)?;
        if dd.case != self.case {
            return Err(GeomError::MixedDarbouxCase {
                first: self.case.omega_character(),
                second: dd.case.omega_character(),
                s0: f64::NAN,
                s1: s,
            });
        }
        let f = involute_frame_transfer(&fr, &dd)?;
        Ok(match self.kind {
            IndicatrixKind::Tangent => f.t_star,
            IndicatrixKind::PrincipalNormal => f.n_star,
            IndicatrixKind::Binormal => f.b_star,
        })
    }

    fn check(&self, s: f64) -> Result<()> {
        match self.guard {
            Some((c, _)) if self.in_guard(s) => Err(GeomError::SingularParameter { s, c }),
            _ => Ok(()),
        }
    }
}

impl SphericalCurve for IndicatrixCurve {
    fn sphere(&self) -> Sphere {
        self.sphere
    }

    fn point(&self, s: f64) -> Result<Vec3> {
        self.check(s)?;
        self.eval(s)
    }

    fn velocity(&self, s: f64) -> Result<Vec3> {
        self.check(s)?;
        diff::first(|x| self.eval(x), s, self.evolute.field_steps().first)
    }

    fn acceleration(&self, s: f64) -> Result<Vec3> {
        self.check(s)?;
        diff::second(|x| self.eval(x), s, self.evolute.field_steps().second)
    }

    fn speed_floor(&self) -> f64 {
        let base = if self.evolute.mode().is_closed() { 1e-9 } else { 1e-5 };
        base * self.boost
    }
}

/// `(c(s), c′(s))` as a tangent-bundle point.
///
/// The tangency check is relative to the curve's accuracy: closed-form
/// frames are held to `BUNDLE_TOL`, difference-based frames to `1e-5`.
pub fn natural_lift(c: &dyn SphericalCurve, s: f64) -> Result<TangentBundlePoint> {
    let base = c.point(s)?;
    let vector = c.velocity(s)?;
    let tol = if c.speed_floor() <= 1e-6 { BUNDLE_TOL } else { 1e-5 };
    TangentBundlePoint::with_tolerance(base, vector, c.sphere(), tol)
}

/// Reparametrization-invariant geodesic defect of `c` at `s`.
///
/// The acceleration loses its component along the unit normal `ξ = c(s)`
/// and then its component along `c′(s)`; what remains, divided by
/// `|g(c′, c′)|`, is the geodesic curvature of the trace.
pub fn geodesic_residual(c: &dyn SphericalCurve, s: f64) -> Result<f64> {
    let p = c.point(s)?;
    let v = c.velocity(s)?;
    let a = c.acceleration(s)?;
    let speed = v.euclidean_norm();
    if speed <= c.speed_floor() * p.euclidean_norm().max(1.0) {
        return Err(GeomError::DegenerateSpeed { s });
    }
    let vv = minkowski_inner(v, v);
    if vv.abs() <= 1e-9 * speed * speed {
        return Err(GeomError::NullTangent { s });
    }
    let eps = c.sphere().epsilon();
    let tangential = a - p * (eps * minkowski_inner(a, p));
    let rem = tangential - v * (minkowski_inner(tangential, v) / vv);
    Ok(rem.euclidean_norm() / vv.abs())
}

/// Trajectory of [`integrate_spray`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SprayTrajectory {
    pub step: f64,
    pub points: Vec<TangentBundlePoint>,
    /// Largest `|g(base, base) − ε| / max(1, |base|²)` along the trajectory.
    pub max_membership_defect: f64,
    /// Largest `|g(v, v) − g(v₀, v₀)|` along the trajectory.
    pub max_speed_drift: f64,
}

/// Largest membership defect tolerated during spray integration.
pub const DRIFT_LIMIT: f64 = 1e-5;

/// Integrate `base″ = −ε g(base′, base′) base` from `v0` over a parameter
/// span of length `s_end` (negative runs backwards) with `n_steps` RK4 steps.
///
/// Points are not projected back to the sphere; drift is measured and
/// reported, and exceeding `DRIFT_LIMIT` is an error.
pub fn integrate_spray(v0: &TangentBundlePoint, s_end: f64, n_steps: usize) -> Result<SprayTrajectory> {
    v0.validate(BUNDLE_TOL)?;
    if n_steps == 0 || !s_end.is_finite() {
        return Err(GeomError::InvalidArgument("integrate_spray needs n_steps ≥ 1 and a finite end".into()));
    }
    let sphere = v0.sphere;
    let rhs = |_: f64, y: &ode::State<6>| {
        let base = Vec3::new(y[0], y[1], y[2]);
        let vel = Vec3::new(y[3], y[4], y[5]);
        let acc = spray(sphere, base, vel);
        [vel.x1, vel.x2, vel.x3, acc.x1, acc.x2, acc.x3]
    };
    let h = s_end / n_steps as f64;
    let energy0 = minkowski_inner(v0.vector, v0.vector);
    let mut y = [v0.base.x1, v0.base.x2, v0.base.x3, v0.vector.x1, v0.vector.x2, v0.vector.x3];
    let mut points = Vec::with_capacity(n_steps + 1);
    points.push(*v0);
    let (mut max_def, mut max_drift) = (0.0f64, 0.0f64);
    for i in 1..=n_steps {
        y = ode::rk4_step(&rhs, (i - 1) as f64 * h, &y, h);
        let p = TangentBundlePoint {
            base: Vec3::new(y[0], y[1], y[2]),
            vector: Vec3::new(y[3], y[4], y[5]),
            sphere,
        };
        if !(p.base.is_finite() && p.vector.is_finite()) {
            return Err(GeomError::NonFinite { s: i as f64 * h });
        }
        let defect = p.relative_membership_defect();
        if defect > DRIFT_LIMIT {
            return Err(GeomError::DriftExceeded { s: i as f64 * h, defect });
        }
        max_def = max_def.max(defect);
        max_drift = max_drift.max((minkowski_inner(p.vector, p.vector) - energy0).abs());
        points.push(p);
    }
    Ok(SprayTrajectory { step: h, points, max_membership_defect: max_def, max_speed_drift: max_drift })
}

/// Outcome of [`lift_integral_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftCheck {
    pub is_integral_curve: bool,
    /// `max |β(s) − c(s)|_E / max(1, |c(s)|_E)` over the integration grid.
    pub deviation: f64,
    pub steps: usize,
}

/// Integrate the spray from the natural lift at `start` over `[start, end]`
/// and compare with the curve itself.
pub fn lift_integral_check(c: &dyn SphericalCurve, start: f64, end: f64, tol: f64, n_steps: usize) -> Result<LiftCheck> {
    let v0 = natural_lift(c, start)?;
    if v0.vector.euclidean_norm() <= c.speed_floor() * v0.base.euclidean_norm().max(1.0) {
        return Err(GeomError::DegenerateSpeed { s: start });
    }
    // The lift was validated at the curve's own tolerance; the spray re-checks at
    // the strict one, so hand it the g-orthogonal part of the vector.
    let eps = c.sphere().epsilon();
    let v0 = TangentBundlePoint {
        vector: v0.vector - v0.base * (eps * minkowski_inner(v0.vector, v0.base)),
        ..v0
    };
    let traj = integrate_spray(&v0, end - start, n_steps)?;
    let mut deviation = 0.0f64;
    for (i, p) in traj.points.iter().enumerate() {
        let s = if i == n_steps { end } else { start + i as f64 * traj.step };
        let q = c.point(s)?;
        deviation = deviation.max((p.base - q).euclidean_norm() / q.euclidean_norm().max(1.0));
    }
    Ok(LiftCheck { is_integral_curve: deviation <= tol, deviation, steps: n_steps })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCurvatures {
    pub gamma_n: f64,
    pub k_n: f64,
    pub sigma: f64,
}

impl GeodesicCurvatures {
    /// `γₙ = θ′/‖ω‖`, `kₙ = √(θ′² + ‖ω‖²)/‖ω‖`, `σ = γₙ/kₙ`.
    pub fn from_parts(theta_prime: f64, norm_omega: f64) -> Self {
        let gamma_n = theta_prime / norm_omega;
        let k_n = theta_prime.hypot(norm_omega) / norm_omega;
        Self { gamma_n, k_n, sigma: gamma_n / k_n }
    }
}

/// θ′(s) by central differences of the Darboux angle.
pub fn theta_prime(evolute: &ParametricCurve, s: f64) -> Result<f64> {
    let theta = |x: f64| frenet_apparatus(evolute, x).and_then(|f| darboux(&f)).map(|d| d.theta);
    diff::first(theta, s, evolute.field_steps().first)
}

pub fn geodesic_curvatures(evolute: &ParametricCurve, s: f64) -> Result<GeodesicCurvatures> {
    let dd = darboux(&frenet_apparatus(evolute, s)?)?;
    Ok(GeodesicCurvatures::from_parts(theta_prime(evolute, s)?, dd.norm_omega))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictReason {
    ThetaConstant,
    GeodesicCurvaturesConstant,
    DegenerateAlwaysFalse,
    NumericResidual,
}

impl fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictReason::ThetaConstant => "theta_constant",
            VerdictReason::GeodesicCurvaturesConstant => "geodesic_curvatures_constant",
            VerdictReason::DegenerateAlwaysFalse => "degenerate_always_false",
            VerdictReason::NumericResidual => "numeric_residual",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "value", rename_all = "snake_case")]
pub enum ResidualOutcome {
    Residual(f64),
    DegenerateSpeed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSample {
    pub s: f64,
    #[serde(flatten)]
    pub outcome: ResidualOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictTolerances {
    /// Relative tolerance on the constancy condition (τ/κ, or γₙ and kₙ).
    pub condition: f64,
    /// Bound on the geodesic residual.
    pub residual: f64,
    /// Bound on the relative deviation in the spray-integration check.
    pub dynamic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary {
    pub gamma_n_min: f64,
    pub gamma_n_max: f64,
    pub k_n_min: f64,
    pub k_n_max: f64,
    /// `max(spread(γₙ), spread(kₙ)) / max(1, |mean kₙ|)`.
    pub relative_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicVerdict {
    pub kind: IndicatrixKind,
    pub case: DarbouxCase,
    pub sphere: Sphere,
    pub is_geodesic: bool,
    pub reason: VerdictReason,
    pub max_residual: f64,
    pub tolerances: VerdictTolerances,
    pub sample_count: usize,
    /// Condition route, residual route and (when run) spray route agree.
    pub concordant: bool,
    /// Verdict of the residual route alone.
    pub numeric_is_geodesic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub helix: Option<HelixVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvatures: Option<CurvatureSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamic: Option<LiftCheck>,
    pub diagnostics: Vec<ResidualSample>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictConfig {
    pub n_samples: usize,
    pub condition_tol: f64,
    /// Residual bound; `None` picks 1e-6 for closed-form evolutes, 1e-4 otherwise.
    pub residual_tol: Option<f64>,
    /// Steps for the spray-integration check; `None` skips it.
    pub dynamic_steps: Option<usize>,
    pub dynamic_tol: f64,
    /// Length of the window, centred in the sampled range, over which the spray
    /// is integrated. Neighbouring geodesics on S²₁ and H²₀ separate
    /// exponentially, so long windows measure conditioning rather than geometry.
    pub dynamic_window: f64,
    pub parallel: bool,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        Self {
            n_samples: 64,
            condition_tol: 1e-6,
            residual_tol: None,
            dynamic_steps: Some(2000),
            dynamic_tol: 1e-6,
            dynamic_window: 2.0,
            parallel: true,
        }
    }
}

impl VerdictConfig {
    pub fn residual_tol_for(&self, evolute: &ParametricCurve) -> f64 {
        self.residual_tol.unwrap_or(if evolute.mode().is_closed() { 1e-6 } else { 1e-4 })
    }

    fn tolerances(&self, evolute: &ParametricCurve) -> VerdictTolerances {
        VerdictTolerances {
            condition: self.condition_tol,
            residual: self.residual_tol_for(evolute),
            dynamic: self.dynamic_tol,
        }
    }
}

fn residual_profile(c: &IndicatrixCurve, samples: &[f64], parallel: bool) -> Result<Vec<ResidualSample>> {
    par::map(samples, parallel, |s| match geodesic_residual(c, s) {
        Ok(r) => Ok(ResidualSample { s, outcome: ResidualOutcome::Residual(r) }),
        Err(GeomError::DegenerateSpeed { .. }) => Ok(ResidualSample { s, outcome: ResidualOutcome::DegenerateSpeed }),
        Err(e) => Err(e),
    })
    .into_iter()
    .collect()
}

fn max_residual(profile: &[ResidualSample]) -> f64 {
    profile
        .iter()
        .filter_map(|r| match r.outcome {
            ResidualOutcome::Residual(x) => Some(x),
            ResidualOutcome::DegenerateSpeed => None,
        })
        .fold(0.0, f64::max)
}

fn all_residual(profile: &[ResidualSample]) -> bool {
    profile.iter().all(|r| matches!(r.outcome, ResidualOutcome::Residual(_)))
}

fn dynamic_check(c: &IndicatrixCurve, samples: &[f64], cfg: &VerdictConfig) -> Result<Option<LiftCheck>> {
    let Some(steps) = cfg.dynamic_steps else { return Ok(None) };
    // Only meaningful when the lift's initial vector is accurate to the
    // comparison tolerance, i.e. for evolutes with exact derivatives.
    if !c.evolute().mode().is_closed() {
        return Ok(None);
    }
    let (lo, hi) = (samples[0], samples[samples.len() - 1]);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * cfg.dynamic_window;
    let (a, b) = ((mid - half).max(lo), (mid + half).min(hi));
    match lift_integral_check(c, a, b, cfg.dynamic_tol, steps) {
        Ok(check) => Ok(Some(check)),
        // Leaving the sphere is itself a negative dynamical verdict.
        Err(GeomError::DriftExceeded { .. }) => {
            Ok(Some(LiftCheck { is_integral_curve: false, deviation: f64::INFINITY, steps }))
        }
        Err(e) => Err(e),
    }
}

/// Geodesic verdict for a sampled indicatrix from residuals alone.
pub fn numeric_verdict(c: &IndicatrixCurve, cfg: &VerdictConfig) -> Result<GeodesicVerdict> {
    let samples = c.evolute().interior_samples(cfg.n_samples)?;
    let profile = residual_profile(c, &samples, cfg.parallel)?;
    let tolerances = cfg.tolerances(c.evolute());
    let max_res = max_residual(&profile);
    let numeric = all_residual(&profile) && max_res <= tolerances.residual;
    Ok(GeodesicVerdict {
        kind: c.kind(),
        case: c.case(),
        sphere: c.sphere(),
        is_geodesic: numeric,
        reason: VerdictReason::NumericResidual,
        max_residual: max_res,
        tolerances,
        sample_count: samples.len(),
        concordant: true,
        numeric_is_geodesic: numeric,
        helix: None,
        curvatures: None,
        dynamic: None,
        diagnostics: profile,
    })
}

/// Whether the natural lift of the tangent indicatrix is an integral curve of
/// the spray: decided by constancy of τ/κ (equivalently θ), cross-checked by
/// residuals and, for exact evolutes, by integrating the spray.
pub fn verdict_tangent_lift(evolute: &ParametricCurve, cfg: &VerdictConfig) -> Result<GeodesicVerdict> {
    let c = IndicatrixCurve::of_evolute(evolute, IndicatrixKind::Tangent)?;
    let helix = is_general_helix_with(evolute, cfg.n_samples, cfg.condition_tol, cfg.parallel)?;
    let mut v = numeric_verdict(&c, cfg)?;
    let samples = evolute.interior_samples(cfg.n_samples)?;
    let dynamic = dynamic_check(&c, &samples, cfg)?;
    v.is_geodesic = helix.is_helix;
    v.reason = VerdictReason::ThetaConstant;
    v.concordant = v.numeric_is_geodesic == helix.is_helix && dynamic.is_none_or(|d| d.is_integral_curve == helix.is_helix);
    v.helix = Some(helix);
    v.dynamic = dynamic;
    Ok(v)
}

/// Principal-normal lift: geodesic iff γₙ and kₙ are constant.
pub fn verdict_normal_lift(evolute: &ParametricCurve, cfg: &VerdictConfig) -> Result<GeodesicVerdict> {
    let c = IndicatrixCurve::of_evolute(evolute, IndicatrixKind::PrincipalNormal)?;
    let samples = evolute.interior_samples(cfg.n_samples)?;
    let curvatures = par::map(&samples, cfg.parallel, |s| geodesic_curvatures(evolute, s))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (mut gmin, mut gmax, mut kmin, mut kmax, mut ksum) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN, 0.0);
    for g in &curvatures {
        gmin = gmin.min(g.gamma_n);
        gmax = gmax.max(g.gamma_n);
        kmin = kmin.min(g.k_n);
        kmax = kmax.max(g.k_n);
        ksum += g.k_n;
    }
    let kmean = ksum / curvatures.len() as f64;
    let spread = (gmax - gmin).max(kmax - kmin) / kmean.abs().max(1.0);
    let summary = CurvatureSummary { gamma_n_min: gmin, gamma_n_max: gmax, k_n_min: kmin, k_n_max: kmax, relative_spread: spread };
    let condition = spread <= cfg.condition_tol;

    let mut v = numeric_verdict(&c, cfg)?;
    let dynamic = dynamic_check(&c, &samples, cfg)?;
    v.is_geodesic = condition;
    v.reason = VerdictReason::GeodesicCurvaturesConstant;
    v.concordant = v.numeric_is_geodesic == condition && dynamic.is_none_or(|d| d.is_integral_curve == condition);
    v.curvatures = Some(summary);
    v.dynamic = dynamic;
    Ok(v)
}

/// Binormal lift: never an integral curve of the spray. The diagnostics
/// confirm that every sample is either degenerate (constant indicatrix) or
/// has a residual above tolerance.
pub fn verdict_binormal_lift(evolute: &ParametricCurve, cfg: &VerdictConfig) -> Result<GeodesicVerdict> {
    let c = IndicatrixCurve::of_evolute(evolute, IndicatrixKind::Binormal)?;
    let mut v = numeric_verdict(&c, cfg)?;
    let tol = v.tolerances.residual;
    let numeric_not_geodesic = v.diagnostics.iter().all(|r| match r.outcome {
        ResidualOutcome::DegenerateSpeed => true,
        ResidualOutcome::Residual(x) => x > tol,
    });
    v.is_geodesic = false;
    v.reason = VerdictReason::DegenerateAlwaysFalse;
    v.concordant = numeric_not_geodesic;
    v.numeric_is_geodesic = !numeric_not_geodesic;
    Ok(v)
}

/// The verdict for one kind.
pub fn verdict(evolute: &ParametricCurve, kind: IndicatrixKind, cfg: &VerdictConfig) -> Result<GeodesicVerdict> {
    match kind {
        IndicatrixKind::Tangent => verdict_tangent_lift(evolute, cfg),
        IndicatrixKind::PrincipalNormal => verdict_normal_lift(evolute, cfg),
        IndicatrixKind::Binormal => verdict_binormal_lift(evolute, cfg),
    }
}
