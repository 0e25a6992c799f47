//! Parametric curves in E³₁ and their derivatives.
//!
//! A [`ParametricCurve`] wraps a [`CurveMap`] (the evaluator) together with a
//! domain and a derivative mode. Closed-form maps supply derivatives of order
//! 1 to 3 directly; everything else falls back to central differences.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diff;
use crate::error::{GeomError, Result};
use crate::expr::Expr;
use crate::lorentz::{minkowski_inner, Vec3};
use crate::ode::{self, AdaptiveTolerance, State};
use crate::par;

/// Closed parameter interval `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub min: f64,
    pub max: f64,
}

impl Domain {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(GeomError::InvalidArgument(format!("empty or non-finite domain [{min}, {max}]")));
        }
        Ok(Self { min, max })
    }

    pub fn len(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.min && s <= self.max
    }

    /// Domain with `margin` removed from both ends.
    pub fn shrink(&self, margin: f64) -> Result<Domain> {
        Domain::new(self.min + margin, self.max - margin)
    }

    /// Domain with `margin` added to both ends.
    pub fn pad(&self, margin: f64) -> Domain {
        Domain { min: self.min - margin, max: self.max + margin }
    }

    /// `n ≥ 2` equally spaced samples including both endpoints.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "need at least two samples");
        let step = self.len() / (n - 1) as f64;
        (0..n)
            .map(|i| if i == n - 1 { self.max } else { self.min + i as f64 * step })
            .collect()
    }

    pub fn check(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(GeomError::OutOfDomain { s, min: self.min, max: self.max })
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.min, self.max)
    }
}

/// Evaluator behind a [`ParametricCurve`].
pub trait CurveMap: Send + Sync + fmt::Debug {
    fn point(&self, s: f64) -> Result<Vec3>;

    /// Whether [`CurveMap::derivative`] is implemented for orders 1..=3.
    fn has_closed_derivatives(&self) -> bool {
        false
    }

    fn derivative(&self, _s: f64, order: usize) -> Result<Vec3> {
        Err(GeomError::InvalidArgument(format!("no closed-form derivative of order {order}")))
    }
}

/// How derivatives of a curve are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeMode {
    ClosedForm,
    /// Central differences; `h` is the step of the first derivative.
    /// Orders 2 and 3 use `50h` and `100h`: at `h = 1e-4` that balances the
    /// O(H⁴) truncation error against rounding, which grows like `ε/Hᵏ`.
    FiniteDifference { h: f64 },
}

pub const DEFAULT_FD_STEP: f64 = 1e-4;

impl DerivativeMode {
    pub fn step(&self, order: usize) -> f64 {
        match *self {
            DerivativeMode::ClosedForm => 0.0,
            DerivativeMode::FiniteDifference { h } => match order {
                1 => h,
                2 => 50.0 * h,
                _ => 100.0 * h,
            },
        }
    }

    /// How far beyond `s` the evaluator is sampled for a derivative of this order.
    pub fn reach(&self, order: usize) -> f64 {
        self.step(order) * diff::stencil_half_width(order)
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, DerivativeMode::ClosedForm)
    }
}

/// Step sizes for differentiating quantities built from the curve (frames, θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSteps {
    pub first: f64,
    pub second: f64,
}

#[derive(Clone)]
pub struct ParametricCurve {
    label: String,
    domain: Domain,
    map: Arc<dyn CurveMap>,
    mode: DerivativeMode,
}

impl fmt::Debug for ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricCurve")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("mode", &self.mode)
            .field("map", &self.map)
            .finish()
    }
}

impl ParametricCurve {
    /// Uses closed-form derivatives when the map provides them.
    pub fn new(label: impl Into<String>, domain: Domain, map: impl CurveMap + 'static) -> Self {
        let mode = if map.has_closed_derivatives() {
            DerivativeMode::ClosedForm
        } else {
            DerivativeMode::FiniteDifference { h: DEFAULT_FD_STEP }
        };
        Self { label: label.into(), domain, map: Arc::new(map), mode }
    }

    /// Same curve, derivatives by central differences with first-order step `h`.
    pub fn with_finite_differences(mut self, h: f64) -> Self {
        self.mode = DerivativeMode::FiniteDifference { h };
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn point(&self, s: f64) -> Result<Vec3> {
        self.domain.check(s)?;
        finite(s, self.map.point(s)?)
    }

    /// `α⁽ᵒʳᵈᵉʳ⁾(s)` for order 1..=3.
    pub fn derivative(&self, s: f64, order: usize) -> Result<Vec3> {
        if !(1..=3).contains(&order) {
            return Err(GeomError::InvalidArgument(format!("derivative order {order} not in 1..=3")));
        }
        self.domain.check(s)?;
        let v = match self.mode {
            DerivativeMode::ClosedForm => self.map.derivative(s, order)?,
            DerivativeMode::FiniteDifference { .. } => {
                let reach = self.mode.reach(order);
                let margin = (s - self.domain.min).min(self.domain.max - s);
                if margin < reach {
                    return Err(GeomError::StepTooLarge { s, margin, reach });
                }
                let map = &self.map;
                diff::nth(|x| map.point(x), s, self.mode.step(order), order)?
            }
        };
        finite(s, v)
    }

    /// `[α′(s), …, α⁽ᵒʳᵈᵉʳ⁾(s)]`.
    pub fn derivatives(&self, s: f64, order: usize) -> Result<Vec<Vec3>> {
        if !(1..=3).contains(&order) {
            return Err(GeomError::InvalidArgument(format!("derivative order {order} not in 1..=3")));
        }
        (1..=order).map(|k| self.derivative(s, k)).collect()
    }

    /// `(α′, α″, α‴)` at `s`.
    pub fn jet(&self, s: f64) -> Result<[Vec3; 3]> {
        Ok([self.derivative(s, 1)?, self.derivative(s, 2)?, self.derivative(s, 3)?])
    }

    /// Steps used when differentiating frame fields of this curve.
    pub fn field_steps(&self) -> FieldSteps {
        if self.mode.is_closed() {
            FieldSteps { first: 1e-3, second: 5e-3 }
        } else {
            FieldSteps { first: 2e-3, second: 1e-2 }
        }
    }

    /// Distance from the domain ends that keeps every stencil used on frame
    /// fields (second differences of quantities needing `α‴`) inside the domain.
    pub fn field_margin(&self) -> f64 {
        let steps = self.field_steps();
        1.01 * (2.0 * steps.second + self.mode.reach(3))
    }

    /// Samples strictly inside the domain, away from the ends by `field_margin`.
    pub fn interior_samples(&self, n: usize) -> Result<Vec<f64>> {
        Ok(self.domain.shrink(self.field_margin())?.samples(n))
    }
}

fn finite(s: f64, v: Vec3) -> Result<Vec3> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GeomError::NonFinite { s })
    }
}

/// Max over samples of `|g(α′, α′) − 1|`.
pub fn unit_speed_check(curve: &ParametricCurve, n_samples: usize, tol: f64) -> Result<(bool, f64)> {
    if n_samples < 2 {
        return Err(GeomError::InvalidArgument("unit_speed_check needs at least 2 samples".into()));
    }
    let span = curve.domain().shrink(curve.mode().reach(1))?;
    let devs = par::map(&span.samples(n_samples), true, |s| {
        curve.derivative(s, 1).map(|d| (minkowski_inner(d, d) - 1.0).abs())
    });
    let max_dev = devs.into_iter().try_fold(0.0f64, |m, d| d.map(|d| m.max(d)))?;
    Ok((max_dev <= tol, max_dev))
}

// ---------------------------------------------------------------------------
// Closed-form maps

/// Coordinates given by three expressions in `s`, differentiated symbolically.
#[derive(Debug, Clone)]
pub struct ExprCurve {
    coords: [Expr; 3],
    derivs: [[Expr; 3]; 3],
    closed: bool,
}

impl ExprCurve {
    pub fn parse(x1: &str, x2: &str, x3: &str) -> Result<Self> {
        let coords = [Expr::parse(x1)?, Expr::parse(x2)?, Expr::parse(x3)?];
        Ok(Self::from_exprs(coords))
    }

    pub fn from_exprs(coords: [Expr; 3]) -> Self {
        let d = |k: usize| [coords[0].nth_derivative(k), coords[1].nth_derivative(k), coords[2].nth_derivative(k)];
        let derivs = [d(1), d(2), d(3)];
        Self { coords, derivs, closed: true }
    }

    /// Hide the symbolic derivatives: the curve is known only through point samples.
    pub fn point_only(mut self) -> Self {
        self.closed = false;
        self
    }

    fn eval(e: &[Expr; 3], s: f64) -> Vec3 {
        Vec3::new(e[0].eval(s), e[1].eval(s), e[2].eval(s))
    }
}

impl CurveMap for ExprCurve {
    fn point(&self, s: f64) -> Result<Vec3> {
        Ok(Self::eval(&self.coords, s))
    }

    fn has_closed_derivatives(&self) -> bool {
        self.closed
    }

    fn derivative(&self, s: f64, order: usize) -> Result<Vec3> {
        Ok(Self::eval(&self.derivs[order - 1], s))
    }
}

/// `(sinh s, cosh s, √2 s)`: a unit-speed spacelike hyperbolic helix with
/// timelike binormal, κ = 1 and τ = √2.
pub fn worked_example(domain: Domain) -> ParametricCurve {
    let map = ExprCurve::parse("sinh(s)", "cosh(s)", "sqrt(2)*s").expect("built-in expressions parse");
    ParametricCurve::new("example_3_1_7", domain, map)
}

pub const DEFAULT_DOMAIN: Domain = Domain { min: -5.0, max: 5.0 };

/// Relative tolerance for deciding `|κ| = |τ|`.
pub const EQUAL_CURVATURE_TOL: f64 = 1e-12;

/// A spacelike W-curve with timelike binormal exists unless `|κ| = |τ|`.
pub fn w_curve_exists(kappa: f64, tau: f64) -> bool {
    (kappa.abs() - tau.abs()).abs() > EQUAL_CURVATURE_TOL * kappa.abs().max(tau.abs()).max(1.0)
}

fn check_w_curvatures(kappa: f64, tau: f64) -> Result<()> {
    if !(kappa.is_finite() && tau.is_finite()) {
        return Err(GeomError::InvalidArgument("curvatures must be finite".into()));
    }
    if !w_curve_exists(kappa, tau) {
        return Err(GeomError::EqualCurvatures { kappa, tau });
    }
    if kappa <= 0.0 {
        return Err(GeomError::CaseViolation { kappa, tau, detail: "κ must be positive".into() });
    }
    Ok(())
}

/// `α(s) = (κ sinh(ws), κ cosh(ws), τ w s) / w²` with `w = √(τ² − κ²)`.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicHelix {
    kappa: f64,
    tau: f64,
    w: f64,
}

impl CurveMap for HyperbolicHelix {
    fn point(&self, s: f64) -> Result<Vec3> {
        let (k, w) = (self.kappa, self.w);
        let x = w * s;
        Ok(Vec3::new(k * x.sinh(), k * x.cosh(), self.tau * x) / (w * w))
    }

    fn has_closed_derivatives(&self) -> bool {
        true
    }

    fn derivative(&self, s: f64, order: usize) -> Result<Vec3> {
        let (k, w) = (self.kappa, self.w);
        let x = w * s;
        let scale = k * w.powi(order as i32) / (w * w);
        let (a, b) = if order.is_multiple_of(2) { (x.sinh(), x.cosh()) } else { (x.cosh(), x.sinh()) };
        let third = if order == 1 { self.tau / w } else { 0.0 };
        Ok(Vec3::new(scale * a, scale * b, third))
    }
}

/// `α(s) = (−τ w s, κ cos(ws), κ sin(ws)) / w²` with `w = √(κ² − τ²)`.
///
/// The first coordinate carries a minus sign so that the Frenet frame with
/// `b = t × n` returns torsion `+τ`; without it the torsion comes out as `−τ`.
#[derive(Debug, Clone, Copy)]
pub struct CircularHelix {
    kappa: f64,
    tau: f64,
    w: f64,
}

fn cos_derivative(x: f64, order: usize) -> f64 {
    match order % 4 {
        0 => x.cos(),
        1 => -x.sin(),
        2 => -x.cos(),
        _ => x.sin(),
    }
}

fn sin_derivative(x: f64, order: usize) -> f64 {
    match order % 4 {
        0 => x.sin(),
        1 => x.cos(),
        2 => -x.sin(),
        _ => -x.cos(),
    }
}

impl CurveMap for CircularHelix {
    fn point(&self, s: f64) -> Result<Vec3> {
        let (k, w) = (self.kappa, self.w);
        let x = w * s;
        Ok(Vec3::new(-self.tau * x, k * x.cos(), k * x.sin()) / (w * w))
    }

    fn has_closed_derivatives(&self) -> bool {
        true
    }

    fn derivative(&self, s: f64, order: usize) -> Result<Vec3> {
        let (k, w) = (self.kappa, self.w);
        let x = w * s;
        let scale = k * w.powi(order as i32) / (w * w);
        let first = if order == 1 { -self.tau / w } else { 0.0 };
        Ok(Vec3::new(first, scale * cos_derivative(x, order), scale * sin_derivative(x, order)))
    }
}

/// Spacelike hyperbolic helix with constant `κ < |τ|` (spacelike Darboux vector).
pub fn w_curve_hyperbolic_helix(kappa: f64, tau: f64, domain: Domain) -> Result<ParametricCurve> {
    check_w_curvatures(kappa, tau)?;
    if kappa >= tau.abs() {
        return Err(GeomError::CaseViolation {
            kappa,
            tau,
            detail: "hyperbolic helix needs κ < |τ|".into(),
        });
    }
    let w = (tau * tau - kappa * kappa).sqrt();
    Ok(ParametricCurve::new(
        format!("w_hyperbolic(kappa={kappa}, tau={tau})"),
        domain,
        HyperbolicHelix { kappa, tau, w },
    ))
}

/// Spacelike circular helix with constant `κ > |τ|` (timelike Darboux vector).
pub fn w_curve_circular_helix(kappa: f64, tau: f64, domain: Domain) -> Result<ParametricCurve> {
    check_w_curvatures(kappa, tau)?;
    if kappa <= tau.abs() {
        return Err(GeomError::CaseViolation {
            kappa,
            tau,
            detail: "circular helix needs κ > |τ|".into(),
        });
    }
    let w = (kappa * kappa - tau * tau).sqrt();
    Ok(ParametricCurve::new(
        format!("w_circular(kappa={kappa}, tau={tau})"),
        domain,
        CircularHelix { kappa, tau, w },
    ))
}

/// `α(s) = (0, cos κs, sin κs) / κ`: the `τ = 0` circular helix.
pub fn w_curve_circle(kappa: f64, domain: Domain) -> Result<ParametricCurve> {
    check_w_curvatures(kappa, 0.0)?;
    Ok(ParametricCurve::new(
        format!("w_circle(kappa={kappa})"),
        domain,
        CircularHelix { kappa, tau: 0.0, w: kappa },
    ))
}

// ---------------------------------------------------------------------------
// Curves defined by prescribed curvature functions

const CHECKPOINT_SPACING: f64 = 1e-2;
const SUBSTEPS: usize = 4;

/// Curve obtained by integrating `α′ = t, t′ = κn, n′ = −κt + τb, b′ = τn`
/// with prescribed `κ(s)`, `τ(s)`.
///
/// The solution is tabulated at checkpoints with an adaptive 5(4) integrator;
/// evaluation between checkpoints takes a fixed number of RK4 steps from the
/// nearest one, which keeps the result smooth in `s`.
#[derive(Debug, Clone)]
pub struct PrescribedCurvature {
    kappa: Expr,
    tau: Expr,
    dkappa: Expr,
    origin: f64,
    spacing: f64,
    checkpoints: Vec<State<12>>,
}

fn pack(x: Vec3, t: Vec3, n: Vec3, b: Vec3) -> State<12> {
    [x.x1, x.x2, x.x3, t.x1, t.x2, t.x3, n.x1, n.x2, n.x3, b.x1, b.x2, b.x3]
}

fn unpack(y: &State<12>) -> [Vec3; 4] {
    [
        Vec3::new(y[0], y[1], y[2]),
        Vec3::new(y[3], y[4], y[5]),
        Vec3::new(y[6], y[7], y[8]),
        Vec3::new(y[9], y[10], y[11]),
    ]
}

impl PrescribedCurvature {
    /// Integrates over `domain` from `anchor`, where the curve starts at the
    /// origin with `t = (0, 1, 0)`, `n = (0, 0, 1)`, `b = t × n = (−1, 0, 0)`.
    pub fn new(kappa: Expr, tau: Expr, anchor: f64, domain: Domain) -> Result<Self> {
        domain.check(anchor)?;
        let dkappa = kappa.derivative();
        let n_cells = (domain.len() / CHECKPOINT_SPACING).ceil() as usize;
        let spacing = domain.len() / n_cells as f64;
        let t0 = Vec3::new(0.0, 1.0, 0.0);
        let n0 = Vec3::new(0.0, 0.0, 1.0);
        let y0 = pack(Vec3::ZERO, t0, n0, t0.cross(n0));

        let rhs = |s: f64, y: &State<12>| frenet_rhs(&kappa, &tau, s, y);
        let grid = |i: usize| if i == n_cells { domain.max } else { domain.min + i as f64 * spacing };
        // Nearest grid index at or below the anchor; integrate outwards from there.
        let k0 = (((anchor - domain.min) / spacing).floor() as usize).min(n_cells);
        let mut checkpoints = vec![[0.0; 12]; n_cells + 1];
        let tol = AdaptiveTolerance::default();
        checkpoints[k0] = ode::dopri45(&rhs, anchor, &y0, grid(k0), tol);
        for i in k0 + 1..=n_cells {
            checkpoints[i] = ode::dopri45(&rhs, grid(i - 1), &checkpoints[i - 1], grid(i), tol);
        }
        for i in (0..k0).rev() {
            checkpoints[i] = ode::dopri45(&rhs, grid(i + 1), &checkpoints[i + 1], grid(i), tol);
        }
        if checkpoints.iter().flatten().any(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite { s: anchor });
        }
        Ok(Self { kappa, tau, dkappa, origin: domain.min, spacing, checkpoints })
    }

    fn state(&self, s: f64) -> State<12> {
        let last = self.checkpoints.len() - 1;
        let k = (((s - self.origin) / self.spacing).round().max(0.0) as usize).min(last);
        let sk = self.origin + k as f64 * self.spacing;
        let rhs = |x: f64, y: &State<12>| frenet_rhs(&self.kappa, &self.tau, x, y);
        ode::rk4_fixed(&rhs, sk, &self.checkpoints[k], s, SUBSTEPS)
    }

    /// Integrated frame `(t, n, b)` at `s`.
    pub fn frame(&self, s: f64) -> [Vec3; 3] {
        let [_, t, n, b] = unpack(&self.state(s));
        [t, n, b]
    }
}

fn frenet_rhs(kappa: &Expr, tau: &Expr, s: f64, y: &State<12>) -> State<12> {
    let [_, t, n, b] = unpack(y);
    let (k, w) = (kappa.eval(s), tau.eval(s));
    pack(t, n * k, t * (-k) + b * w, n * w)
}

impl CurveMap for PrescribedCurvature {
    fn point(&self, s: f64) -> Result<Vec3> {
        Ok(unpack(&self.state(s))[0])
    }

    fn has_closed_derivatives(&self) -> bool {
        true
    }

    fn derivative(&self, s: f64, order: usize) -> Result<Vec3> {
        let [_, t, n, b] = unpack(&self.state(s));
        let k = self.kappa.eval(s);
        Ok(match order {
            1 => t,
            2 => n * k,
            _ => n * self.dkappa.eval(s) + (t * (-k) + b * self.tau.eval(s)) * k,
        })
    }
}

/// Curve with prescribed `κ(s)`, `τ(s)` (expressions in `s`), anchored at `anchor`.
///
/// Constant curvatures describe a W-curve and go through the same
/// `|κ| = |τ|` gate as the W-curve generators.
pub fn prescribed_curvature(kappa: &str, tau: &str, anchor: f64, domain: Domain) -> Result<ParametricCurve> {
    let (k, t) = (Expr::parse(kappa)?, Expr::parse(tau)?);
    if !k.depends_on_var() && !t.depends_on_var() && !w_curve_exists(k.eval(0.0), t.eval(0.0)) {
        return Err(GeomError::EqualCurvatures { kappa: k.eval(0.0), tau: t.eval(0.0) });
    }
    let map = PrescribedCurvature::new(k, t, anchor, domain)?;
    Ok(ParametricCurve::new(format!("prescribed(kappa={kappa}, tau={tau})"), domain, map))
}

/// The non-helix used as a negative control: `κ = 1`, `τ = s` on `[1.5, 4]`,
/// where `τ > κ` throughout (spacelike Darboux vector).
pub fn nonhelix_control() -> ParametricCurve {
    let domain = Domain { min: 1.5, max: 4.0 };
    prescribed_curvature("1", "s", domain.min, domain)
        .expect("control curve integrates")
        .with_label("nonhelix")
}

// ---------------------------------------------------------------------------
// Arclength reparametrization

// Five-point Gauss–Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

fn pseudo_speed(curve: &ParametricCurve, s: f64) -> Result<f64> {
    let d = curve.derivative(s, 1)?;
    let q = minkowski_inner(d, d);
    if q <= 0.0 {
        return Err(GeomError::NotSpacelike { s, q });
    }
    Ok(q.sqrt())
}

fn integrate_speed(curve: &ParametricCurve, a: f64, b: f64) -> Result<f64> {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut total = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        total += w * pseudo_speed(curve, mid + half * x)?;
    }
    Ok(total * half)
}

/// `base` reparametrized by pseudo-arclength σ.
#[derive(Debug)]
pub struct ArclengthCurve {
    base: ParametricCurve,
    knots: Vec<f64>,
    arclength: Vec<f64>,
}

impl ArclengthCurve {
    /// Base parameter `s` with `σ(s) = σ`; Newton iteration safeguarded by bisection.
    pub fn base_parameter(&self, sigma: f64) -> Result<f64> {
        let last = self.arclength.len() - 1;
        let k = match self.arclength.partition_point(|&a| a <= sigma) {
            0 => 0,
            i if i > last => last - 1,
            i => i - 1,
        };
        let (s0, s1) = (self.knots[k], self.knots[k + 1]);
        let (a0, a1) = (self.arclength[k], self.arclength[k + 1]);
        let (mut lo, mut hi) = (s0, s1);
        let mut s = s0 + (s1 - s0) * ((sigma - a0) / (a1 - a0)).clamp(0.0, 1.0);
        for _ in 0..60 {
            let f = a0 + integrate_speed(&self.base, s0, s)? - sigma;
            if f.abs() <= 1e-15 * sigma.abs().max(1.0) {
                break;
            }
            if f > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let next = s - f / pseudo_speed(&self.base, s)?;
            s = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        }
        Ok(s)
    }

    pub fn total_length(&self) -> f64 {
        *self.arclength.last().unwrap()
    }
}

impl CurveMap for ArclengthCurve {
    fn point(&self, sigma: f64) -> Result<Vec3> {
        self.base.point(self.base_parameter(sigma)?)
    }

    fn has_closed_derivatives(&self) -> bool {
        true
    }

    fn derivative(&self, sigma: f64, order: usize) -> Result<Vec3> {
        let s = self.base_parameter(sigma)?;
        let [d1, d2, d3] = self.base.jet(s)?;
        // v = pseudo-speed, dσ/ds = v; chain rule in terms of v and its s-derivatives.
        let v = minkowski_inner(d1, d1).sqrt();
        let dv = minkowski_inner(d1, d2) / v;
        let ddv = (minkowski_inner(d2, d2) + minkowski_inner(d1, d3) - dv * dv) / v;
        Ok(match order {
            1 => d1 / v,
            2 => d2 / (v * v) - d1 * (dv / v.powi(3)),
            _ => {
                let inner = d3 / (v * v) - d2 * (3.0 * dv / v.powi(3)) - d1 * (ddv / v.powi(3))
                    + d1 * (3.0 * dv * dv / v.powi(4));
                inner / v
            }
        })
    }
}

/// Reparametrize a spacelike curve by pseudo-arclength.
///
/// The cumulative arclength is tabulated at `n_samples` knots with Gauss–Legendre
/// quadrature and inverted by safeguarded Newton iteration; derivatives follow
/// from the chain rule, so the result is unit-speed up to quadrature error.
/// The new parameter runs over `[0, L]`.
pub fn arclength_reparametrize(curve: &ParametricCurve, n_samples: usize) -> Result<ParametricCurve> {
    if n_samples < 2 {
        return Err(GeomError::InvalidArgument("need at least 2 tabulation knots".into()));
    }
    let span = curve.domain().shrink(curve.mode().reach(3))?;
    let knots = span.samples(n_samples);
    let pieces = par::map(&knots[..n_samples - 1], true, |a| {
        let i = knots.partition_point(|&k| k <= a);
        integrate_speed(curve, a, knots[i])
    });
    let mut arclength = Vec::with_capacity(n_samples);
    arclength.push(0.0);
    for piece in pieces {
        let next = arclength.last().unwrap() + piece?;
        arclength.push(next);
    }
    let map = ArclengthCurve { base: curve.clone(), knots, arclength };
    let domain = Domain::new(0.0, map.total_length())?;
    Ok(ParametricCurve::new(format!("arclength({})", curve.label()), domain, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, SQRT_2};

    fn vec_close(a: Vec3, b: Vec3, tol: f64) {
        assert!(a.max_abs_diff(b) <= tol, "{a} vs {b}");
    }

    #[test]
    fn prescribed_constant_curvatures_are_gated() {
        let d = Domain::new(0.0, 1.0).unwrap();
        assert!(matches!(prescribed_curvature("1", "-1", 0.0, d), Err(GeomError::EqualCurvatures { .. })));
        assert!(matches!(prescribed_curvature("2", "sqrt(4)", 0.0, d), Err(GeomError::EqualCurvatures { .. })));
        assert!(prescribed_curvature("1", "2", 0.0, d).is_ok());
        assert!(prescribed_curvature("1", "s", 0.0, d).is_ok());
    }

    #[test]
    fn example_derivatives_at_zero() {
        let c = worked_example(DEFAULT_DOMAIN);
        let d = c.derivatives(0.0, 2).unwrap();
        vec_close(d[0], Vec3::new(1.0, 0.0, SQRT_2), 1e-15);
        vec_close(d[1], Vec3::new(0.0, 1.0, 0.0), 1e-15);
    }

    #[test]
    fn constant_curve_has_zero_derivatives() {
        let c = ParametricCurve::new("const", DEFAULT_DOMAIN, ExprCurve::parse("1", "2", "3").unwrap());
        for d in c.derivatives(0.3, 3).unwrap() {
            assert_eq!(d, Vec3::ZERO);
        }
        let fd = c.with_finite_differences(1e-4);
        for d in fd.derivatives(0.3, 3).unwrap() {
            assert_eq!(d, Vec3::ZERO);
        }
    }

    #[test]
    fn domain_errors() {
        let c = worked_example(Domain::new(-1.0, 1.0).unwrap());
        assert!(matches!(c.derivative(2.0, 1), Err(GeomError::OutOfDomain { .. })));
        let fd = c.with_finite_differences(1e-4);
        assert!(matches!(fd.derivative(0.99999, 1), Err(GeomError::StepTooLarge { .. })));
        assert!(fd.derivative(0.5, 3).is_ok());
        assert!(matches!(fd.derivative(0.5, 4), Err(GeomError::InvalidArgument(_))));
    }

    #[test]
    fn closed_forms_agree_with_differences() {
        let curves = [
            worked_example(DEFAULT_DOMAIN),
            w_curve_hyperbolic_helix(1.0, 2.0, DEFAULT_DOMAIN).unwrap(),
            w_curve_circular_helix(2.0, 1.0, DEFAULT_DOMAIN).unwrap(),
            w_curve_circle(1.5, DEFAULT_DOMAIN).unwrap(),
        ];
        for c in curves {
            let fd = c.clone().with_finite_differences(1e-4);
            for s in [-2.0, -0.3, 0.0, 1.1, 2.0] {
                for k in 1..=3 {
                    let exact = c.derivative(s, k).unwrap();
                    let approx = fd.derivative(s, k).unwrap();
                    let scale = exact.euclidean_norm().max(1.0);
                    assert!(exact.max_abs_diff(approx) <= 1e-7 * scale, "{} order {k} at {s}", c.label());
                }
            }
        }
    }

    #[test]
    fn generator_values() {
        let h = w_curve_hyperbolic_helix(1.0, SQRT_2, DEFAULT_DOMAIN).unwrap();
        vec_close(h.point(0.0).unwrap(), Vec3::new(0.0, 1.0, 0.0), 1e-15);
        let ex = worked_example(DEFAULT_DOMAIN);
        for s in [-5.0, -1.0, 0.5, 5.0] {
            let p = ex.point(s).unwrap();
            assert!(h.point(s).unwrap().max_abs_diff(p) <= 1e-12 * p.euclidean_norm().max(1.0));
        }
        let c = w_curve_circular_helix(2.0, 1.0, DEFAULT_DOMAIN).unwrap();
        vec_close(c.point(0.0).unwrap(), Vec3::new(0.0, 2.0 / 3.0, 0.0), 1e-15);
        let circ = w_curve_circle(1.0, Domain::new(-1.0, 7.0).unwrap()).unwrap();
        vec_close(circ.point(0.0).unwrap(), Vec3::new(0.0, 1.0, 0.0), 1e-15);
        vec_close(circ.point(2.0 * PI).unwrap(), circ.point(0.0).unwrap(), 1e-14);
    }

    #[test]
    fn generators_reject_bad_cases() {
        assert!(matches!(
            w_curve_hyperbolic_helix(1.0, 1.0, DEFAULT_DOMAIN),
            Err(GeomError::EqualCurvatures { .. })
        ));
        assert!(matches!(
            w_curve_circular_helix(1.0, -1.0, DEFAULT_DOMAIN),
            Err(GeomError::EqualCurvatures { .. })
        ));
        assert!(matches!(
            w_curve_hyperbolic_helix(2.0, 1.0, DEFAULT_DOMAIN),
            Err(GeomError::CaseViolation { .. })
        ));
        assert!(matches!(
            w_curve_circular_helix(1.0, 2.0, DEFAULT_DOMAIN),
            Err(GeomError::CaseViolation { .. })
        ));
        assert!(matches!(w_curve_circle(0.0, DEFAULT_DOMAIN), Err(GeomError::EqualCurvatures { .. })));
        assert!(matches!(w_curve_circle(-1.0, DEFAULT_DOMAIN), Err(GeomError::CaseViolation { .. })));
    }

    #[test]
    fn w_curve_existence() {
        assert!(!w_curve_exists(1.0, 1.0));
        assert!(!w_curve_exists(1.0, -1.0));
        assert!(w_curve_exists(1.0, SQRT_2));
        assert!(w_curve_exists(2.0, 1.0));
    }

    #[test]
    fn unit_speed_examples() {
        // cosh² − sinh² at |s| = 5 carries rounding of order 1e-12.
        assert!(unit_speed_check(&worked_example(DEFAULT_DOMAIN), 101, 1e-10).unwrap().0);
        let line = ParametricCurve::new("line", DEFAULT_DOMAIN, ExprCurve::parse("0", "2*s", "0").unwrap());
        let (ok, dev) = unit_speed_check(&line, 11, 1e-6).unwrap();
        assert!(!ok);
        assert_abs_diff_eq!(dev, 3.0, epsilon = 1e-14);
        let c = w_curve_circular_helix(2.0, 1.0, DEFAULT_DOMAIN).unwrap();
        assert!(unit_speed_check(&c, 101, 1e-9).unwrap().0);
    }

    #[test]
    fn reparametrize_linear_and_idempotent() {
        let line = ParametricCurve::new("line", DEFAULT_DOMAIN, ExprCurve::parse("0", "2*s", "0").unwrap());
        let r = arclength_reparametrize(&line, 32).unwrap();
        assert_abs_diff_eq!(r.domain().max, 20.0, epsilon = 1e-12);
        assert!(unit_speed_check(&r, 50, 1e-6).unwrap().0);

        let ex = worked_example(Domain::new(-2.0, 2.0).unwrap());
        let r = arclength_reparametrize(&ex, 64).unwrap();
        assert!(unit_speed_check(&r, 50, 1e-6).unwrap().0);
        for sigma in [0.0, 0.7, 2.0, 3.9] {
            let p = r.point(sigma).unwrap();
            let q = ex.point(sigma - 2.0).unwrap();
            assert!(p.max_abs_diff(q) <= 1e-6);
        }
    }

    #[test]
    fn reparametrize_fast_helix_to_example() {
        let fast = ParametricCurve::new(
            "fast",
            Domain::new(-1.0, 1.0).unwrap(),
            ExprCurve::parse("sinh(2*s)", "cosh(2*s)", "2*sqrt(2)*s").unwrap(),
        );
        let r = arclength_reparametrize(&fast, 64).unwrap();
        assert_abs_diff_eq!(r.domain().max, 4.0, epsilon = 1e-10);
        assert!(unit_speed_check(&r, 64, 1e-6).unwrap().0);
        let ex = worked_example(DEFAULT_DOMAIN);
        for sigma in [0.0, 0.25, 1.3, 2.0, 3.5, 4.0] {
            let diff = r.point(sigma).unwrap().max_abs_diff(ex.point(sigma - 2.0).unwrap());
            assert!(diff <= 1e-5, "σ = {sigma}: {diff}");
        }
        // Derivatives through the chain rule match the target curve too.
        for sigma in [0.5, 2.0, 3.0] {
            for k in 1..=3 {
                let a = r.derivative(sigma, k).unwrap();
                let b = ex.derivative(sigma - 2.0, k).unwrap();
                assert!(a.max_abs_diff(b) <= 1e-8, "order {k} at σ = {sigma}");
            }
        }
    }

    #[test]
    fn reparametrize_rejects_timelike() {
        let timelike = ParametricCurve::new("tl", DEFAULT_DOMAIN, ExprCurve::parse("2*s", "s", "0").unwrap());
        assert!(matches!(arclength_reparametrize(&timelike, 8), Err(GeomError::NotSpacelike { .. })));
    }

    #[test]
    fn prescribed_curvature_reproduces_helix() {
        // κ = 1, τ = √2 gives a congruent copy of the worked example: same invariants,
        // unit speed, frame orthonormality preserved by the integrator.
        let c = prescribed_curvature("1", "sqrt(2)", 0.0, Domain::new(-2.0, 2.0).unwrap()).unwrap();
        assert!(unit_speed_check(&c, 41, 1e-10).unwrap().0);
        let p = c.point(0.0).unwrap();
        assert!(p.euclidean_norm() < 1e-14);
        let q = c.derivative(1.3, 2).unwrap();
        assert_abs_diff_eq!(minkowski_inner(q, q), 1.0, epsilon = 1e-10);
    }
}
