//! Lorentzian linear algebra in E³₁ with signature (−,+,+).
//!
//! Everything here is exact arithmetic on coordinates; tolerances only enter
//! where a sign has to be decided (causal characters, sphere membership).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::GeomError;

/// A vector of E³₁ in rectangular coordinates `(x1, x2, x3)`; `x1` is the timelike axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Lorentzian inner product `g(self, other)`.
    #[inline]
    pub fn g(self, other: Vec3) -> f64 {
        minkowski_inner(self, other)
    }

    /// Lorentzian vector product.
    #[inline]
    pub fn cross(self, other: Vec3) -> Vec3 {
        lorentz_cross(self, other)
    }

    /// Euclidean length, used only for tolerance scaling and error reporting.
    pub fn euclidean_norm(self) -> f64 {
        self.euclidean_norm_sq().sqrt()
    }

    pub fn euclidean_norm_sq(self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Euclidean cross product; only used to test linear dependence.
    pub fn euclidean_cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.x2 * o.x3 - self.x3 * o.x2,
            self.x3 * o.x1 - self.x1 * o.x3,
            self.x1 * o.x2 - self.x2 * o.x1,
        )
    }

    pub fn max_abs_diff(self, o: Vec3) -> f64 {
        (self.x1 - o.x1)
            .abs()
            .max((self.x2 - o.x2).abs())
            .max((self.x3 - o.x3).abs())
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, self.x3)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, k: f64) -> Vec3 {
        Vec3::new(self.x1 / k, self.x2 / k, self.x3 / k)
    }
}

/// `g(u, v) = −u₁v₁ + u₂v₂ + u₃v₃`.
#[inline]
pub fn minkowski_inner(u: Vec3, v: Vec3) -> f64 {
    -u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3
}

/// `u × v = (u₃v₂ − u₂v₃, u₃v₁ − u₁v₃, u₁v₂ − u₂v₁)`.
#[inline]
pub fn lorentz_cross(u: Vec3, v: Vec3) -> Vec3 {
    Vec3::new(
        u.x3 * v.x2 - u.x2 * v.x3,
        u.x3 * v.x1 - u.x1 * v.x3,
        u.x1 * v.x2 - u.x2 * v.x1,
    )
}

/// `‖a‖ = √|g(a, a)|`.
#[inline]
pub fn pseudo_norm(v: Vec3) -> f64 {
    minkowski_inner(v, v).abs().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Null,
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Null => "null",
        })
    }
}

/// Default relative tolerance for causal classification.
pub const CAUSAL_TOL: f64 = 1e-12;

/// Classify `v`; the threshold is `tol · max(1, |v|²)` with `|·|` Euclidean.
/// The zero vector is spacelike.
pub fn causal_character(v: Vec3, tol: f64) -> CausalCharacter {
    if v == Vec3::ZERO {
        return CausalCharacter::Spacelike;
    }
    classify_signed(minkowski_inner(v, v), tol * v.euclidean_norm_sq().max(1.0))
}

fn classify_signed(q: f64, threshold: f64) -> CausalCharacter {
    if q > threshold {
        CausalCharacter::Spacelike
    } else if q < -threshold {
        CausalCharacter::Timelike
    } else {
        CausalCharacter::Null
    }
}

/// A timelike vector is positive when it points into `x1 > 0`.
pub fn is_positive_timelike(v: Vec3) -> bool {
    causal_character(v, CAUSAL_TOL) == CausalCharacter::Timelike && v.x1 > 0.0
}

/// Causal character of the plane `span{x, y}` from the sign of the Gram
/// determinant `g(x,x)g(y,y) − g(x,y)²`.
pub fn span_character(x: Vec3, y: Vec3) -> Result<CausalCharacter, GeomError> {
    let scale = x.euclidean_norm() * y.euclidean_norm();
    if scale == 0.0 || x.euclidean_cross(y).euclidean_norm() <= CAUSAL_TOL * scale {
        return Err(GeomError::DependentInput);
    }
    let gxy = minkowski_inner(x, y);
    let gram = minkowski_inner(x, x) * minkowski_inner(y, y) - gxy * gxy;
    Ok(classify_signed(gram, CAUSAL_TOL * scale * scale))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleKind {
    /// Two spacelike vectors spanning a spacelike plane: `|g| = ‖X‖‖Y‖ cos θ`.
    SpacelikeSpacelikeCos,
    /// Two spacelike vectors spanning a timelike plane: `|g| = ‖X‖‖Y‖ cosh θ`.
    SpacelikeSpacelikeCosh,
    /// A spacelike and a timelike vector: `|g| = ‖X‖‖Y‖ sinh θ`.
    SpacelikeTimelikeSinh,
    /// Two timelike vectors: `|g| = ‖X‖‖Y‖ cosh θ`.
    TimelikeTimelikeCosh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleResult {
    pub theta: f64,
    pub kind: AngleKind,
}

/// Lorentzian angle between two non-null vectors.
///
/// Every branch uses `|g(X, Y)|`, including the timelike-timelike one, so
/// the result does not depend on the time orientation of the inputs.
/// Linearly dependent inputs of the same character give `θ = 0`.
pub fn lorentz_angle(x: Vec3, y: Vec3) -> Result<AngleResult, GeomError> {
    use CausalCharacter::*;
    let (cx, cy) = (causal_character(x, CAUSAL_TOL), causal_character(y, CAUSAL_TOL));
    if cx == Null || cy == Null || x == Vec3::ZERO || y == Vec3::ZERO {
        return Err(GeomError::NullInput);
    }
    let ratio = minkowski_inner(x, y).abs() / (pseudo_norm(x) * pseudo_norm(y));
    let result = match (cx, cy) {
        (Spacelike, Spacelike) => match span_character(x, y) {
            Err(GeomError::DependentInput) => AngleResult {
                theta: 0.0,
                kind: AngleKind::SpacelikeSpacelikeCos,
            },
            Err(e) => return Err(e),
            Ok(Spacelike) => {
                debug_assert!(ratio <= 1.0 + 1e-12, "spacelike plane with |g| > ‖X‖‖Y‖");
                AngleResult {
                    theta: ratio.min(1.0).acos(),
                    kind: AngleKind::SpacelikeSpacelikeCos,
                }
            }
            Ok(Timelike) => {
                debug_assert!(ratio >= 1.0 - 1e-12, "timelike plane with |g| < ‖X‖‖Y‖");
                AngleResult {
                    theta: ratio.max(1.0).acosh(),
                    kind: AngleKind::SpacelikeSpacelikeCosh,
                }
            }
            // A degenerate (lightlike) plane sits on the boundary between the two.
            Ok(Null) => AngleResult {
                theta: 0.0,
                kind: AngleKind::SpacelikeSpacelikeCosh,
            },
        },
        (Spacelike, Timelike) | (Timelike, Spacelike) => AngleResult {
            theta: ratio.asinh(),
            kind: AngleKind::SpacelikeTimelikeSinh,
        },
        (Timelike, Timelike) => AngleResult {
            theta: ratio.max(1.0).acosh(),
            kind: AngleKind::TimelikeTimelikeCosh,
        },
        _ => unreachable!(),
    };
    Ok(result)
}

/// The two unit model spheres of E³₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sphere {
    /// Lorentzian sphere `g(a, a) = 1`.
    S12,
    /// Hyperbolic sphere `g(a, a) = −1`.
    H02,
}

impl Sphere {
    /// `ε = g(ξ, ξ)` for the position-vector normal ξ.
    pub fn epsilon(self) -> f64 {
        match self {
            Sphere::S12 => 1.0,
            Sphere::H02 => -1.0,
        }
    }

    pub fn membership(self) -> SphereMembership {
        match self {
            Sphere::S12 => SphereMembership::OnS12,
            Sphere::H02 => SphereMembership::OnH02,
        }
    }

    /// Sphere a unit vector of the given character lies on.
    pub fn for_character(c: CausalCharacter) -> Option<Sphere> {
        match c {
            CausalCharacter::Spacelike => Some(Sphere::S12),
            CausalCharacter::Timelike => Some(Sphere::H02),
            CausalCharacter::Null => None,
        }
    }
}

impl fmt::Display for Sphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sphere::S12 => "S12",
            Sphere::H02 => "H02",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SphereMembership {
    OnS12,
    OnH02,
    Neither,
}

impl fmt::Display for SphereMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SphereMembership::OnS12 => "OnS12",
            SphereMembership::OnH02 => "OnH02",
            SphereMembership::Neither => "Neither",
        })
    }
}

pub fn sphere_membership(p: Vec3, tol: f64) -> SphereMembership {
    let q = minkowski_inner(p, p);
    if (q - 1.0).abs() <= tol {
        SphereMembership::OnS12
    } else if (q + 1.0).abs() <= tol {
        SphereMembership::OnH02
    } else {
        SphereMembership::Neither
    }
}
