//! Frenet apparatus and Darboux data of unit-speed spacelike curves with
//! timelike binormal.
//!
//! Frame convention: `t = α′`, `n = α″/κ`, `b = t × n` with `g(t,t) = g(n,n) = 1`,
//! `g(b,b) = −1`, and
//!
//! ```text
//! t′ =  κ n
//! n′ = −κ t + τ b
//! b′ =  τ n
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curve::ParametricCurve;
use crate::diff;
use crate::error::{GeomError, Result};
use crate::lorentz::{lorentz_cross, minkowski_inner, pseudo_norm, CausalCharacter, Vec3};
use crate::par;

/// Tolerance on `|g(α′, α′) − 1|` for accepting a curve as unit-speed.
pub const UNIT_SPEED_TOL: f64 = 1e-6;
/// Curvature below this is treated as zero.
pub const KAPPA_TOL: f64 = 1e-9;
/// `|τ² − κ²| ≤ DARBOUX_TOL · max(1, κ², τ²)` counts as a null Darboux vector.
pub const DARBOUX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetApparatus {
    pub s: f64,
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub tau: f64,
}

impl FrenetApparatus {
    pub fn frame(&self) -> [Vec3; 3] {
        [self.t, self.n, self.b]
    }
}

/// Frenet frame, curvature and torsion at `s`.
///
/// Fails with `WrongCausalType` when the curve is not a unit-speed spacelike
/// curve with spacelike principal normal (so timelike binormal) at `s`.
pub fn frenet_apparatus(curve: &ParametricCurve, s: f64) -> Result<FrenetApparatus> {
    let [d1, d2, d3] = curve.jet(s)?;
    let speed = minkowski_inner(d1, d1);
    if speed <= 0.0 {
        return Err(GeomError::NotSpacelike { s, q: speed });
    }
    if (speed - 1.0).abs() > UNIT_SPEED_TOL {
        return Err(GeomError::WrongCausalType { s, detail: format!("curve is not unit-speed (g(α′, α′) = {speed})") });
    }
    let q = minkowski_inner(d2, d2);
    if d2.euclidean_norm() <= KAPPA_TOL || q.abs() <= KAPPA_TOL * KAPPA_TOL {
        return Err(GeomError::VanishingCurvature { s, kappa: q.abs().sqrt() });
    }
    if q < 0.0 {
        return Err(GeomError::WrongCausalType {
            s,
            detail: "principal normal is timelike, so the binormal is spacelike".into(),
        });
    }
    let kappa = q.sqrt();
    let t = d1;
    let n = d2 / kappa;
    let raw_b = lorentz_cross(t, n);
    let bb = minkowski_inner(raw_b, raw_b);
    if (bb + 1.0).abs() > UNIT_SPEED_TOL {
        return Err(GeomError::WrongCausalType { s, detail: format!("t × n is not unit timelike (g = {bb})") });
    }
    let b = raw_b / pseudo_norm(raw_b);
    let tau = minkowski_inner(lorentz_cross(d1, d3), d2) / (kappa * kappa);
    Ok(FrenetApparatus { s, t, n, b, kappa, tau })
}

/// Euclidean norms of the defects in the three Frenet equations, with frame
/// derivatives taken by central differences of `field` at step `h`.
pub fn frenet_residuals_of_field(
    field: impl Fn(f64) -> Result<FrenetApparatus>,
    s: f64,
    h: f64,
) -> Result<[f64; 3]> {
    let fr = field(s)?;
    let dt = diff::first(|x| field(x).map(|f| f.t), s, h)?;
    let dn = diff::first(|x| field(x).map(|f| f.n), s, h)?;
    let db = diff::first(|x| field(x).map(|f| f.b), s, h)?;
    let (k, w) = (fr.kappa, fr.tau);
    Ok([
        (dt - fr.n * k).euclidean_norm(),
        (dn - (fr.t * (-k) + fr.b * w)).euclidean_norm(),
        (db - fr.n * w).euclidean_norm(),
    ])
}

/// Frenet-equation defects of the curve's own frame field at `s`.
pub fn frenet_residuals(curve: &ParametricCurve, s: f64) -> Result<[f64; 3]> {
    frenet_residuals_of_field(|x| frenet_apparatus(curve, x), s, curve.field_steps().first)
}

/// Causal character of the Darboux vector `ω = τt − κb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DarbouxCase {
    /// `|κ| < |τ|`: ω spacelike.
    SpacelikeOmega,
    /// `|κ| > |τ|`: ω timelike.
    TimelikeOmega,
}

impl DarbouxCase {
    pub fn omega_character(self) -> CausalCharacter {
        match self {
            DarbouxCase::SpacelikeOmega => CausalCharacter::Spacelike,
            DarbouxCase::TimelikeOmega => CausalCharacter::Timelike,
        }
    }

    pub fn from_curvatures(kappa: f64, tau: f64) -> Option<DarbouxCase> {
        let q = tau * tau - kappa * kappa;
        if q.abs() <= DARBOUX_TOL * kappa.abs().max(tau.abs()).max(1.0).powi(2) {
            None
        } else if q > 0.0 {
            Some(DarbouxCase::SpacelikeOmega)
        } else {
            Some(DarbouxCase::TimelikeOmega)
        }
    }
}

impl fmt::Display for DarbouxCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DarbouxCase::SpacelikeOmega => "spacelike_omega",
            DarbouxCase::TimelikeOmega => "timelike_omega",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarbouxData {
    pub omega: Vec3,
    pub case: DarbouxCase,
    /// `‖ω‖ = √|τ² − κ²|`.
    pub norm_omega: f64,
    /// Lorentzian angle between ω and b (spacelike ω) or between ω and t (timelike ω).
    pub theta: f64,
    /// Unit Darboux direction `ω/‖ω‖`.
    pub c: Vec3,
}

/// Darboux vector, its case, angle θ and unit direction.
///
/// With spacelike ω, `tanh θ = κ/τ` and `c = cosh θ·t − sinh θ·b` (for τ > 0);
/// with timelike ω, `tanh θ = τ/κ` and `c = sinh θ·t − cosh θ·b`.
pub fn darboux(fr: &FrenetApparatus) -> Result<DarbouxData> {
    let (k, w) = (fr.kappa, fr.tau);
    let case = DarbouxCase::from_curvatures(k, w).ok_or(GeomError::NullDarboux { s: fr.s, kappa: k, tau: w })?;
    let omega = fr.t * w - fr.b * k;
    let norm_omega = (w * w - k * k).abs().sqrt();
    let theta = match case {
        DarbouxCase::SpacelikeOmega => (k / w).atanh(),
        DarbouxCase::TimelikeOmega => (w / k).atanh(),
    };
    Ok(DarbouxData { omega, case, norm_omega, theta, c: omega / norm_omega })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelixVerdict {
    pub is_helix: bool,
    /// Mean of τ/κ over the samples.
    pub ratio_mean: f64,
    /// `max |τ/κ − mean| / max(1, |mean|)`.
    pub ratio_max_dev: f64,
    pub samples: usize,
}

pub const DEFAULT_HELIX_SAMPLES: usize = 64;
pub const DEFAULT_HELIX_TOL: f64 = 1e-6;

/// Whether τ/κ is constant along the curve to relative tolerance `tol`.
pub fn is_general_helix(curve: &ParametricCurve, n_samples: usize, tol: f64) -> Result<HelixVerdict> {
    is_general_helix_with(curve, n_samples, tol, true)
}

/// [`is_general_helix`] with explicit control over parallel sampling.
pub fn is_general_helix_with(
    curve: &ParametricCurve,
    n_samples: usize,
    tol: f64,
    parallel: bool,
) -> Result<HelixVerdict> {
    if n_samples < 2 {
        return Err(GeomError::InvalidArgument("helix test needs at least 2 samples".into()));
    }
    let samples = curve.interior_samples(n_samples)?;
    let ratios = par::map(&samples, parallel, |s| frenet_apparatus(curve, s).map(|f| f.tau / f.kappa))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let dev = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean.abs().max(1.0);
    Ok(HelixVerdict { is_helix: dev <= tol, ratio_mean: mean, ratio_max_dev: dev, samples: ratios.len() })
}
