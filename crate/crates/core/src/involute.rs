//! Involutes `α* = α + (c − s)t` of spacelike evolutes with timelike binormal,
//! and the transfer of the evolute's Frenet frame to the involute.

use serde::{Deserialize, Serialize};

use crate::curve::ParametricCurve;
use crate::diff;
use crate::error::{GeomError, Result};
use crate::frenet::{darboux, frenet_apparatus, DarbouxCase, DarbouxData, FrenetApparatus};
use crate::lorentz::{causal_character, lorentz_cross, minkowski_inner, pseudo_norm, CausalCharacter, Vec3, CAUSAL_TOL};

/// Offset used in `α* = α + offset·t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OffsetConvention {
    /// `c − s`: smooth through `s = c`, the usual involute.
    #[default]
    Signed,
    /// `|c − s|`: folds the branch `s > c` back; equal to `Signed` for `s ≤ c`.
    Absolute,
}

/// Relative width of the excluded band around `s = c`.
pub const GUARD_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct InvoluteCurve {
    evolute: ParametricCurve,
    c: f64,
    offset: OffsetConvention,
    guard: f64,
}

/// Involute of `evolute` with constant `c`.
pub fn involute(evolute: &ParametricCurve, c: f64) -> Result<InvoluteCurve> {
    if !c.is_finite() {
        return Err(GeomError::InvalidArgument(format!("involute constant must be finite, got {c}")));
    }
    Ok(InvoluteCurve {
        evolute: evolute.clone(),
        c,
        offset: OffsetConvention::Signed,
        guard: GUARD_FRACTION * evolute.domain().len(),
    })
}

impl InvoluteCurve {
    pub fn with_offset(mut self, offset: OffsetConvention) -> Self {
        self.offset = offset;
        self
    }

    pub fn evolute(&self) -> &ParametricCurve {
        &self.evolute
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn offset(&self) -> OffsetConvention {
        self.offset
    }

    /// Half-width of the excluded band around `s = c`.
    pub fn guard(&self) -> f64 {
        self.guard
    }

    pub fn in_guard(&self, s: f64) -> bool {
        (s - self.c).abs() <= self.guard
    }

    pub fn check_guard(&self, s: f64) -> Result<()> {
        if self.in_guard(s) {
            Err(GeomError::SingularParameter { s, c: self.c })
        } else {
            Ok(())
        }
    }

    fn coefficient(&self, s: f64) -> f64 {
        match self.offset {
            OffsetConvention::Signed => self.c - s,
            OffsetConvention::Absolute => (self.c - s).abs(),
        }
    }

    /// `α*(s)`.
    pub fn point(&self, s: f64) -> Result<Vec3> {
        self.check_guard(s)?;
        self.point_unguarded(s)
    }

    /// `α*(s)` without the guard; the point itself is finite at `s = c`.
    pub fn point_unguarded(&self, s: f64) -> Result<Vec3> {
        let p = self.evolute.point(s)?;
        let t = self.evolute.derivative(s, 1)?;
        Ok(p + t * self.coefficient(s))
    }

    /// `α*′(s) = (c − s)κ n` from the evolute's Frenet data.
    ///
    /// Under the absolute convention the folded branch `s > c` picks up
    /// `2t + (s − c)κ n`.
    pub fn derivative(&self, s: f64) -> Result<Vec3> {
        self.check_guard(s)?;
        let fr = frenet_apparatus(&self.evolute, s)?;
        let along_n = fr.n * ((self.c - s) * fr.kappa);
        Ok(match self.offset {
            OffsetConvention::Absolute if s > self.c => fr.t * 2.0 - along_n,
            _ => along_n,
        })
    }
}

/// Orientation of an emitted frame vector relative to the matrix rows
/// `n*_row`, `b*_row` (see [`involute_frame_transfer`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSign {
    Same,
    Opposite,
}

impl RowSign {
    pub fn factor(self) -> f64 {
        match self {
            RowSign::Same => 1.0,
            RowSign::Opposite => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvoluteFrame {
    pub s: f64,
    pub t_star: Vec3,
    pub n_star: Vec3,
    pub b_star: Vec3,
    pub case: DarbouxCase,
    pub causal_signature: [CausalCharacter; 3],
    pub n_sign: RowSign,
    pub b_sign: RowSign,
}

impl InvoluteFrame {
    pub fn vectors(&self) -> [Vec3; 3] {
        [self.t_star, self.n_star, self.b_star]
    }
}

/// Causal characters of `(t*, n*, b*)` for each Darboux case.
pub fn involute_causal_signature(case: DarbouxCase) -> [CausalCharacter; 3] {
    use CausalCharacter::*;
    match case {
        DarbouxCase::SpacelikeOmega => [Spacelike, Timelike, Spacelike],
        DarbouxCase::TimelikeOmega => [Spacelike, Spacelike, Timelike],
    }
}

/// Tolerance on the transferred frame's orthonormality.
pub const FRAME_TOL: f64 = 1e-8;

/// Involute frame expressed through the evolute's frame and θ.
///
/// In terms of the evolute frame the rows are
///
/// ```text
/// spacelike ω:  n*_row =  sinh θ t − cosh θ b,   b*_row = −cosh θ t + sinh θ b
/// timelike ω:   n*_row = −cosh θ t + sinh θ b,   b*_row = −sinh θ t + cosh θ b
/// ```
///
/// with `t* = n` in both cases. The emitted vectors are oriented by rule:
/// `n*` points along `(t*)′ = −κ t + τ b`, and `b*` is the unit Darboux
/// direction `c`, which equals `−t* × n*`. `n_sign` and `b_sign` record how
/// the emitted vectors relate to the rows.
pub fn involute_frame_transfer(fr: &FrenetApparatus, dd: &DarbouxData) -> Result<InvoluteFrame> {
    let (sh, ch) = (dd.theta.sinh(), dd.theta.cosh());
    let (t, b) = (fr.t, fr.b);
    let (n_row, b_row) = match dd.case {
        DarbouxCase::SpacelikeOmega => (t * sh - b * ch, t * (-ch) + b * sh),
        DarbouxCase::TimelikeOmega => (t * (-ch) + b * sh, t * (-sh) + b * ch),
    };
    let n_dir = t * (-fr.kappa) + b * fr.tau;
    let n_sign = aligned(n_row, n_dir);
    let b_sign = aligned(b_row, dd.c);
    let frame = InvoluteFrame {
        s: fr.s,
        t_star: fr.n,
        n_star: n_row * n_sign.factor(),
        b_star: b_row * b_sign.factor(),
        case: dd.case,
        causal_signature: involute_causal_signature(dd.case),
        n_sign,
        b_sign,
    };
    validate_frame(&frame)?;
    Ok(frame)
}

fn aligned(row: Vec3, target: Vec3) -> RowSign {
    if minkowski_inner(row, target) * minkowski_inner(row, row) >= 0.0 {
        RowSign::Same
    } else {
        RowSign::Opposite
    }
}

fn validate_frame(f: &InvoluteFrame) -> Result<()> {
    let vs = f.vectors();
    let names = ["t*", "n*", "b*"];
    for (i, (v, ch)) in vs.iter().zip(f.causal_signature).enumerate() {
        let target = if ch == CausalCharacter::Timelike { -1.0 } else { 1.0 };
        let scale = v.euclidean_norm_sq().max(1.0);
        let q = minkowski_inner(*v, *v);
        if (q - target).abs() > FRAME_TOL * scale {
            return Err(GeomError::FrameInconsistent {
                detail: format!("g({0}, {0}) = {q} at s = {1}, expected {target}", names[i], f.s),
            });
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let scale = (vs[i].euclidean_norm() * vs[j].euclidean_norm()).max(1.0);
        let q = minkowski_inner(vs[i], vs[j]);
        if q.abs() > FRAME_TOL * scale {
            return Err(GeomError::FrameInconsistent {
                detail: format!("g({}, {}) = {q} at s = {}", names[i], names[j], f.s),
            });
        }
    }
    Ok(())
}

/// Frenet data and Darboux data of the evolute at `s`, then the transferred frame.
pub fn transfer_at(evolute: &ParametricCurve, s: f64) -> Result<(FrenetApparatus, DarbouxData, InvoluteFrame)> {
    let fr = frenet_apparatus(evolute, s)?;
    let dd = darboux(&fr)?;
    let frame = involute_frame_transfer(&fr, &dd)?;
    Ok((fr, dd, frame))
}

/// Involute frame computed from derivatives of `α*` alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericFrame {
    pub s: f64,
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub characters: [CausalCharacter; 3],
}

impl NumericFrame {
    pub fn vectors(&self) -> [Vec3; 3] {
        [self.t, self.n, self.b]
    }
}

/// Frame of the involute obtained by differencing its evaluator: `t` is the
/// normalized velocity, `n` the normalized part of the acceleration
/// g-orthogonal to `t`, and `b = t × n`. Each vector is normalized by its
/// pseudo-norm and tagged with its causal character.
pub fn involute_frenet_numeric(inv: &InvoluteCurve, s: f64) -> Result<NumericFrame> {
    inv.check_guard(s)?;
    let steps = inv.evolute().field_steps();
    let eval = |x: f64| inv.point_unguarded(x);
    // Stencils must not straddle the singular point.
    let reach = 2.0 * steps.second;
    if (s - inv.c()).abs() <= reach + inv.guard() {
        return Err(GeomError::SingularParameter { s, c: inv.c() });
    }
    let d1 = diff::first(eval, s, steps.first)?;
    let d2 = diff::second(eval, s, steps.second)?;
    let speed = pseudo_norm(d1);
    if speed <= 1e-12 * d1.euclidean_norm().max(1.0) {
        return Err(GeomError::DegenerateSpeed { s });
    }
    let t = d1 / speed;
    let normal = d2 - t * (minkowski_inner(d2, t) / minkowski_inner(t, t));
    let curv = pseudo_norm(normal);
    if curv <= 1e-9 * normal.euclidean_norm().max(1.0) {
        return Err(GeomError::VanishingCurvature { s, kappa: curv });
    }
    let n = normal / curv;
    let cross = lorentz_cross(t, n);
    let b = cross / pseudo_norm(cross);
    let characters = [
        causal_character(t, CAUSAL_TOL),
        causal_character(n, CAUSAL_TOL),
        causal_character(b, CAUSAL_TOL),
    ];
    Ok(NumericFrame { s, t, n, b, characters })
}

/// Largest Euclidean discrepancy between corresponding vectors, each compared
/// up to sign.
pub fn frame_discrepancy_up_to_sign(a: [Vec3; 3], b: [Vec3; 3]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (*u - v).euclidean_norm().min((*u + v).euclidean_norm()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{w_curve_circular_helix, worked_example, DEFAULT_DOMAIN};
    use std::f64::consts::SQRT_2;

    fn close(a: Vec3, b: Vec3, tol: f64) {
        assert!(a.max_abs_diff(b) <= tol, "{a} vs {b}");
    }

    #[test]
    fn example_point_and_guard() {
        let inv = involute(&worked_example(DEFAULT_DOMAIN), 2.0).unwrap();
        close(inv.point(0.0).unwrap(), Vec3::new(2.0, 1.0, 2.0 * SQRT_2), 1e-14);
        assert!(matches!(inv.point(2.0), Err(GeomError::SingularParameter { .. })));
        assert!(matches!(inv.derivative(2.0), Err(GeomError::SingularParameter { .. })));
    }

    #[test]
    fn involute_tangent_is_normal_to_evolute() {
        let ev = worked_example(DEFAULT_DOMAIN);
        let inv = involute(&ev, 2.0).unwrap();
        let d = inv.derivative(1.0).unwrap();
        let fr = frenet_apparatus(&ev, 1.0).unwrap();
        assert!(minkowski_inner(d, fr.t).abs() <= 1e-12);
        assert!(minkowski_inner(d, fr.b).abs() <= 1e-12);
    }

    #[test]
    fn offset_conventions() {
        let ev = worked_example(DEFAULT_DOMAIN);
        let signed = involute(&ev, 2.0).unwrap();
        let abs = signed.clone().with_offset(OffsetConvention::Absolute);
        close(signed.point(-1.0).unwrap(), abs.point(-1.0).unwrap(), 0.0);
        let fr = frenet_apparatus(&ev, 3.0).unwrap();
        // The two branches differ by 2(s − c)t for s > c.
        close(abs.point(3.0).unwrap() - signed.point(3.0).unwrap(), fr.t * 2.0, 1e-12);
        let fd = diff::first(|x| abs.point(x), 3.0, 1e-4).unwrap();
        close(abs.derivative(3.0).unwrap(), fd, 1e-7);
    }

    #[test]
    fn example_transfer_matches_printed_values() {
        let ev = worked_example(DEFAULT_DOMAIN);
        for s in [-1.0, 0.0, 1.5] {
            let (_, _, f) = transfer_at(&ev, s).unwrap();
            close(f.t_star, Vec3::new(s.sinh(), s.cosh(), 0.0), 1e-12);
            close(f.n_star, Vec3::new(s.cosh(), s.sinh(), 0.0), 1e-12);
            close(f.b_star, Vec3::new(0.0, 0.0, 1.0), 1e-12);
            assert_eq!(f.n_sign, RowSign::Opposite);
            assert_eq!(f.b_sign, RowSign::Opposite);
        }
    }

    #[test]
    fn timelike_case_signature() {
        let ev = w_curve_circular_helix(2.0, 1.0, DEFAULT_DOMAIN).unwrap();
        let (fr, dd, f) = transfer_at(&ev, 0.4).unwrap();
        assert_eq!(f.case, DarbouxCase::TimelikeOmega);
        assert_eq!(f.n_sign, RowSign::Same);
        assert_eq!(f.b_sign, RowSign::Opposite);
        assert!((minkowski_inner(f.b_star, f.b_star) + 1.0).abs() < 1e-12);
        close(f.b_star, -lorentz_cross(f.t_star, f.n_star), 1e-12);
        close(f.t_star, fr.n, 0.0);
        close(f.b_star, dd.c, 1e-15);
    }

    #[test]
    fn signatures() {
        use CausalCharacter::*;
        assert_eq!(involute_causal_signature(DarbouxCase::SpacelikeOmega), [Spacelike, Timelike, Spacelike]);
        assert_eq!(involute_causal_signature(DarbouxCase::TimelikeOmega), [Spacelike, Spacelike, Timelike]);
    }

    #[test]
    fn numeric_frame_example() {
        let inv = involute(&worked_example(DEFAULT_DOMAIN), 2.0).unwrap();
        let nf = involute_frenet_numeric(&inv, 1.0).unwrap();
        let expect = Vec3::new(1f64.sinh(), 1f64.cosh(), 0.0);
        assert!((nf.t - expect).euclidean_norm().min((nf.t + expect).euclidean_norm()) <= 1e-6);
        assert_eq!(nf.characters, involute_causal_signature(DarbouxCase::SpacelikeOmega));
        assert!(matches!(involute_frenet_numeric(&inv, 2.0), Err(GeomError::SingularParameter { .. })));
    }
}
