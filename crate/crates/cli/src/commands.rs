//! The five subcommands as library calls returning plain data.

use serde::Serialize;

use mcurves::frenet::{darboux, frenet_apparatus};
use mcurves::indicatrix::{verdict, BUNDLE_TOL};
use mcurves::{
    curve, indicatrix as make_indicatrix, involute, involute_causal_signature, natural_lift, par,
    sphere_membership, DarbouxCase, Domain, FrenetApparatus, GeodesicVerdict, GeomError, IndicatrixKind,
    OffsetConvention, ParametricCurve, SphericalCurve, VerdictConfig,
};

use crate::error::Result;
use crate::export::{ExportRow, PolylineExport, RowStatus};
use crate::spec::CurveSpec;

/// Tolerance stamped into indicatrix exports for sphere membership,
/// relative to `max(1, |p|²_E)`.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct FrenetRow {
    #[serde(flatten)]
    pub apparatus: FrenetApparatus,
    /// `None` where `|κ| = |τ|` and the Darboux vector is null.
    pub case: Option<DarbouxCase>,
    pub theta: Option<f64>,
    pub norm_omega: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrenetReport {
    pub label: String,
    pub rows: Vec<FrenetRow>,
}

/// Frenet apparatus and Darboux data at each parameter in `at`.
pub fn cmd_frenet(spec: &CurveSpec, at: &[f64]) -> Result<FrenetReport> {
    let curve = spec.build()?;
    let rows: Vec<Result<FrenetRow>> = par::map(at, true, |s| {
        let fr = frenet_apparatus(&curve, s)?;
        let dd = match darboux(&fr) {
            Ok(d) => Some(d),
            Err(GeomError::NullDarboux { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        Ok(FrenetRow {
            apparatus: fr,
            case: dd.map(|d| d.case),
            theta: dd.map(|d| d.theta),
            norm_omega: dd.map(|d| d.norm_omega),
        })
    });
    Ok(FrenetReport { label: curve.label().to_string(), rows: rows.into_iter().collect::<Result<_>>()? })
}

fn case_of(curve: &ParametricCurve) -> Option<DarbouxCase> {
    mcurves::indicatrix::uniform_case(curve, 64).ok()
}

/// Involute `α + (c − s)t` sampled over the curve file's domain.
pub fn cmd_involute(spec: &CurveSpec, c: f64, offset: OffsetConvention, n_samples: usize) -> Result<PolylineExport> {
    let curve = spec.build()?;
    let inv = involute(&curve, c)?.with_offset(offset);
    let samples = spec.domain.samples(n_samples);
    let mut e = PolylineExport::new("involute", curve.label());
    e.meta_real("c", c);
    e.meta_real("guard", inv.guard());
    e.meta("offset", format!("{offset:?}").to_lowercase());
    e.meta("domain", spec.domain);
    e.meta("samples", n_samples);
    if let Some(case) = case_of(&curve) {
        e.meta("case", case);
        let sig = involute_causal_signature(case);
        e.meta("causal_signature", format!("{},{},{}", sig[0], sig[1], sig[2]));
    }
    let rows = par::map(&samples, true, |s| -> Result<ExportRow> {
        if inv.in_guard(s) {
            return Ok(ExportRow { s, point: None, lift: None, status: RowStatus::Guard, membership: None });
        }
        let p = inv.point(s)?;
        if !p.is_finite() {
            return Err(GeomError::NonFinite { s }.into());
        }
        Ok(ExportRow { s, point: Some(p.to_array()), lift: None, status: RowStatus::Ok, membership: None })
    });
    e.rows = rows.into_iter().collect::<Result<_>>()?;
    Ok(e)
}

/// Indicatrix of the involute with its natural-lift vectors.
///
/// Samples whose lift vanishes are flagged `degenerate` with a zero vector;
/// when every non-guard sample is degenerate the indicatrix is a point and
/// the export collapses to that single row.
pub fn cmd_indicatrix(spec: &CurveSpec, c: f64, kind: IndicatrixKind, n_samples: usize) -> Result<PolylineExport> {
    let curve = spec.build()?;
    let inv = involute(&curve, c)?;
    let ind = make_indicatrix(&inv, kind)?;
    let floor = ind.speed_floor();
    let lift_tol = if floor <= 1e-6 { BUNDLE_TOL } else { 1e-5 };
    let samples = spec.domain.samples(n_samples);
    let mut e = PolylineExport::new("indicatrix", curve.label());
    e.meta("kind", kind);
    e.meta("case", ind.case());
    e.meta("sphere", ind.sphere());
    e.meta_real("c", c);
    e.meta_real("guard", inv.guard());
    e.meta("domain", spec.domain);
    e.meta("samples", n_samples);
    e.meta_real("membership_tol", MEMBERSHIP_TOL);
    e.meta_real("lift_tol", lift_tol);
    e.meta_real("speed_floor", floor);
    let rows = par::map(&samples, true, |s| -> Result<ExportRow> {
        if ind.in_guard(s) {
            return Ok(ExportRow { s, point: None, lift: None, status: RowStatus::Guard, membership: None });
        }
        let p = ind.point(s)?;
        let membership = Some(sphere_membership(p, MEMBERSHIP_TOL * p.euclidean_norm_sq().max(1.0)));
        let v = ind.velocity(s)?;
        if v.euclidean_norm() <= floor * p.euclidean_norm().max(1.0) {
            return Ok(ExportRow { s, point: Some(p.to_array()), lift: Some([0.0; 3]), status: RowStatus::Degenerate, membership });
        }
        let lift = natural_lift(&ind, s)?;
        Ok(ExportRow { s, point: Some(p.to_array()), lift: Some(lift.vector.to_array()), status: RowStatus::Ok, membership })
    });
    let rows: Vec<ExportRow> = rows.into_iter().collect::<Result<_>>()?;
    let live: Vec<&ExportRow> = rows.iter().filter(|r| r.status != RowStatus::Guard).collect();
    if !live.is_empty() && live.iter().all(|r| r.status == RowStatus::Degenerate) {
        e.meta("constant", true);
        e.rows = vec![live[0].clone()];
    } else {
        e.rows = rows;
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum LiftSelection {
    Tangent,
    Normal,
    Binormal,
    All,
}

impl LiftSelection {
    pub fn kinds(self) -> Vec<IndicatrixKind> {
        match self {
            LiftSelection::Tangent => vec![IndicatrixKind::Tangent],
            LiftSelection::Normal => vec![IndicatrixKind::PrincipalNormal],
            LiftSelection::Binormal => vec![IndicatrixKind::Binormal],
            LiftSelection::All => IndicatrixKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeodesicReport {
    pub label: String,
    pub verdicts: Vec<GeodesicVerdict>,
}

/// Geodesic-spray verdicts for the natural lifts of the selected indicatrices.
pub fn cmd_geodesic_check(spec: &CurveSpec, which: LiftSelection, cfg: &VerdictConfig) -> Result<GeodesicReport> {
    let curve = spec.build()?;
    let verdicts = which.kinds().into_iter().map(|k| verdict(&curve, k, cfg)).collect::<mcurves::Result<_>>()?;
    Ok(GeodesicReport { label: curve.label().to_string(), verdicts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WCurveKind {
    Hyperbolic,
    Circular,
    Circle,
}

/// Largest deviations of the recomputed apparatus from the requested values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTrip {
    pub kappa_error: f64,
    pub tau_error: f64,
    pub unit_speed_error: f64,
}

/// W-curve for `(κ, τ)` sampled over `domain`, with the recovered
/// curvatures compared to the requested ones.
pub fn cmd_wcurve(kind: WCurveKind, kappa: f64, tau: f64, domain: Domain, n_samples: usize) -> Result<(PolylineExport, RoundTrip)> {
    let tau = if kind == WCurveKind::Circle { 0.0 } else { tau };
    let build = |d: Domain| match kind {
        WCurveKind::Hyperbolic => curve::w_curve_hyperbolic_helix(kappa, tau, d),
        WCurveKind::Circular => curve::w_curve_circular_helix(kappa, tau, d),
        WCurveKind::Circle => curve::w_curve_circle(kappa, d),
    };
    let probe = build(domain)?;
    let curve = probe.clone().with_domain(domain.pad(probe.field_margin()));
    let samples = domain.samples(n_samples);
    let rows = par::map(&samples, true, |s| -> Result<(ExportRow, RoundTrip)> {
        let fr = frenet_apparatus(&curve, s)?;
        let speed = curve.derivative(s, 1)?;
        let rt = RoundTrip {
            kappa_error: (fr.kappa - kappa).abs(),
            tau_error: (fr.tau - tau).abs(),
            unit_speed_error: (speed.g(speed) - 1.0).abs(),
        };
        let p = curve.point(s)?;
        Ok((ExportRow { s, point: Some(p.to_array()), lift: None, status: RowStatus::Ok, membership: None }, rt))
    });
    let mut worst = RoundTrip { kappa_error: 0.0, tau_error: 0.0, unit_speed_error: 0.0 };
    let mut e = PolylineExport::new("wcurve", curve.label());
    for r in rows {
        let (row, rt) = r?;
        worst.kappa_error = worst.kappa_error.max(rt.kappa_error);
        worst.tau_error = worst.tau_error.max(rt.tau_error);
        worst.unit_speed_error = worst.unit_speed_error.max(rt.unit_speed_error);
        e.rows.push(row);
    }
    e.meta("kind", format!("{kind:?}").to_lowercase());
    e.meta_real("kappa", kappa);
    e.meta_real("tau", tau);
    e.meta("domain", domain);
    e.meta("samples", n_samples);
    e.meta_real("kappa_error", worst.kappa_error);
    e.meta_real("tau_error", worst.tau_error);
    e.meta_real("unit_speed_error", worst.unit_speed_error);
    Ok((e, worst))
}
