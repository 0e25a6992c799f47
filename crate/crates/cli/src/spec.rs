//! TOML curve descriptions.
//!
//! A curve file is a TOML document with a `type` tag and the parameters for that
//! type:
//!
//! ```toml
//! type = "closed_form"          # or sampled | prescribed | w_hyperbolic |
//!                               #    w_circular | w_circle | example_3_1_7
//! x1 = "sinh(s)"
//! x2 = "cosh(s)"
//! x3 = "sqrt(2)*s"
//! domain = [-5, 5]              # optional, default [-5, 5]
//! c = 2                         # optional involute constant, default 2
//! n_samples = 501               # optional, default 501
//! ```
//!
//! `sampled` takes the same coordinate expressions but differentiates by
//! central differences (optional step `h`). `prescribed` integrates the
//! Frenet equations for curvature expressions `kappa`, `tau` from `anchor`.
//! The W-curve types take `kappa` and `tau`, either numbers or constant
//! expressions such as `"sqrt(2)"`.

use serde::Deserialize;

use mcurves::curve::{self, DEFAULT_FD_STEP};
use mcurves::{Domain, Expr, ExprCurve, ParametricCurve};

use crate::error::{CliError, Result};

pub const DEFAULT_C: f64 = 2.0;
pub const DEFAULT_SAMPLES: usize = 501;
pub const EXAMPLE_TAG: &str = "example_3_1_7";
pub const NONHELIX_TAG: &str = "nonhelix";

/// A number or a constant expression.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Number(f64),
    Expression(String),
}

impl Param {
    pub fn value(&self, name: &str) -> Result<f64> {
        match self {
            Param::Number(x) => Ok(*x),
            Param::Expression(src) => {
                let e = Expr::parse(src).map_err(|e| CliError::InvalidSpec(format!("{name}: {e}")))?;
                if e.depends_on_var() {
                    return Err(CliError::InvalidSpec(format!("{name} must be constant, got '{src}'")));
                }
                Ok(e.eval(0.0))
            }
        }
    }

    fn source(&self) -> String {
        match self {
            Param::Number(x) => x.to_string(),
            Param::Expression(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveType {
    ClosedForm,
    Sampled,
    Prescribed,
    WHyperbolic,
    WCircular,
    WCircle,
    Example,
}

impl CurveType {
    fn parse(tag: &str) -> Result<Self> {
        Ok(match tag {
            "closed_form" => CurveType::ClosedForm,
            "sampled" => CurveType::Sampled,
            "prescribed" => CurveType::Prescribed,
            "w_hyperbolic" => CurveType::WHyperbolic,
            "w_circular" => CurveType::WCircular,
            "w_circle" => CurveType::WCircle,
            EXAMPLE_TAG => CurveType::Example,
            other => return Err(CliError::InvalidSpec(format!("unknown curve type '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(rename = "type")]
    kind: String,
    label: Option<String>,
    x1: Option<String>,
    x2: Option<String>,
    x3: Option<String>,
    h: Option<f64>,
    kappa: Option<Param>,
    tau: Option<Param>,
    anchor: Option<f64>,
    domain: Option<[f64; 2]>,
    c: Option<Param>,
    n_samples: Option<usize>,
}

/// Parsed and checked curve description.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub kind: CurveType,
    pub label: String,
    pub coords: Option<[String; 3]>,
    pub h: Option<f64>,
    pub kappa: Option<Param>,
    pub tau: Option<Param>,
    pub anchor: Option<f64>,
    pub domain: Domain,
    pub c: f64,
    pub n_samples: usize,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl CurveSpec {
    pub fn parse(src: &str) -> Result<Self> {
        let raw: RawSpec = toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |span| line_col(src, span.start));
            CliError::Spec { line, column, message: e.message().to_string() }
        })?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawSpec) -> Result<Self> {
        let kind = CurveType::parse(&raw.kind)?;
        let domain = match raw.domain {
            Some([a, b]) => Domain::new(a, b).map_err(|e| CliError::InvalidSpec(e.to_string()))?,
            None => curve::DEFAULT_DOMAIN,
        };
        let n_samples = raw.n_samples.unwrap_or(DEFAULT_SAMPLES);
        if n_samples < 2 {
            return Err(CliError::InvalidSpec("n_samples must be at least 2".into()));
        }
        let c = match &raw.c {
            Some(p) => p.value("c")?,
            None => DEFAULT_C,
        };
        let needs = |present: bool, field: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::InvalidSpec(format!("type '{}' requires '{field}'", raw.kind)))
            }
        };
        let coords = match kind {
            CurveType::ClosedForm | CurveType::Sampled => {
                needs(raw.x1.is_some(), "x1")?;
                needs(raw.x2.is_some(), "x2")?;
                needs(raw.x3.is_some(), "x3")?;
                Some([raw.x1.clone().unwrap(), raw.x2.clone().unwrap(), raw.x3.clone().unwrap()])
            }
            _ => None,
        };
        match kind {
            CurveType::Prescribed | CurveType::WHyperbolic | CurveType::WCircular => {
                needs(raw.kappa.is_some(), "kappa")?;
                needs(raw.tau.is_some(), "tau")?;
            }
            CurveType::WCircle => needs(raw.kappa.is_some(), "kappa")?,
            _ => {}
        }
        let label = raw.label.clone().unwrap_or_else(|| raw.kind.clone());
        Ok(Self {
            kind,
            label,
            coords,
            h: raw.h,
            kappa: raw.kappa,
            tau: raw.tau,
            anchor: raw.anchor,
            domain,
            c,
            n_samples,
        })
    }

    /// Built-in specs: the worked example and the non-helix control.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            EXAMPLE_TAG => Self::parse(&format!("type = \"{EXAMPLE_TAG}\"")),
            NONHELIX_TAG => Self::parse(
                "type = \"prescribed\"\nlabel = \"nonhelix\"\nkappa = \"1\"\ntau = \"s\"\nanchor = 1.5\ndomain = [1.5, 4]\nc = 1",
            ),
            other => Err(CliError::Usage(format!(
                "unknown builtin '{other}' (available: {EXAMPLE_TAG}, {NONHELIX_TAG})"
            ))),
        }
    }

    /// The curve, defined on the declared domain widened by the margin its
    /// difference stencils need, so that every sample of the declared domain
    /// (endpoints included) can be evaluated.
    pub fn build(&self) -> Result<ParametricCurve> {
        let curve = self.build_on(self.domain)?;
        let padded = self.domain.pad(curve.field_margin());
        Ok(match self.kind {
            CurveType::Prescribed => self.build_on(padded)?,
            _ => curve.with_domain(padded),
        })
    }

    fn param(&self, p: &Option<Param>, name: &str) -> Result<f64> {
        p.as_ref().expect("checked at parse time").value(name)
    }

    fn build_on(&self, domain: Domain) -> Result<ParametricCurve> {
        let curve = match self.kind {
            CurveType::Example => curve::worked_example(domain),
            CurveType::ClosedForm | CurveType::Sampled => {
                let [x1, x2, x3] = self.coords.as_ref().expect("checked at parse time");
                let map = ExprCurve::parse(x1, x2, x3).map_err(CliError::from)?;
                if self.kind == CurveType::Sampled {
                    ParametricCurve::new(&self.label, domain, map.point_only())
                        .with_finite_differences(self.h.unwrap_or(DEFAULT_FD_STEP))
                } else {
                    ParametricCurve::new(&self.label, domain, map)
                }
            }
            CurveType::Prescribed => {
                let (k, t) = (self.kappa.as_ref().unwrap().source(), self.tau.as_ref().unwrap().source());
                let anchor = self.anchor.unwrap_or(self.domain.min);
                curve::prescribed_curvature(&k, &t, anchor, domain)?.with_label(&self.label)
            }
            CurveType::WHyperbolic => {
                curve::w_curve_hyperbolic_helix(self.param(&self.kappa, "kappa")?, self.param(&self.tau, "tau")?, domain)?
            }
            CurveType::WCircular => {
                curve::w_curve_circular_helix(self.param(&self.kappa, "kappa")?, self.param(&self.tau, "tau")?, domain)?
            }
            CurveType::WCircle => curve::w_curve_circle(self.param(&self.kappa, "kappa")?, domain)?,
        };
        Ok(curve)
    }
}
