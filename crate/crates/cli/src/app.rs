//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use mcurves::{Domain, IndicatrixKind, OffsetConvention, VerdictConfig};

use crate::commands::{self, FrenetReport, GeodesicReport, LiftSelection, WCurveKind};
use crate::error::{CliError, Result};
use crate::export::Format;
use crate::spec::CurveSpec;

#[derive(Debug, Parser)]
#[command(name = "mcurves", version, about = "Spacelike curves with timelike binormal in Minkowski 3-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frenet apparatus and Darboux data at chosen parameters.
    #[command(allow_negative_numbers = true)]
    Frenet {
        #[command(flatten)]
        source: Source,
        /// Comma-separated parameters; defaults to `--samples` points over the domain.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Sampled involute polyline.
    #[command(allow_negative_numbers = true)]
    Involute {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        c: Option<f64>,
        /// Use |c − s| as the offset length.
        #[arg(long)]
        abs_offset: bool,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Spherical indicatrix of the involute with natural-lift vectors.
    #[command(allow_negative_numbers = true)]
    Indicatrix {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        c: Option<f64>,
        /// tangent, normal or binormal.
        #[arg(long)]
        kind: IndicatrixKind,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Geodesic-spray verdicts for the natural lifts.
    #[command(name = "geodesic-check", allow_negative_numbers = true)]
    GeodesicCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "all")]
        kind: LiftSelection,
        /// Residual samples per verdict.
        #[arg(long)]
        samples: Option<usize>,
        /// Tolerance on the structural condition (constant ratio or curvature spread).
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// W-curve generator with a curvature round-trip summary.
    #[command(allow_negative_numbers = true)]
    Wcurve {
        #[arg(long, value_enum)]
        kind: WCurveKind,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        /// Domain as `min,max`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        domain: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
        /// Fail when a recovered curvature deviates by more than this.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// TOML curve description.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Built-in curve: example_3_1_7 or nonhelix.
    #[arg(long)]
    builtin: Option<String>,
}

impl Source {
    pub fn load(&self) -> Result<CurveSpec> {
        match (&self.spec, &self.builtin) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                CurveSpec::parse(&text)
            }
            (None, Some(name)) => CurveSpec::builtin(name),
            (None, None) => Err(CliError::Usage("one of --spec or --builtin is required".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, text: &str, stdout: &mut dyn Write) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
            None => match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                // A closed pipe (`| head`) is the reader's choice, not a failure.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
            },
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn frenet_csv(r: &FrenetReport) -> String {
    let mut out = format!("# label: {}\ns,kappa,tau,t1,t2,t3,n1,n2,n3,b1,b2,b3,case,theta,norm_omega\n", r.label);
    let real = |x: f64| format!("{x:.16e}");
    for row in &r.rows {
        let a = &row.apparatus;
        let mut f = vec![real(a.s), real(a.kappa), real(a.tau)];
        for v in a.frame() {
            f.extend(v.to_array().map(real));
        }
        f.push(row.case.map(|c| c.to_string()).unwrap_or_default());
        f.push(row.theta.map(real).unwrap_or_default());
        f.push(row.norm_omega.map(real).unwrap_or_default());
        out.push_str(&f.join(","));
        out.push('\n');
    }
    out
}

fn geodesic_csv(r: &GeodesicReport) -> String {
    let mut out = format!(
        "# label: {}\nkind,case,sphere,is_geodesic,reason,max_residual,condition_tol,residual_tol,sample_count,concordant\n",
        r.label
    );
    for v in &r.verdicts {
        let reason = serde_json::to_value(v.reason).ok().and_then(|x| x.as_str().map(String::from)).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{:.16e},{:e},{:e},{},{}\n",
            v.kind,
            v.case,
            v.sphere,
            v.is_geodesic,
            reason,
            v.max_residual,
            v.tolerances.condition,
            v.tolerances.residual,
            v.sample_count,
            v.concordant
        ));
    }
    out
}

/// Runs one invocation, writing the result to `stdout` or `--out`.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Frenet { source, at, samples, output } => {
            let spec = source.load()?;
            let at = if at.is_empty() { spec.domain.samples(samples.unwrap_or(11).max(2)) } else { at };
            let report = commands::cmd_frenet(&spec, &at)?;
            let text = match output.format {
                Format::Json => json(&report),
                Format::Csv => frenet_csv(&report),
            };
            output.emit(&text, stdout)
        }
        Command::Involute { source, c, abs_offset, samples, output } => {
            let spec = source.load()?;
            let offset = if abs_offset { OffsetConvention::Absolute } else { OffsetConvention::Signed };
            let e = commands::cmd_involute(&spec, c.unwrap_or(spec.c), offset, samples.unwrap_or(spec.n_samples))?;
            output.emit(&e.render(output.format)?, stdout)
        }
        Command::Indicatrix { source, c, kind, samples, output } => {
            let spec = source.load()?;
            let e = commands::cmd_indicatrix(&spec, c.unwrap_or(spec.c), kind, samples.unwrap_or(spec.n_samples))?;
            output.emit(&e.render(output.format)?, stdout)
        }
        Command::GeodesicCheck { source, kind, samples, tol, output } => {
            let spec = source.load()?;
            let mut cfg = VerdictConfig::default();
            if let Some(n) = samples {
                cfg.n_samples = n;
            }
            if let Some(t) = tol {
                cfg.condition_tol = t;
            }
            let report = commands::cmd_geodesic_check(&spec, kind, &cfg)?;
            let text = match output.format {
                Format::Json => json(&report),
                Format::Csv => geodesic_csv(&report),
            };
            output.emit(&text, stdout)
        }
        Command::Wcurve { kind, kappa, tau, domain, samples, tol, output } => {
            let domain = match domain.as_deref() {
                Some([a, b]) => Domain::new(*a, *b).map_err(|e| CliError::Usage(e.to_string()))?,
                Some(_) => return Err(CliError::Usage("--domain takes min,max".into())),
                None => mcurves::curve::DEFAULT_DOMAIN,
            };
            let (e, rt) = commands::cmd_wcurve(kind, kappa, tau, domain, samples.unwrap_or(crate::spec::DEFAULT_SAMPLES))?;
            if let Some(t) = tol {
                if rt.kappa_error > t || rt.tau_error > t {
                    return Err(CliError::Validation(format!(
                        "curvature round trip exceeds {t:e}: κ error {:e}, τ error {:e}",
                        rt.kappa_error, rt.tau_error
                    )));
                }
            }
            output.emit(&e.render(output.format)?, stdout)
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
///
/// Help and version requests exit 0, argument errors 1, and command errors
/// per [`CliError::exit_code`]. Negative verdicts are successful runs.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
