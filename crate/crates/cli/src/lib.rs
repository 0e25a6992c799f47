//! Library side of the `mcurves` command-line tool: curve specs, commands
//! and polyline exports.

pub mod app;
pub mod commands;
pub mod error;
pub mod export;
pub mod spec;

pub use app::run;
pub use commands::{cmd_frenet, cmd_geodesic_check, cmd_indicatrix, cmd_involute, cmd_wcurve, LiftSelection, WCurveKind};
pub use error::{CliError, Result};
pub use export::{validate_export, ExportRow, Format, PolylineExport, RowStatus, ValidationSummary};
pub use spec::CurveSpec;
