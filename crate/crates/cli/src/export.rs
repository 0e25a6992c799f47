//! Polyline exports in CSV and JSON.
//!
//! Both formats carry the same data: a label, an object name, string
//! metadata and one row per sample. CSV writes metadata as leading
//! `# key: value` lines and reals in 17-digit scientific notation, so a CSV
//! export parses back to exactly the values a JSON export holds.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use mcurves::{minkowski_inner, sphere_membership, Sphere, SphereMembership, Vec3};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// Inside the excluded band around the involute's singular point.
    Guard,
    /// Natural lift vanishes to within the curve's speed floor.
    Degenerate,
}

impl RowStatus {
    fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Guard => "guard",
            RowStatus::Degenerate => "degenerate",
        }
    }
}

impl FromStr for RowStatus {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(RowStatus::Ok),
            "guard" => Ok(RowStatus::Guard),
            "degenerate" => Ok(RowStatus::Degenerate),
            other => Err(CliError::Validation(format!("unknown row status '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportRow {
    pub s: f64,
    pub point: Option<[f64; 3]>,
    /// Natural-lift vector, for indicatrix exports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<[f64; 3]>,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<SphereMembership>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolylineExport {
    pub object: String,
    pub label: String,
    pub metadata: BTreeMap<String, String>,
    pub rows: Vec<ExportRow>,
}

fn parse_membership(s: &str) -> Result<SphereMembership> {
    match s {
        "OnS12" => Ok(SphereMembership::OnS12),
        "OnH02" => Ok(SphereMembership::OnH02),
        "Neither" => Ok(SphereMembership::Neither),
        other => Err(CliError::Validation(format!("unknown membership '{other}'"))),
    }
}

fn parse_sphere(s: &str) -> Result<Sphere> {
    match s {
        "S12" => Ok(Sphere::S12),
        "H02" => Ok(Sphere::H02),
        other => Err(CliError::Validation(format!("unknown sphere '{other}'"))),
    }
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

impl PolylineExport {
    pub fn new(object: &str, label: &str) -> Self {
        Self { object: object.into(), label: label.into(), metadata: BTreeMap::new(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    /// Real-valued metadata in shortest round-trip form.
    pub fn meta_real(&mut self, key: &str, value: f64) {
        self.metadata.insert(key.into(), format!("{value:?}"));
    }

    fn meta_f64(&self, key: &str) -> Result<Option<f64>> {
        self.metadata
            .get(key)
            .map(|v| v.parse::<f64>().map_err(|_| CliError::Validation(format!("metadata {key} = '{v}' is not a number"))))
            .transpose()
    }

    fn has_lift(&self) -> bool {
        self.rows.iter().any(|r| r.lift.is_some())
    }

    fn has_membership(&self) -> bool {
        self.rows.iter().any(|r| r.membership.is_some())
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_string_pretty(self).map_err(|e| CliError::Validation(e.to_string()))?;
                out.push('\n');
                Ok(out)
            }
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        writeln!(out, "# object: {}", self.object).unwrap();
        writeln!(out, "# label: {}", self.label).unwrap();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        let (lift, membership) = (self.has_lift(), self.has_membership());
        let mut header = vec!["s", "x1", "x2", "x3"];
        if lift {
            header.extend(["v1", "v2", "v3"]);
        }
        header.push("status");
        if membership {
            header.push("membership");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Validation(e.to_string());
        w.write_record(&header).map_err(csv_err)?;
        let triple = |v: Option<[f64; 3]>| match v {
            Some(a) => a.map(real).to_vec(),
            None => vec![String::new(); 3],
        };
        for r in &self.rows {
            let mut rec = vec![real(r.s)];
            rec.extend(triple(r.point));
            if lift {
                rec.extend(triple(r.lift));
            }
            rec.push(r.status.as_str().into());
            if membership {
                rec.push(r.membership.map(|m| m.to_string()).unwrap_or_default());
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Validation(e.to_string()))?;
        out.push_str(std::str::from_utf8(&body).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Json => serde_json::from_str(text).map_err(|e| CliError::Validation(e.to_string())),
            Format::Csv => Self::from_csv(text),
        }
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut object = None;
        let mut label = None;
        let mut metadata = BTreeMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim_start();
            let (k, v) = body
                .split_once(": ")
                .ok_or_else(|| CliError::Validation(format!("bad metadata line '{line}'")))?;
            match k {
                "object" => object = Some(v.to_string()),
                "label" => label = Some(v.to_string()),
                _ => {
                    metadata.insert(k.to_string(), v.to_string());
                }
            }
        }
        let bad = |m: String| CliError::Validation(m);
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let header: Vec<String> = rdr.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
        let col = |name: &str| header.iter().position(|h| h == name);
        let s_col = col("s").ok_or_else(|| bad("missing column s".into()))?;
        let status_col = col("status").ok_or_else(|| bad("missing column status".into()))?;
        let x_cols = [col("x1"), col("x2"), col("x3")];
        let v_cols = [col("v1"), col("v2"), col("v3")];
        let m_col = col("membership");
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let num = |i: usize| -> Result<f64> {
                rec[i].parse::<f64>().map_err(|_| bad(format!("'{}' is not a number", &rec[i])))
            };
            let triple = |cols: [Option<usize>; 3]| -> Result<Option<[f64; 3]>> {
                let [Some(a), Some(b), Some(c)] = cols else { return Ok(None) };
                if rec[a].is_empty() {
                    return Ok(None);
                }
                Ok(Some([num(a)?, num(b)?, num(c)?]))
            };
            rows.push(ExportRow {
                s: num(s_col)?,
                point: triple(x_cols)?,
                lift: triple(v_cols)?,
                status: rec[status_col].parse()?,
                membership: match m_col {
                    Some(i) if !rec[i].is_empty() => Some(parse_membership(&rec[i])?),
                    _ => None,
                },
            });
        }
        Ok(Self {
            object: object.ok_or_else(|| bad("missing object line".into()))?,
            label: label.ok_or_else(|| bad("missing label line".into()))?,
            metadata,
            rows,
        })
    }
}

/// Counts reported by [`validate_export`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub rows: usize,
    pub guard_rows: usize,
    pub degenerate_rows: usize,
    /// Largest `|g(p, p) − ε| / max(1, |p|²_E)` over rows with a point on a sphere.
    pub max_membership_defect: f64,
    /// Largest `|g(p, v)| / max(1, |p|_E |v|_E)` over natural-lift rows.
    pub max_tangency_defect: f64,
}

/// Checks an export against its own metadata: parameters strictly
/// increasing, finite coordinates, guard rows exactly where `|s − c|` is
/// within the guard, and for sphere-valued exports the membership column
/// and lift tangency recomputed from the coordinates.
pub fn validate_export(e: &PolylineExport) -> Result<ValidationSummary> {
    let fail = |m: String| Err(CliError::Validation(m));
    if e.rows.is_empty() {
        return fail("export has no rows".into());
    }
    let guard = match (e.meta_f64("c")?, e.meta_f64("guard")?) {
        (Some(c), Some(w)) => Some((c, w)),
        _ => None,
    };
    let sphere = e.metadata.get("sphere").map(|s| parse_sphere(s)).transpose()?;
    let membership_tol = e.meta_f64("membership_tol")?.unwrap_or(1e-8);
    let lift_tol = e.meta_f64("lift_tol")?.unwrap_or(1e-8);
    let mut summary = ValidationSummary {
        rows: e.rows.len(),
        guard_rows: 0,
        degenerate_rows: 0,
        max_membership_defect: 0.0,
        max_tangency_defect: 0.0,
    };
    for (i, r) in e.rows.iter().enumerate() {
        if !r.s.is_finite() {
            return fail(format!("row {i}: non-finite parameter"));
        }
        if i > 0 && r.s <= e.rows[i - 1].s {
            return fail(format!("row {i}: parameter {} does not increase", r.s));
        }
        let in_band = guard.is_some_and(|(c, w)| (r.s - c).abs() <= w);
        match r.status {
            RowStatus::Guard => {
                summary.guard_rows += 1;
                if !in_band {
                    return fail(format!("row {i}: guard row at s = {} outside the guard band", r.s));
                }
                if r.point.is_some() {
                    return fail(format!("row {i}: guard row carries coordinates"));
                }
                continue;
            }
            _ if in_band => return fail(format!("row {i}: s = {} lies in the guard band but is not marked", r.s)),
            RowStatus::Degenerate => summary.degenerate_rows += 1,
            RowStatus::Ok => {}
        }
        let Some(p) = r.point else {
            return fail(format!("row {i}: missing coordinates"));
        };
        let p = Vec3::from(p);
        if !p.is_finite() {
            return fail(format!("row {i}: non-finite coordinates"));
        }
        if let Some(sphere) = sphere {
            let scale = p.euclidean_norm_sq().max(1.0);
            let found = sphere_membership(p, membership_tol * scale);
            if found != sphere.membership() {
                return fail(format!("row {i}: point is {found}, expected {}", sphere.membership()));
            }
            if r.membership != Some(found) {
                return fail(format!("row {i}: membership column {:?} disagrees with {found}", r.membership));
            }
            let defect = (minkowski_inner(p, p) - sphere.epsilon()).abs() / scale;
            summary.max_membership_defect = summary.max_membership_defect.max(defect);
        }
        if let Some(v) = r.lift {
            let v = Vec3::from(v);
            if !v.is_finite() {
                return fail(format!("row {i}: non-finite lift vector"));
            }
            let defect = minkowski_inner(p, v).abs() / (p.euclidean_norm() * v.euclidean_norm()).max(1.0);
            if defect > lift_tol {
                return fail(format!("row {i}: lift vector not tangent (defect {defect:e})"));
            }
            summary.max_tangency_defect = summary.max_tangency_defect.max(defect);
        }
    }
    Ok(summary)
}
