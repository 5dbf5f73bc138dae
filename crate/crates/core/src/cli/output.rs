//! CSV tables, artifact files and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::DerivedFrequencies;
use crate::ode::SolverStats;
use crate::spectral::Truncation;

use super::config::Scenario;

/// One CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Num(f64),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            // 17 significant digits round-trip every f64 exactly
            Cell::Num(v) => format!("{v:.16e}"),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

/// Header plus rows, rendered as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| Cell::Num(v)).collect());
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render())).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
    }
}

/// Surface sampled on a rectangular grid of two axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2 {
    pub axis_names: [String; 2],
    pub axes: [Vec<f64>; 2],
    pub value_names: Vec<String>,
    /// `values[k][i * axes[1].len() + j]` is value column `k` at `(axes[0][i], axes[1][j])`.
    pub values: Vec<Vec<f64>>,
}

impl Grid2 {
    fn validate(&self) -> Result<()> {
        let n = self.axes[0].len() * self.axes[1].len();
        if self.values.len() != self.value_names.len() || self.values.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidParams("grid values do not match the axes".into()));
        }
        Ok(())
    }
}

/// Long-format table `(a, b, values…)` sorted lexicographically by `(a, b)`.
pub fn grid_table(grid: &Grid2) -> Result<CsvTable> {
    grid.validate()?;
    let nb = grid.axes[1].len();
    let mut order: Vec<(usize, usize)> = (0..grid.axes[0].len()).flat_map(|i| (0..nb).map(move |j| (i, j))).collect();
    order.sort_by(|&(i, j), &(k, l)| {
        grid.axes[0][i]
            .total_cmp(&grid.axes[0][k])
            .then(grid.axes[1][j].total_cmp(&grid.axes[1][l]))
    });
    let mut table = CsvTable::new(grid.axis_names.iter().cloned().chain(grid.value_names.iter().cloned()));
    for (i, j) in order {
        let mut row = vec![Cell::Num(grid.axes[0][i]), Cell::Num(grid.axes[1][j])];
        row.extend(grid.values.iter().map(|v| Cell::Num(v[i * nb + j])));
        table.push(row);
    }
    Ok(table)
}

/// Writes `grid` as a long-format CSV file.
pub fn emit_grid(grid: &Grid2, path: &Path) -> Result<Artifact> {
    write_artifact(path, &grid_table(grid)?.to_bytes()?)
}

/// Parses a numeric CSV file written by [`CsvTable`].
pub fn read_csv(bytes: &[u8]) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let bad = |e: &dyn std::fmt::Display| Error::Config(format!("malformed csv: {e}"));
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().map_err(|e| bad(&e))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(&e))?;
        rows.push(rec.iter().map(|s| s.parse::<f64>().map_err(|e| bad(&e))).collect::<Result<Vec<_>>>()?);
    }
    Ok((header, rows))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Artifact {
    /// File name relative to the run directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Writes through a temporary sibling and renames, so readers never see a
/// half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_artifact(path: &Path, bytes: &[u8]) -> Result<Artifact> {
    write_atomic(path, bytes)?;
    Ok(Artifact {
        path: path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        bytes: bytes.len() as u64,
        sha256: sha256_hex(bytes),
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Norm of the truncated series at the sampled times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormDiagnostics {
    /// `Σ C²` over the retained modes.
    pub coefficient_norm_sq: f64,
    /// Quadrature norm of the projected initial state.
    pub source_norm: f64,
    /// Extremes of the quadrature norm over the output times, when sampled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl ErrorReport {
    pub fn from_error(e: &Error) -> Self {
        Self {
            kind: error_kind(e),
            message: e.to_string(),
            exit_code: exit_code(e),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidParams(_) => "invalid-params",
        Error::QuadratureOrder { .. } => "quadrature-order",
        Error::QuadratureUnstable { .. } => "quadrature-unstable",
        Error::Singularity { .. } => "singularity",
        Error::UndefinedPhase { .. } => "undefined-phase",
        Error::Ode(_) => "integrator",
        Error::Config(_) => "config",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) | Error::QuadratureOrder { .. } | Error::Config(_) | Error::Json(_) => EXIT_CONFIG,
        Error::QuadratureUnstable { .. } | Error::Singularity { .. } | Error::UndefinedPhase { .. } | Error::Ode(_) => {
            EXIT_NUMERICAL
        }
        Error::Io(_) => EXIT_IO,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario: Scenario,
    pub frequencies: DerivedFrequencies,
    pub truncation: Truncation,
    /// Estimated norm outside the truncation; `None` when the series could
    /// not be projected.
    pub tail_bound: Option<f64>,
    pub norm: Option<NormDiagnostics>,
    pub integrator: Option<SolverStats>,
    pub seed: Option<u64>,
    pub workers: usize,
    pub artifacts: Vec<Artifact>,
    pub wall_clock_s: f64,
    /// Set when a numerical failure cut the run short; artifacts then hold
    /// whatever was computed before the failure.
    pub partial: bool,
    pub error: Option<ErrorReport>,
    /// Mode-specific summary values.
    pub summary: serde_json::Map<String, serde_json::Value>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        write_atomic(&dir.join("manifest.json"), text.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_grid_round_trips_exactly() {
        let axis = vec![0.1, 1.0 / 3.0, 2.0];
        let values = (0..9).map(|k| if k / 3 == k % 3 { 1.0 } else { 0.0 }).collect();
        let grid = Grid2 {
            axis_names: ["t".into(), "x".into()],
            axes: [axis.clone(), axis.clone()],
            value_names: vec!["value".into()],
            values: vec![values],
        };
        let bytes = grid_table(&grid).unwrap().to_bytes().unwrap();
        let (header, rows) = read_csv(&bytes).unwrap();
        assert_eq!(header, ["t", "x", "value"]);
        assert_eq!(rows.len(), 9);
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r[0], axis[k / 3]);
            assert_eq!(r[1], axis[k % 3]);
            assert_eq!(r[2], if k / 3 == k % 3 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn rows_sorted_by_both_axes() {
        let grid = Grid2 {
            axis_names: ["t".into(), "x".into()],
            axes: [vec![2.0, 1.0], vec![0.5, -0.5, 0.0]],
            value_names: vec!["a".into(), "b".into()],
            values: vec![(0..6).map(f64::from).collect(), vec![0.0; 6]],
        };
        let (_, rows) = read_csv(&grid_table(&grid).unwrap().to_bytes().unwrap()).unwrap();
        let keys: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
        assert_eq!(keys, [(1.0, -0.5), (1.0, 0.0), (1.0, 0.5), (2.0, -0.5), (2.0, 0.0), (2.0, 0.5)]);
        // value follows its grid point
        assert_eq!(rows[0][2], 4.0);
    }

    #[test]
    fn awkward_values_round_trip() {
        let vals = [f64::MIN_POSITIVE, -0.0, 1e300, std::f64::consts::PI, 0.1 + 0.2, -7.25e-310];
        let mut t = CsvTable::new(["i", "v"]);
        for (i, &v) in vals.iter().enumerate() {
            t.push(vec![Cell::Int(i as u64), Cell::Num(v)]);
        }
        let (_, rows) = read_csv(&t.to_bytes().unwrap()).unwrap();
        for (r, &v) in rows.iter().zip(&vals) {
            assert_eq!(r[1].to_bits(), v.to_bits());
        }
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_artifact(&dir.path().join("a.csv"), b"x\n1\n").unwrap();
        assert_eq!(a.sha256, sha256_hex(b"x\n1\n"));
        assert_eq!(a.bytes, 4);
        let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(names, ["a.csv"]);
    }
}
