use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{pressure, velocity_cartesian, PolarPoint};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fields::Domain;
use crate::modes::{FluidPair, ModalSolution, ModeSpec};

/// Uniform node-centred Cartesian grid; node `(i, j)` sits at
/// `(x0 + i·dx, y0 + j·dy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite() && x0.is_finite() && y0.is_finite()) {
            return Err(Error::Parameter(format!("grid spacing must be positive, got dx = {dx}, dy = {dy}")));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::Parameter("grid needs at least one node per axis".into()));
        }
        Ok(Grid { x0, y0, dx, dy, nx, ny })
    }

    /// `n × n` nodes spanning `[0, side]²`, corners included.
    pub fn square(side: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter("square grid needs n ≥ 2".into()));
        }
        let h = side / (n - 1) as f64;
        Grid::new(0.0, 0.0, h, h, n, n)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }

    /// Coordinates of the node with flat index `idx` (y outer, x inner).
    pub fn node(&self, idx: usize) -> (f64, f64) {
        (self.x(idx % self.nx), self.y(idx / self.nx))
    }

    /// Same node layout up to `tol` relative to the spacing.
    pub fn matches(&self, other: &Grid, tol: f64) -> bool {
        self.nx == other.nx
            && self.ny == other.ny
            && (self.x0 - other.x0).abs() <= tol * self.dx
            && (self.y0 - other.y0).abs() <= tol * self.dy
            && (self.dx - other.dx).abs() <= tol * self.dx
            && (self.dy - other.dy).abs() <= tol * self.dy
    }
}

/// Velocity and pressure samples on a grid at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSnapshot {
    pub grid: Grid,
    /// s
    pub t: f64,
    /// `(u_x, u_y)` per node [m/s]
    pub u: Vec<[f64; 2]>,
    /// per node [Pa·m^{3−d}]
    pub p: Vec<f64>,
}

/// Sidecar manifest written next to a snapshot CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub t: f64,
    pub grid: Grid,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<ModeSpec>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fluids: Option<FluidPair>,
}

/// Shortest decimal string that parses back to the same `f64`; plain
/// notation for moderate magnitudes, exponent notation otherwise.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::Malformed { path: path.to_path_buf(), reason: reason.into() }
}

impl FieldSnapshot {
    pub fn zeros(grid: Grid, t: f64) -> Self {
        FieldSnapshot { grid, t, u: vec![[0.0; 2]; grid.len()], p: vec![0.0; grid.len()] }
    }

    fn check(&self) -> Result<()> {
        if self.u.len() != self.grid.len() || self.p.len() != self.grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} velocity and {} pressure samples for {} nodes",
                self.u.len(),
                self.p.len(),
                self.grid.len()
            )));
        }
        Ok(())
    }

    /// CSV with header `x,y,ux,uy,p`, one node per row, y outer.
    pub fn to_csv_string(&self) -> Result<String> {
        self.check()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let wrap = |e: csv::Error| Error::Malformed { path: PathBuf::from("<memory>"), reason: e.to_string() };
        w.write_record(["x", "y", "ux", "uy", "p"]).map_err(wrap)?;
        for idx in 0..self.grid.len() {
            let (x, y) = self.grid.node(idx);
            let [ux, uy] = self.u[idx];
            w.write_record([x, y, ux, uy, self.p[idx]].map(format_float)).map_err(wrap)?;
        }
        let bytes = w.into_inner().map_err(|e| wrap(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("formatted floats are ASCII"))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()?).map_err(io_err(path))
    }

    /// Writes `path` and a JSON sidecar with the same stem.
    pub fn write_with_meta(&self, path: &Path, mode: Option<ModeSpec>, fluids: Option<FluidPair>) -> Result<PathBuf> {
        self.write_csv(path)?;
        let meta = SnapshotMeta { t: self.t, grid: self.grid, mode, fluids };
        let side = path.with_extension("json");
        let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        fs::write(&side, text).map_err(io_err(&side))?;
        Ok(side)
    }

    /// Reads a snapshot CSV and recovers its grid from the node coordinates.
    pub fn read_csv(path: &Path, t: f64) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| malformed(path, e.to_string()))?;
        if headers.iter().collect::<Vec<_>>() != ["x", "y", "ux", "uy", "p"] {
            return Err(malformed(path, "expected header x,y,ux,uy,p"));
        }
        let mut rows: Vec<[f64; 5]> = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| malformed(path, e.to_string()))?;
            if rec.len() != 5 {
                return Err(malformed(path, format!("row {}: expected 5 fields", line + 2)));
            }
            let mut v = [0.0; 5];
            for (slot, field) in v.iter_mut().zip(rec.iter()) {
                *slot = field
                    .trim()
                    .parse()
                    .map_err(|_| malformed(path, format!("row {}: bad number {field:?}", line + 2)))?;
            }
            rows.push(v);
        }
        if rows.is_empty() {
            return Err(malformed(path, "no data rows"));
        }
        let grid = infer_grid(&rows).map_err(|reason| malformed(path, reason))?;
        Ok(FieldSnapshot {
            grid,
            t,
            u: rows.iter().map(|r| [r[2], r[3]]).collect(),
            p: rows.iter().map(|r| r[4]).collect(),
        })
    }
}

fn infer_grid(rows: &[[f64; 5]]) -> std::result::Result<Grid, String> {
    let (x0, y0) = (rows[0][0], rows[0][1]);
    let nx = rows.iter().take_while(|r| r[1] == y0).count();
    if rows.len() % nx != 0 {
        return Err(format!("{} rows do not form rows of {nx} nodes", rows.len()));
    }
    let ny = rows.len() / nx;
    let span = |a: f64, b: f64, n: usize| if n > 1 { (b - a) / (n - 1) as f64 } else { 1.0 };
    let dx = span(x0, rows[nx - 1][0], nx);
    let dy = span(y0, rows[rows.len() - 1][1], ny);
    let grid = Grid::new(x0, y0, dx, dy, nx, ny).map_err(|e| e.to_string())?;
    for (idx, r) in rows.iter().enumerate() {
        let (x, y) = grid.node(idx);
        if (r[0] - x).abs() > 1e-9 * dx || (r[1] - y).abs() > 1e-9 * dy {
            return Err(format!("node {idx} at ({}, {}) is off the uniform grid", r[0], r[1]));
        }
    }
    Ok(grid)
}

/// Samples `u` and `p` on every node at time `t`, branch chosen by `r`
/// against `R₀`.
pub fn sample_snapshot(
    ms: &ModeSpec,
    sol: &ModalSolution,
    fp: &FluidPair,
    grid: &Grid,
    t: f64,
    exec: Execution,
) -> Result<FieldSnapshot> {
    let nodes = exec.map_range(grid.len(), |idx| {
        let (x, y) = grid.node(idx);
        let u = velocity_cartesian(ms, sol, x, y, t)?;
        let p = pressure(ms, sol, fp, PolarPoint::from_cartesian(x, y), t, Domain::Auto)?;
        Ok(([u.0, u.1], p))
    });
    let mut snap = FieldSnapshot::zeros(*grid, t);
    for (idx, node) in nodes.into_iter().enumerate() {
        let (u, p) = node?;
        snap.u[idx] = u;
        snap.p[idx] = p;
    }
    Ok(snap)
}
