//! Deviation of simulated velocity fields from the analytic reference:
//! time-averaged spatial L² norms, composite trapezoid in space and time.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fields::{sample_snapshot, FieldSnapshot, Grid};
use crate::modes::{FluidPair, ModalSolution, ModeSpec};

/// Side of the default quarter domain `(0, 50 µm)²`.
pub const QUARTER_SIDE: f64 = 50e-6;

const NODE_TOL: f64 = 1e-9;

/// Integration region; window edges must fall on grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// The whole grid.
    Full,
    /// `[0, 50 µm]²`.
    Quarter,
    Window { x_min: f64, x_max: f64, y_min: f64, y_max: f64 },
}

fn node_index(v: f64, origin: f64, step: f64, n: usize, what: &str) -> Result<usize> {
    let f = (v - origin) / step;
    let i = f.round();
    if (f - i).abs() > NODE_TOL * f.abs().max(1.0) || i < 0.0 || i > (n - 1) as f64 {
        return Err(Error::GridMismatch(format!("{what} = {v} is not a grid node")));
    }
    Ok(i as usize)
}

impl Region {
    /// Inclusive node ranges `(i0, i1, j0, j1)` covered by the region.
    fn index_range(&self, g: &Grid) -> Result<(usize, usize, usize, usize)> {
        let (x0, x1, y0, y1) = match *self {
            Region::Full => return Ok((0, g.nx - 1, 0, g.ny - 1)),
            Region::Quarter => (0.0, QUARTER_SIDE, 0.0, QUARTER_SIDE),
            Region::Window { x_min, x_max, y_min, y_max } => (x_min, x_max, y_min, y_max),
        };
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::Parameter("empty integration window".into()));
        }
        Ok((
            node_index(x0, g.x0, g.dx, g.nx, "x_min")?,
            node_index(x1, g.x0, g.dx, g.nx, "x_max")?,
            node_index(y0, g.y0, g.dy, g.ny, "y_min")?,
            node_index(y1, g.y0, g.dy, g.ny, "y_max")?,
        ))
    }
}

fn trapezoid_sq<F: Fn(usize) -> f64>(g: &Grid, region: Region, f: F) -> Result<f64> {
    let (i0, i1, j0, j1) = region.index_range(g)?;
    if i0 == i1 || j0 == j1 {
        return Err(Error::GridMismatch("region needs at least two nodes per axis".into()));
    }
    let w = |k: usize, a: usize, b: usize| if k == a || k == b { 0.5 } else { 1.0 };
    let mut sum = 0.0;
    for j in j0..=j1 {
        let wj = w(j, j0, j1);
        for i in i0..=i1 {
            sum += wj * w(i, i0, i1) * f(j * g.nx + i);
        }
    }
    Ok(sum * g.dx * g.dy)
}

fn check_lengths(s: &FieldSnapshot) -> Result<()> {
    if s.u.len() != s.grid.len() {
        return Err(Error::GridMismatch(format!("{} samples for {} nodes", s.u.len(), s.grid.len())));
    }
    Ok(())
}

/// `(∬ |u|² dx dy)^{1/2}` over `region`.
pub fn l2_norm(snapshot: &FieldSnapshot, region: Region) -> Result<f64> {
    check_lengths(snapshot)?;
    let u = &snapshot.u;
    Ok(trapezoid_sq(&snapshot.grid, region, |k| u[k][0] * u[k][0] + u[k][1] * u[k][1])?.sqrt())
}

/// `‖a − b‖` over `region`; both snapshots must share one grid.
pub fn l2_distance(a: &FieldSnapshot, b: &FieldSnapshot, region: Region) -> Result<f64> {
    check_lengths(a)?;
    check_lengths(b)?;
    if !a.grid.matches(&b.grid, NODE_TOL) {
        return Err(Error::GridMismatch("snapshots live on different grids".into()));
    }
    Ok(trapezoid_sq(&a.grid, region, |k| {
        let dx = a.u[k][0] - b.u[k][0];
        let dy = a.u[k][1] - b.u[k][1];
        dx * dx + dy * dy
    })?
    .sqrt())
}

/// Ordered snapshots on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSeries {
    snapshots: Vec<FieldSnapshot>,
    manifest: Option<SeriesManifest>,
}

impl SnapshotSeries {
    pub fn new(snapshots: Vec<FieldSnapshot>) -> Result<Self> {
        if snapshots.len() < 2 {
            return Err(Error::Series(format!("need at least 2 snapshots, got {}", snapshots.len())));
        }
        let g = snapshots[0].grid;
        for w in snapshots.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::Series(format!("times not strictly increasing at t = {}", w[1].t)));
            }
        }
        for s in &snapshots {
            check_lengths(s)?;
            if !s.grid.matches(&g, NODE_TOL) {
                return Err(Error::GridMismatch(format!("snapshot at t = {} uses a different grid", s.t)));
            }
        }
        Ok(SnapshotSeries { snapshots, manifest: None })
    }

    pub fn snapshots(&self) -> &[FieldSnapshot] {
        &self.snapshots
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn grid(&self) -> Grid {
        self.snapshots[0].grid
    }

    pub fn manifest(&self) -> Option<&SeriesManifest> {
        self.manifest.as_ref()
    }

    /// `T`, the integration window length.
    pub fn duration(&self) -> f64 {
        self.snapshots[self.snapshots.len() - 1].t - self.snapshots[0].t
    }
}

/// Source of reference velocity fields.
pub trait Reference {
    fn sample(&self, grid: &Grid, t: f64) -> Result<FieldSnapshot>;
}

/// The analytic mode, evaluated at `t + t₀` so the simulation clock starts
/// with the interface on the generating circle.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticReference<'a> {
    pub mode: &'a ModeSpec,
    pub solution: &'a ModalSolution,
    pub fluids: &'a FluidPair,
    pub offset: f64,
    pub exec: Execution,
}

impl<'a> AnalyticReference<'a> {
    pub fn new(mode: &'a ModeSpec, solution: &'a ModalSolution, fluids: &'a FluidPair) -> Self {
        AnalyticReference { mode, solution, fluids, offset: solution.phase_offset(), exec: Execution::default() }
    }
}

impl Reference for AnalyticReference<'_> {
    fn sample(&self, grid: &Grid, t: f64) -> Result<FieldSnapshot> {
        let mut s = sample_snapshot(self.mode, self.solution, self.fluids, grid, t + self.offset, self.exec)?;
        s.t = t;
        Ok(s)
    }
}

/// Reference given by another series with identical sample times.
impl Reference for SnapshotSeries {
    fn sample(&self, grid: &Grid, t: f64) -> Result<FieldSnapshot> {
        let s = self
            .snapshots
            .iter()
            .find(|s| s.t == t)
            .ok_or_else(|| Error::Series(format!("reference series has no snapshot at t = {t}")))?;
        if !s.grid.matches(grid, NODE_TOL) {
            return Err(Error::GridMismatch("reference series uses a different grid".into()));
        }
        Ok(s.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub dev: f64,
    #[serde(rename = "T")]
    pub t_window: f64,
    pub n_snapshots: usize,
}

fn trapezoid_time(t: &[f64], f: &[f64]) -> f64 {
    t.windows(2).zip(f.windows(2)).map(|(t, f)| 0.5 * (t[1] - t[0]) * (f[0] + f[1])).sum()
}

/// `dev = ⦀u_sim − u_ref⦀ / ⦀u_ref⦀` with `⦀u⦀ = (1/T)∫₀ᵀ ‖u(·,t)‖ dt`.
pub fn dev_metric(series: &SnapshotSeries, reference: &dyn Reference, region: Region) -> Result<Deviation> {
    let grid = series.grid();
    let times = series.times();
    let mut num = Vec::with_capacity(times.len());
    let mut den = Vec::with_capacity(times.len());
    for s in series.snapshots() {
        let r = reference.sample(&grid, s.t)?;
        num.push(l2_distance(s, &r, region)?);
        den.push(l2_norm(&r, region)?);
    }
    let d = trapezoid_time(&times, &den);
    if !(d > 0.0) {
        return Err(Error::Series("reference field vanishes over the window".into()));
    }
    Ok(Deviation { dev: trapezoid_time(&times, &num) / d, t_window: series.duration(), n_snapshots: times.len() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub path: PathBuf,
    pub t: f64,
}

/// Description of a simulation run and its snapshot files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesManifest {
    pub mode: ModeSpec,
    pub fluids: FluidPair,
    pub eps: f64,
    pub mobility: f64,
    pub snapshots: Vec<SnapshotEntry>,
}

/// Reads a manifest and every snapshot it lists; relative paths resolve
/// against the manifest's directory.
pub fn ingest(manifest_path: &Path) -> Result<SnapshotSeries> {
    let text = fs::read_to_string(manifest_path).map_err(|source| Error::Io { path: manifest_path.to_path_buf(), source })?;
    let manifest: SeriesManifest = serde_json::from_str(&text)
        .map_err(|e| Error::Malformed { path: manifest_path.to_path_buf(), reason: e.to_string() })?;
    if manifest.snapshots.is_empty() {
        return Err(Error::Series("manifest lists no snapshots".into()));
    }
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let snaps = manifest
        .snapshots
        .iter()
        .map(|e| FieldSnapshot::read_csv(&dir.join(&e.path), e.t))
        .collect::<Result<Vec<_>>>()?;
    let mut series = SnapshotSeries::new(snaps)?;
    series.manifest = Some(manifest);
    Ok(series)
}

/// Writes `snap_000.csv`, … and `manifest.json` into `dir`.
pub fn write_series(dir: &Path, snapshots: &[FieldSnapshot], mode: ModeSpec, fluids: FluidPair, eps: f64, mobility: f64) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let mut entries = Vec::with_capacity(snapshots.len());
    for (i, s) in snapshots.iter().enumerate() {
        let name = PathBuf::from(format!("snap_{i:03}.csv"));
        s.write_csv(&dir.join(&name))?;
        entries.push(SnapshotEntry { path: name, t: s.t });
    }
    let manifest = SeriesManifest { mode, fluids, eps, mobility, snapshots: entries };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, text).map_err(|source| Error::Io { path: path.clone(), source })?;
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobilityOptimum {
    pub mobility: f64,
    pub dev: f64,
}

/// Vertex of the parabola through three `(log m, log dev)` points.
pub fn fit_optimal_mobility(points: &[(f64, f64); 3]) -> Result<MobilityOptimum> {
    if points.iter().any(|&(m, d)| !(m > 0.0 && d > 0.0)) {
        return Err(Error::Parameter("mobility and dev values must be positive".into()));
    }
    let [(x0, y0), (x1, y1), (x2, y2)] = points.map(|(m, d)| (m.ln(), d.ln()));
    if x0 == x1 || x1 == x2 || x0 == x2 {
        return Err(Error::Parameter("mobilities must be distinct".into()));
    }
    // Newton divided differences: y = y0 + d1 (x − x0) + a (x − x0)(x − x1)
    let d1 = (y1 - y0) / (x1 - x0);
    let d2 = (y2 - y1) / (x2 - x1);
    let a = (d2 - d1) / (x2 - x0);
    if !(a > 0.0) {
        return Err(Error::Parameter("points do not bracket a minimum in log-log".into()));
    }
    let b = d1 - a * (x0 + x1);
    let xv = -b / (2.0 * a);
    let yv = y0 + d1 * (xv - x0) + a * (xv - x0) * (xv - x1);
    Ok(MobilityOptimum { mobility: xv.exp(), dev: yv.exp() })
}
