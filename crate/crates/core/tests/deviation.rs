mod common;

use droplet_modes::deviation::{
    dev_metric, fit_optimal_mobility, ingest, l2_norm, write_series, AnalyticReference, Reference, Region,
    SnapshotSeries, QUARTER_SIDE,
};
use droplet_modes::error::Error;
use droplet_modes::exec::Execution;
use droplet_modes::fields::{FieldSnapshot, Grid};
use droplet_modes::modes::{solve_mode, FluidPair, ModalSolution, ModeSpec};
use proptest::prelude::*;

struct Case {
    ms: ModeSpec,
    sol: ModalSolution,
    fp: FluidPair,
}

fn case(k: u32, beta: f64) -> Case {
    let fp = common::table2();
    Case { ms: ModeSpec::new(k, beta, 0.05).unwrap(), sol: solve_mode(k, &fp).unwrap(), fp }
}

impl Case {
    fn reference(&self) -> AnalyticReference<'_> {
        AnalyticReference::new(&self.ms, &self.sol, &self.fp)
    }

    /// `n` equispaced times over half a period.
    fn times(&self, n: usize) -> Vec<f64> {
        let t_half = 0.5 * self.sol.period();
        (0..n).map(|i| t_half * i as f64 / (n - 1) as f64).collect()
    }

    fn series(&self, grid: &Grid, times: &[f64], shift: f64) -> SnapshotSeries {
        let r = self.reference();
        let snaps = times
            .iter()
            .map(|&t| {
                let mut s = r.sample(grid, t + shift).unwrap();
                s.t = t;
                s
            })
            .collect();
        SnapshotSeries::new(snaps).unwrap()
    }
}

fn scaled(series: &SnapshotSeries, f: f64) -> SnapshotSeries {
    let snaps = series
        .snapshots()
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.u.iter_mut().for_each(|u| *u = [u[0] * f, u[1] * f]);
            s
        })
        .collect();
    SnapshotSeries::new(snaps).unwrap()
}

#[test]
fn self_deviation_is_zero() {
    let cs = case(2, 1.0);
    let grid = Grid::square(QUARTER_SIDE, 65).unwrap();
    let s = cs.series(&grid, &cs.times(9), 0.0);
    let d = dev_metric(&s, &cs.reference(), Region::Quarter).unwrap();
    assert_eq!(d.dev, 0.0);
    assert_eq!(d.n_snapshots, 9);
    assert!((d.t_window - 0.5 * cs.sol.period()).abs() < 1e-15 * d.t_window);
}

#[test]
fn scaled_series_gives_scale() {
    let cs = case(3, 0.8);
    let grid = Grid::square(QUARTER_SIDE, 65).unwrap();
    let s = cs.series(&grid, &cs.times(7), 0.0);
    for c in [1e-3, 1e-1] {
        let d = dev_metric(&scaled(&s, 1.0 + c), &cs.reference(), Region::Quarter).unwrap();
        assert!((d.dev - c).abs() <= 1e-12 * c, "c = {c}: dev = {}", d.dev);
    }
}

#[test]
fn time_shift_is_detected() {
    let cs = case(2, 1.0);
    let grid = Grid::square(QUARTER_SIDE, 65).unwrap();
    let times = cs.times(11);
    let tau = times[1] - times[0];
    let d = dev_metric(&cs.series(&grid, &times, tau), &cs.reference(), Region::Quarter).unwrap();
    assert!(d.dev > 1e-2 && d.dev < 1.0, "dev = {}", d.dev);
}

#[test]
fn refinement_consistency() {
    let cs = case(2, 1.0);
    let times = cs.times(11);
    let tau = 0.25 * (times[1] - times[0]);
    let dev_at = |n: usize| {
        let grid = Grid::square(QUARTER_SIDE, n + 1).unwrap();
        dev_metric(&cs.series(&grid, &times, tau), &cs.reference(), Region::Quarter).unwrap().dev
    };
    let (coarse, fine) = (dev_at(128), dev_at(256));
    assert!(((coarse - fine) / fine).abs() <= 1e-3, "{coarse} vs {fine}");
}

#[test]
fn quarter_matches_full_square_for_symmetric_mode() {
    // k = 2, β = 1 is even in x and y, so the quarter carries a quarter of
    // every squared norm and the ratio is unchanged
    let cs = case(2, 1.0);
    let times = cs.times(5);
    let tau = 0.5 * (times[1] - times[0]);
    let n = 64;
    let h = QUARTER_SIDE / n as f64;
    let full = Grid::new(-QUARTER_SIDE, -QUARTER_SIDE, h, h, 2 * n + 1, 2 * n + 1).unwrap();
    let s = cs.series(&full, &times, tau);
    let dq = dev_metric(&s, &cs.reference(), Region::Quarter).unwrap().dev;
    let df = dev_metric(&s, &cs.reference(), Region::Full).unwrap().dev;
    assert!(((dq - df) / df).abs() < 1e-12, "{dq} vs {df}");
}

#[test]
fn l2_norm_converges() {
    let cs = case(2, 1.0);
    let r = cs.reference();
    let norm = |n: usize| l2_norm(&r.sample(&Grid::square(QUARTER_SIDE, n + 1).unwrap(), 0.0).unwrap(), Region::Quarter).unwrap();
    let (a, b, c) = (norm(128), norm(256), norm(512));
    let order = ((a - b) / (b - c)).abs().log2();
    let extrapolated = c + (c - b) / (2f64.powf(order) - 1.0);
    assert!(order > 0.8, "order {order}");
    assert!(((b - extrapolated) / extrapolated).abs() < 1e-3, "{b} vs {extrapolated}");
}

/// Rotates node positions and vectors by `quarter_turns · π/2` on a grid
/// symmetric about the origin.
fn rotate(s: &FieldSnapshot, quarter_turns: u32) -> FieldSnapshot {
    let g = s.grid;
    let n = g.nx;
    let mut out = s.clone();
    for j in 0..n {
        for i in 0..n {
            let (mut ii, mut jj, mut u) = (i, j, s.u[j * n + i]);
            for _ in 0..quarter_turns {
                (ii, jj) = (n - 1 - jj, ii);
                u = [-u[1], u[0]];
            }
            out.u[jj * n + ii] = u;
        }
    }
    out
}

#[test]
fn rotation_by_symmetry_angle() {
    let grid = Grid::new(-40e-6, -40e-6, 1e-6, 1e-6, 81, 81).unwrap();
    for (k, turns) in [(2u32, 2u32), (4, 1)] {
        let cs = case(k, 1.0);
        let times = cs.times(5);
        let tau = 0.3 * (times[1] - times[0]);
        let sim = cs.series(&grid, &times, tau);
        let reference = cs.series(&grid, &times, 0.0);
        let d0 = dev_metric(&sim, &reference, Region::Full).unwrap().dev;
        let rot = |s: &SnapshotSeries| SnapshotSeries::new(s.snapshots().iter().map(|x| rotate(x, turns)).collect()).unwrap();
        let d1 = dev_metric(&rot(&sim), &rot(&reference), Region::Full).unwrap().dev;
        assert!(d0 > 0.0);
        assert!(((d0 - d1) / d0).abs() < 1e-12, "k = {k}: {d0} vs {d1}");
    }
}

#[test]
fn manifest_round_trip() {
    let cs = case(2, 1.0);
    let grid = Grid::square(QUARTER_SIDE, 9).unwrap();
    let s = cs.series(&grid, &cs.times(2), 0.0);
    let dir = tempfile::tempdir().unwrap();
    let path = write_series(dir.path(), s.snapshots(), cs.ms, cs.fp, 1e-7, 1e-12).unwrap();
    let back = ingest(&path).unwrap();
    assert_eq!(back.snapshots(), s.snapshots());
    let m = back.manifest().unwrap();
    assert_eq!((m.eps, m.mobility, m.mode), (1e-7, 1e-12, cs.ms));
    assert_eq!(dev_metric(&back, &cs.reference(), Region::Quarter).unwrap().dev, 0.0);
}

#[test]
fn bad_series_rejected() {
    let grid = Grid::square(1.0, 3).unwrap();
    let z = |t| FieldSnapshot::zeros(grid, t);
    assert!(matches!(SnapshotSeries::new(vec![]), Err(Error::Series(_))));
    assert!(matches!(SnapshotSeries::new(vec![z(0.0)]), Err(Error::Series(_))));
    assert!(matches!(SnapshotSeries::new(vec![z(0.0), z(0.0)]), Err(Error::Series(_))));
    assert!(matches!(SnapshotSeries::new(vec![z(1.0), z(0.5)]), Err(Error::Series(_))));
    let other = FieldSnapshot::zeros(Grid::square(1.0, 4).unwrap(), 1.0);
    assert!(matches!(SnapshotSeries::new(vec![z(0.0), other]), Err(Error::GridMismatch(_))));

    // vanishing reference
    let s = SnapshotSeries::new(vec![z(0.0), z(1.0)]).unwrap();
    assert!(matches!(dev_metric(&s, &s, Region::Full), Err(Error::Series(_))));
    // region off the grid
    let cs = case(2, 1.0);
    let g = Grid::square(20e-6, 5).unwrap();
    let s = cs.series(&g, &cs.times(2), 0.0);
    assert!(matches!(dev_metric(&s, &cs.reference(), Region::Quarter), Err(Error::GridMismatch(_))));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("m.json");
    let manifest = format!(
        r#"{{"mode":{{"k":2,"beta":1.0,"delta":0.05}},"fluids":{},"eps":1e-7,"mobility":1e-12,"snapshots":[]}}"#,
        serde_json::to_string(&cs.fp).unwrap()
    );
    std::fs::write(&empty, manifest).unwrap();
    assert!(matches!(ingest(&empty), Err(Error::Series(_))));
    assert!(matches!(ingest(&dir.path().join("missing.json")), Err(Error::Io { .. })));
}

#[test]
fn sequential_and_parallel_references_agree() {
    let cs = case(4, 0.5);
    let grid = Grid::square(QUARTER_SIDE, 33).unwrap();
    let mut seq = cs.reference();
    seq.exec = Execution::Sequential;
    let mut par = cs.reference();
    par.exec = Execution::Parallel;
    assert_eq!(seq.sample(&grid, 1e-6).unwrap(), par.sample(&grid, 1e-6).unwrap());
}

proptest! {
    #[test]
    fn vertex_of_exact_parabola(x0 in -30.0f64..-10.0, y0 in -8.0f64..0.0, a in 0.05f64..5.0, h in 0.1f64..2.0) {
        let f = |x: f64| a * (x - x0).powi(2) + y0;
        let xs = [x0 - 1.3 * h, x0 + 0.4 * h, x0 + 1.7 * h];
        let pts = xs.map(|x| (x.exp(), f(x).exp()));
        let v = fit_optimal_mobility(&pts).unwrap();
        prop_assert!((v.mobility.ln() - x0).abs() < 1e-9 * x0.abs());
        prop_assert!((v.dev.ln() - y0).abs() < 1e-9 * y0.abs().max(1.0));
    }

    #[test]
    fn dev_nonnegative(c in -0.5f64..0.5) {
        let grid = Grid::square(1.0, 5).unwrap();
        let mk = |t, f: f64| {
            let mut s = FieldSnapshot::zeros(grid, t);
            for (i, u) in s.u.iter_mut().enumerate() { *u = [f * (i as f64).sin(), f]; }
            s
        };
        let reference = SnapshotSeries::new(vec![mk(0.0, 1.0), mk(1.0, 1.0)]).unwrap();
        let sim = SnapshotSeries::new(vec![mk(0.0, 1.0 + c), mk(1.0, 1.0 + c)]).unwrap();
        let d = dev_metric(&sim, &reference, Region::Full).unwrap().dev;
        prop_assert!(d >= 0.0);
        prop_assert!((d - c.abs()).abs() <= 1e-12);
    }
}
