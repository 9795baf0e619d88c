//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the console.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::{annulus_point, rng, table2, TABLE1};
use droplet_modes::closures::{density_extension, density_extension_derivative, excess_tension, viscosity};
use droplet_modes::deviation::{dev_metric, fit_optimal_mobility, AnalyticReference, Reference, Region, SnapshotSeries, QUARTER_SIDE};
use droplet_modes::exec::Execution;
use droplet_modes::fields::{Domain, Grid};
use droplet_modes::modes::{find_gamma, solve_coefficients, ModeSpec, Table1Values};
use droplet_modes::residual::{check_bulk, check_interface, check_interface_extrapolated};
use droplet_modes::special::{bessel_j, bessel_y, hankel2};
use num_complex::Complex64;

type Outcome = Result<String, String>;

fn rel(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn component_err(got: Complex64, want: (f64, f64)) -> f64 {
    rel(got.re, want.0).max(rel(got.im, want.1))
}

fn table1_roots() -> Outcome {
    let fp = table2();
    let (mut worst, mut slowest) = (0.0f64, 0.0f64);
    for (k, row) in TABLE1 {
        let start = Instant::now();
        let root = find_gamma(k, &fp, None).map_err(|e| e.to_string())?;
        solve_coefficients(&root, &fp).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed().as_secs_f64());
        let err = component_err(root.gamma, row[0]);
        if err > 1e-8 {
            return Err(format!("k = {k}: gamma = {} off by {err:.2e}", root.gamma));
        }
        worst = worst.max(err);
    }
    if slowest > 1.0 {
        return Err(format!("slowest mode took {slowest:.3} s"));
    }
    Ok(format!("max component error {worst:.1e}, slowest mode {:.1} ms", 1e3 * slowest))
}

fn table1_coefficients() -> Outcome {
    let fp = table2();
    let mut worst = 0.0f64;
    for (k, row) in TABLE1 {
        let sol = droplet_modes::modes::solve_mode(k, &fp).map_err(|e| e.to_string())?;
        let t = Table1Values::from_solution(&sol);
        for (name, got, want) in [("A", t.a, row[1]), ("B", t.b, row[2]), ("E", t.e, row[3]), ("F", t.f, row[4])] {
            let err = component_err(got, want);
            if err > 1e-6 {
                return Err(format!("k = {k}: {name} = {got} off by {err:.2e}"));
            }
            worst = worst.max(err);
        }
    }
    Ok(format!("max component error {worst:.1e}"))
}

fn interface_residuals() -> Outcome {
    let fp = table2();
    let mut notes = vec![];
    for k in [2, 4] {
        let sol = droplet_modes::modes::solve_mode(k, &fp).map_err(|e| e.to_string())?;
        let ms = ModeSpec::new(k, 1.0, 0.01).unwrap();
        let r: Vec<_> = [128.0, 256.0, 512.0]
            .iter()
            .map(|n| check_interface(&ms, &sol, &fp, fp.r0 / n, 64))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let kin = r.iter().map(|x| x.kinematic).fold(0.0, f64::max);
        if kin > 1e-9 {
            return Err(format!("k = {k}: kinematic residual {kin:.2e}"));
        }
        for w in r.windows(2) {
            let on = (w[0].dynamic_normal / w[1].dynamic_normal).log2();
            let ot = (w[0].dynamic_tangential / w[1].dynamic_tangential).log2();
            if (on - 1.0).abs() > 0.1 || (ot - 1.0).abs() > 0.1 {
                return Err(format!("k = {k}: observed orders {on:.3}, {ot:.3}"));
            }
        }
        let ext = check_interface_extrapolated(&ms, &sol, &fp, fp.r0 / 64.0, 64, 5).map_err(|e| e.to_string())?;
        let lim = ext.dynamic_normal.max(ext.dynamic_tangential);
        if lim > 1e-6 {
            return Err(format!("k = {k}: extrapolated dynamic residual {lim:.2e}"));
        }
        notes.push(format!("k={k}: kinematic {kin:.0e}, limit {lim:.0e}"));
    }
    Ok(notes.join("; "))
}

fn bulk_residuals() -> Outcome {
    let fp = table2();
    let mut orders = vec![];
    for (k, beta) in [(2, 1.0), (4, 0.3)] {
        let sol = droplet_modes::modes::solve_mode(k, &fp).map_err(|e| e.to_string())?;
        let ms = ModeSpec::new(k, beta, 0.01).unwrap();
        for d in [Domain::Droplet, Domain::Ambient] {
            let r: Vec<_> = [64.0, 128.0, 256.0]
                .iter()
                .map(|n| check_bulk(&ms, &sol, &fp, d, fp.r0 / n, 24, Execution::default()))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for w in r.windows(2) {
                let om = (w[0].momentum / w[1].momentum).log2();
                let od = (w[0].divergence / w[1].divergence).log2();
                if (om - 2.0).abs() > 0.2 || (od - 2.0).abs() > 0.2 {
                    return Err(format!("k = {k} {d:?}: orders {om:.3}, {od:.3}"));
                }
                orders.push(om);
                orders.push(od);
            }
        }
    }
    let lo = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = orders.iter().copied().fold(0.0, f64::max);
    Ok(format!("observed orders in [{lo:.3}, {hi:.3}]"))
}

fn special_function_identities() -> Outcome {
    let mut r = rng(2024);
    let mut worst = 0.0f64;
    let f = |g: fn(i32, Complex64) -> droplet_modes::error::Result<Complex64>, n: i32, z: Complex64| g(n, z).map_err(|e| e.to_string());
    for _ in 0..1000 {
        let z = annulus_point(&mut r, 0.1, 50.0, 1e-3);
        for n in 0..7 {
            let a = f(bessel_j, n, z)? * f(bessel_y, n + 1, z)?;
            let b = f(bessel_j, n + 1, z)? * f(bessel_y, n, z)?;
            let w = 2.0 / (PI * z);
            let wr = (a - b + w).norm() / a.norm().max(b.norm()).max(w.norm());
            worst = worst.max(wr);
            if n >= 1 {
                for g in [bessel_j, bessel_y, hankel2] {
                    let (lo, mid, hi) = (f(g, n - 1, z)?, f(g, n, z)? * (2.0 * n as f64) / z, f(g, n + 1, z)?);
                    worst = worst.max((lo + hi - mid).norm() / lo.norm().max(hi.norm()).max(mid.norm()));
                }
            }
            if worst > 1e-10 {
                return Err(format!("identity defect {worst:.2e} at n = {n}, z = {z}"));
            }
        }
    }
    Ok(format!("max defect {worst:.1e} over 1000 points"))
}

fn deviation_metric() -> Outcome {
    let fp = table2();
    let sol = droplet_modes::modes::solve_mode(2, &fp).map_err(|e| e.to_string())?;
    let ms = ModeSpec::new(2, 1.0, 0.05).unwrap();
    let reference = AnalyticReference::new(&ms, &sol, &fp);
    let times: Vec<f64> = (0..11).map(|i| 0.5 * sol.period() * i as f64 / 10.0).collect();
    let series = |grid: &Grid, shift: f64, scale: f64| -> Result<SnapshotSeries, String> {
        let snaps = times
            .iter()
            .map(|&t| {
                let mut s = reference.sample(grid, t + shift).map_err(|e| e.to_string())?;
                s.t = t;
                s.u.iter_mut().for_each(|u| *u = [u[0] * scale, u[1] * scale]);
                Ok(s)
            })
            .collect::<Result<Vec<_>, String>>()?;
        SnapshotSeries::new(snaps).map_err(|e| e.to_string())
    };
    let dev = |s: &SnapshotSeries, region| dev_metric(s, &reference, region).map(|d| d.dev).map_err(|e| e.to_string());

    let grid = Grid::square(QUARTER_SIDE, 129).unwrap();
    let own = dev(&series(&grid, 0.0, 1.0)?, Region::Quarter)?;
    if own != 0.0 {
        return Err(format!("self deviation {own:e}"));
    }
    for c in [1e-3, 1e-1] {
        let d = dev(&series(&grid, 0.0, 1.0 + c)?, Region::Quarter)?;
        if (d - c).abs() > 1e-12 * c {
            return Err(format!("scaled deviation {d} for c = {c}"));
        }
    }
    // resolution consistency on a quarter of a time step shift
    let tau = 0.25 * (times[1] - times[0]);
    let coarse = dev(&series(&grid, tau, 1.0)?, Region::Quarter)?;
    let fine = dev(&series(&Grid::square(QUARTER_SIDE, 257).unwrap(), tau, 1.0)?, Region::Quarter)?;
    let spread = rel(coarse, fine);
    if spread > 1e-3 {
        return Err(format!("128² vs 256²: {coarse} vs {fine}"));
    }
    // quarter against the full square for a mode even in x and y
    let h = QUARTER_SIDE / 64.0;
    let full = Grid::new(-QUARTER_SIDE, -QUARTER_SIDE, h, h, 129, 129).unwrap();
    let s = series(&full, tau, 1.0)?;
    let (dq, df) = (dev(&s, Region::Quarter)?, dev(&s, Region::Full)?);
    if rel(dq, df) > 1e-12 {
        return Err(format!("quarter {dq} vs full {df}"));
    }
    Ok(format!("self 0, scaling exact, 128² vs 256² spread {spread:.1e}"))
}

fn closure_properties() -> Outcome {
    for (rd, ra) in [(1e3f64, 1.0f64), (2.0, 1.0), (1.0, 1e3)] {
        let (h, l) = if rd > ra { (rd, ra) } else { (ra, rd) };
        let lam = l / (h - l);
        let s = if rd > ra { 1.0 } else { -1.0 };
        let curv = 0.5 * l / (lam * lam);
        for k in [-1.0 - 2.0 * lam, -1.0 - lam, 1.0 + lam, 1.0 + 2.0 * lam].map(|x| s * x) {
            let (lo, hi) = (k - 4.0 * f64::EPSILON * k.abs(), k + 4.0 * f64::EPSILON * k.abs());
            let v = |x| density_extension(rd, ra, x).unwrap();
            let d = |x| density_extension_derivative(rd, ra, x).unwrap();
            let dv = (v(lo) - v(hi)).abs();
            let dd = (d(lo) - d(hi)).abs();
            if dv > 64.0 * f64::EPSILON * h || dd > curv * (hi - lo) + 64.0 * f64::EPSILON * (h - l) {
                return Err(format!("density knot {k} for ({rd}, {ra}): jumps {dv:e}, {dd:e}"));
            }
        }
    }
    let fp = table2();
    let vis = |phi| viscosity(&fp, phi, 1.0).unwrap();
    let geo = (fp.eta_d * fp.eta_a).sqrt();
    if rel(vis(1.0), fp.eta_d) > 1e-14 || rel(vis(-1.0), fp.eta_a) > 1e-14 || rel(vis(0.0), geo) > 1e-14 {
        return Err("viscosity endpoint or geometric mean".into());
    }
    let sigma = fp.sigma_ch();
    let got = excess_tension(&fp, sigma, fp.r0 / 100.0, 4001).map_err(|e| e.to_string())?;
    let err = rel(got, fp.sigma_da);
    if err > 1e-6 {
        return Err(format!("excess tension off by {err:.2e}"));
    }
    Ok(format!("knots C¹, viscosity exact, excess tension error {err:.1e}"))
}

fn mobility_fit_substitute() -> Outcome {
    let mut worst = 0.0f64;
    for (x0, y0, a) in [(-23.0, -2.5, 0.8), (-18.2, -4.0, 3.1), (-27.5, -1.2, 0.07)] {
        let pts = [x0 - 1.1, x0 + 0.3, x0 + 2.0].map(|x: f64| (x.exp(), (a * (x - x0) * (x - x0) + y0).exp()));
        let v = fit_optimal_mobility(&pts).map_err(|e| e.to_string())?;
        worst = worst.max((v.mobility.ln() - x0).abs()).max((v.dev.ln() - y0).abs());
    }
    if worst > 1e-10 {
        return Err(format!("vertex off by {worst:.2e} in log space"));
    }
    deviation_metric().map_err(|e| format!("deviation harness: {e}"))?;
    Ok(format!("solver tables not reproducible here; synthetic vertices recovered to {worst:.0e}, harness validated"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 dispersion roots", table1_roots),
        ("2 modal coefficients", table1_coefficients),
        ("3 interface residuals", interface_residuals),
        ("4 bulk residuals", bulk_residuals),
        ("5 special functions", special_function_identities),
        ("6 deviation metric", deviation_metric),
        ("7 closure properties", closure_properties),
        ("8 mobility fit (substitute)", mobility_fit_substitute),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
