use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{det_augmented, relative_det};
use super::{FluidPair, Scales};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::special::ComplexScalar;

const MAX_NEWTON: usize = 80;
const STEP_TOL: f64 = 1e-12;
const ROOT_TOL: f64 = 1e-12;

/// A root of the dispersion relation for one wave number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionRoot {
    pub k: u32,
    pub gamma_nd: ComplexScalar,
    /// [1/s]
    pub gamma: ComplexScalar,
    pub iterations: usize,
    /// `|det| / Π‖row‖₂` at the root.
    pub det_residual: f64,
    /// Whether the grid scan was needed to reach the root.
    pub used_scan: bool,
}

/// Inviscid estimate `γ̃₀ = ω̃(0.01 − i)` with
/// `ω² = (k³ − k) σ_DA / ((ρ_D + ρ_A) R₀³)`.
pub fn inviscid_seed(k: u32, fp: &FluidPair) -> ComplexScalar {
    let kf = f64::from(k);
    let omega = ((kf.powi(3) - kf) * fp.sigma_da / ((fp.rho_d + fp.rho_a) * fp.r0.powi(3))).sqrt();
    let w = omega * fp.scales().time;
    Complex64::new(0.01 * w, -w)
}

fn newton(k: u32, scales: &Scales, start: Complex64) -> Option<(Complex64, usize)> {
    let mut g = start;
    for it in 1..=MAX_NEWTON {
        let f = det_augmented(k, g, scales).ok()?;
        let h = 1e-7 * g.norm();
        let fp = det_augmented(k, g + h, scales).ok()?;
        let fm = det_augmented(k, g - h, scales).ok()?;
        let df = (fp - fm) / (2.0 * h);
        let mut step = -f / df;
        if !step.is_finite() {
            return None;
        }
        let cap = 0.25 * g.norm();
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        g += step;
        if g.im >= 0.0 {
            return None;
        }
        if step.norm() <= STEP_TOL * g.norm() {
            return Some((g, it));
        }
    }
    None
}

fn accept(k: u32, scales: &Scales, g: Complex64) -> Result<f64> {
    if !(g.re > 0.0 && g.im < 0.0) {
        return Err(Error::Quadrant { k, re: g.re, im: g.im });
    }
    let r = relative_det(k, g, scales)?;
    if r > ROOT_TOL {
        return Err(Error::NoRoot { k, reason: format!("relative determinant {r:e} at converged point") });
    }
    Ok(r)
}

/// Local minima of `|det|` over a log-polar grid covering the fourth quadrant.
fn scan_candidates(k: u32, scales: &Scales, omega_nd: f64) -> Vec<Complex64> {
    const NR: usize = 64;
    const NA: usize = 48;
    let mut vals = vec![f64::INFINITY; NR * NA];
    let mut pts = vec![Complex64::new(0.0, 0.0); NR * NA];
    for i in 0..NR {
        let r = omega_nd * 10f64.powf(-2.0 + 4.0 * i as f64 / (NR - 1) as f64);
        for j in 0..NA {
            let a = -PI / 2.0 * (0.005 + 0.99 * j as f64 / (NA - 1) as f64);
            let g = Complex64::from_polar(r, a);
            pts[i * NA + j] = g;
            if let Ok(v) = relative_det(k, g, scales) {
                vals[i * NA + j] = v;
            }
        }
    }
    let mut minima: Vec<(f64, Complex64)> = Vec::new();
    for i in 1..NR - 1 {
        for j in 0..NA {
            let v = vals[i * NA + j];
            let mut is_min = v.is_finite();
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni >= 0 && nj >= 0 && (ni as usize) < NR && (nj as usize) < NA && vals[ni as usize * NA + nj as usize] < v {
                    is_min = false;
                }
            }
            if is_min {
                minima.push((v, pts[i * NA + j]));
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    minima.into_iter().map(|(_, g)| g).collect()
}

/// Solves `det (Ã | b̃)(k, γ̃) = 0` for the root with `Re γ̃ > 0 > Im γ̃`.
///
/// Newton iteration from `seed` (default [`inviscid_seed`]); if that fails,
/// Newton restarts from the local minima of a coarse grid scan.
pub fn find_gamma(k: u32, fp: &FluidPair, seed: Option<ComplexScalar>) -> Result<DispersionRoot> {
    if k < 2 {
        return Err(Error::Parameter(format!("wave number must be ≥ 2, got {k}")));
    }
    let scales = fp.scales();
    let seed0 = inviscid_seed(k, fp);
    let start = seed.unwrap_or(seed0);
    let done = |g: Complex64, iterations, used_scan| -> Result<DispersionRoot> {
        let det_residual = accept(k, &scales, g)?;
        Ok(DispersionRoot { k, gamma_nd: g, gamma: g / scales.time, iterations, det_residual, used_scan })
    };

    let mut last_err = None;
    if let Some((g, it)) = newton(k, &scales, start) {
        match done(g, it, false) {
            Ok(r) => return Ok(r),
            Err(e) => last_err = Some(e),
        }
    }
    for cand in scan_candidates(k, &scales, -seed0.im).into_iter().take(12) {
        if let Some((g, it)) = newton(k, &scales, cand) {
            match done(g, it, true) {
                Ok(r) => return Ok(r),
                Err(e) => last_err = Some(e),
            }
        }
    }
    Err(last_err.unwrap_or(Error::NoRoot { k, reason: "no convergent start point in the fourth quadrant".into() }))
}

/// Axis-aligned square in the nondimensional `γ̃` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaBox {
    pub center: ComplexScalar,
    pub half_width: f64,
}

impl GammaBox {
    /// Square of half-width `factor·|γ̃|` around a root.
    pub fn around(root: &DispersionRoot, factor: f64) -> Self {
        GammaBox { center: root.gamma_nd, half_width: factor * root.gamma_nd.norm() }
    }
}

/// Number of zeros of the determinant inside `bx`, by the argument principle.
///
/// The box must lie in the open lower half plane, where the determinant is
/// analytic.
pub fn count_roots_in_box(k: u32, scales: &Scales, bx: GammaBox) -> Result<u32> {
    let c = bx.center;
    let h = bx.half_width;
    if c.im + h >= 0.0 {
        return Err(Error::Parameter("root-count box must lie in the lower half plane".into()));
    }
    let corners = [
        Complex64::new(c.re - h, c.im - h),
        Complex64::new(c.re + h, c.im - h),
        Complex64::new(c.re + h, c.im + h),
        Complex64::new(c.re - h, c.im + h),
    ];
    let f = |g: Complex64| det_augmented(k, g, scales);
    let mut total = 0.0;
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        const N: usize = 64;
        let mut za = a;
        let mut fa = f(za)?;
        for i in 1..=N {
            let zb = a + (b - a) * (i as f64 / N as f64);
            let fb = f(zb)?;
            total += phase_change(&f, za, fa, zb, fb, 0)?;
            za = zb;
            fa = fb;
        }
    }
    let turns = total / (2.0 * PI);
    let n = turns.round();
    if (turns - n).abs() > 0.1 || n < 0.0 {
        return Err(Error::Convergence(format!("winding number {turns} is not an integer")));
    }
    Ok(n as u32)
}

fn phase_change<F>(f: &F, za: Complex64, fa: Complex64, zb: Complex64, fb: Complex64, depth: u32) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let d = (fb / fa).arg();
    if d.abs() < 0.3 {
        return Ok(d);
    }
    if depth > 30 {
        return Err(Error::Convergence("determinant vanishes on the contour".into()));
    }
    let zm = 0.5 * (za + zb);
    let fm = f(zm)?;
    Ok(phase_change(f, za, fa, zm, fm, depth + 1)? + phase_change(f, zm, fm, zb, fb, depth + 1)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetScanPoint {
    pub gamma_nd: ComplexScalar,
    pub relative_det: f64,
}

/// `|det| / Π‖row‖₂` on a uniform `n_re × n_im` grid, row-major in `Im`.
pub fn det_scan(
    k: u32,
    scales: &Scales,
    re: (f64, f64),
    im: (f64, f64),
    n_re: usize,
    n_im: usize,
    exec: Execution,
) -> Result<Vec<DetScanPoint>> {
    if n_re < 2 || n_im < 2 {
        return Err(Error::Parameter("scan needs at least 2 points per axis".into()));
    }
    let at = |i: usize, n: usize, (lo, hi): (f64, f64)| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    exec.map_range(n_re * n_im, |idx| {
        let g = Complex64::new(at(idx % n_re, n_re, re), at(idx / n_re, n_im, im));
        relative_det(k, g, scales).map(|relative_det| DetScanPoint { gamma_nd: g, relative_det })
    })
    .into_iter()
    .collect()
}
