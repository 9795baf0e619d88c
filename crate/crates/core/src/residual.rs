//! Finite-difference verification of the analytic fields against the
//! linearized sharp-interface equations.
//!
//! Time derivatives are exact (multiplication of the complex amplitude by
//! `−γ`); only spatial derivatives are discretized, so the residuals measure
//! the stencil error on top of whatever error the fields carry.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fields::{curvature_amplitude, pressure_amplitude, velocity_amplitude, Domain, PolarPoint};
use crate::modes::{FluidPair, ModalSolution, ModeSpec};

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Per-domain pair of residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainPair {
    pub droplet: f64,
    pub ambient: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BulkResidual {
    pub momentum: f64,
    pub divergence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceResidual {
    pub kinematic: f64,
    pub dynamic_normal: f64,
    pub dynamic_tangential: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub momentum_res: DomainPair,
    pub div_res: DomainPair,
    pub kinematic_res: f64,
    /// One-sided stencils at `stencil_h`.
    pub dynamic_normal_res: f64,
    pub dynamic_tangential_res: f64,
    /// Richardson limit over `h, h/2, …, h/16`.
    pub dynamic_normal_extrapolated: f64,
    pub dynamic_tangential_extrapolated: f64,
    /// m
    pub stencil_h: f64,
    pub theta_samples: usize,
    pub bulk_samples: usize,
}

fn cart_velocity(ms: &ModeSpec, sol: &ModalSolution, x: f64, y: f64, d: Domain) -> Result<[Complex64; 2]> {
    let p = PolarPoint::from_cartesian(x, y);
    let [ur, ut] = velocity_amplitude(ms, sol, p, d)?;
    let (s, c) = p.theta.sin_cos();
    Ok([ur * c - ut * s, ur * s + ut * c])
}

fn cart_pressure(ms: &ModeSpec, sol: &ModalSolution, fp: &FluidPair, x: f64, y: f64, d: Domain) -> Result<Complex64> {
    pressure_amplitude(ms, sol, fp, PolarPoint::from_cartesian(x, y), d)
}

/// Deterministic sample radii/angles strictly inside a domain.
fn bulk_points(r0: f64, domain: Domain, n: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = match domain {
        Domain::Droplet => (0.2 * r0, 0.8 * r0),
        _ => (1.2 * r0, 2.5 * r0),
    };
    (0..n)
        .map(|i| {
            let r = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            let th = 2.0 * PI * ((i as f64 * GOLDEN + 0.1) % 1.0);
            (r * th.cos(), r * th.sin())
        })
        .collect()
}

/// `ρ(−γ)u₁ − ηΔu₁ + ∇p₁` and `∇·u₁` with second-order central stencils of
/// step `h`, at `sample_count` fixed points of the chosen domain. Momentum is
/// relative to the local `|∇p₁|`, divergence to the local `|∇u₁|`; the
/// maximum over points is returned.
pub fn check_bulk(
    ms: &ModeSpec,
    sol: &ModalSolution,
    fp: &FluidPair,
    domain: Domain,
    h: f64,
    sample_count: usize,
    exec: Execution,
) -> Result<BulkResidual> {
    if domain == Domain::Auto {
        return Err(Error::Parameter("bulk check needs an explicit domain".into()));
    }
    if !(h > 0.0 && 3.0 * h < 0.2 * sol.r0) {
        return Err(Error::Parameter(format!("stencil step {h} must satisfy 0 < 3h < R₀/5")));
    }
    if ms.delta == 0.0 || sample_count == 0 {
        return Ok(BulkResidual { momentum: 0.0, divergence: 0.0 });
    }
    let (rho, eta) = match domain {
        Domain::Droplet => (fp.rho_d, fp.eta_d),
        _ => (fp.rho_a, fp.eta_a),
    };
    let pts = bulk_points(sol.r0, domain, sample_count);
    let per_point = exec.map(&pts, |&(x, y)| -> Result<[f64; 4]> {
        let u = |dx: f64, dy: f64| cart_velocity(ms, sol, x + dx, y + dy, domain);
        let p = |dx: f64, dy: f64| cart_pressure(ms, sol, fp, x + dx, y + dy, domain);
        let (c, e, w, n, s) = (u(0.0, 0.0)?, u(h, 0.0)?, u(-h, 0.0)?, u(0.0, h)?, u(0.0, -h)?);
        let grad_p = [(p(h, 0.0)? - p(-h, 0.0)?) / (2.0 * h), (p(0.0, h)? - p(0.0, -h)?) / (2.0 * h)];

        let mut res2 = 0.0;
        for i in 0..2 {
            let inertia = rho * (-sol.gamma) * c[i];
            let viscous = eta * (e[i] + w[i] + n[i] + s[i] - 4.0 * c[i]) / (h * h);
            res2 += (inertia - viscous + grad_p[i]).norm_sqr();
        }
        let gp = (grad_p[0].norm_sqr() + grad_p[1].norm_sqr()).sqrt();
        let dux = (e[0] - w[0]) / (2.0 * h);
        let dvy = (n[1] - s[1]) / (2.0 * h);
        let duy = (n[0] - s[0]) / (2.0 * h);
        let dvx = (e[1] - w[1]) / (2.0 * h);
        let gu = (dux.norm_sqr() + dvy.norm_sqr() + duy.norm_sqr() + dvx.norm_sqr()).sqrt();
        Ok([res2.sqrt(), gp, (dux + dvy).norm(), gu])
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    // relative floors keep 0/0 away at nodes of the angular factor
    let floor = |j: usize| 1e-30 * per_point.iter().map(|v| v[j]).fold(0.0, f64::max);
    let (fp_floor, fu_floor) = (floor(1), floor(3));
    let mut out = BulkResidual { momentum: 0.0, divergence: 0.0 };
    for v in &per_point {
        out.momentum = out.momentum.max(v[0] / (v[1] + fp_floor));
        out.divergence = out.divergence.max(v[2] / (v[3] + fu_floor));
    }
    Ok(out)
}

/// Complex residuals of the interface conditions at one angle.
struct InterfaceTerms {
    normal: Complex64,
    tangential: Complex64,
    normal_scale: f64,
    tangential_scale: f64,
}

fn interface_terms(ms: &ModeSpec, sol: &ModalSolution, fp: &FluidPair, theta: f64, h: f64) -> Result<InterfaceTerms> {
    let r0 = sol.r0;
    let dth = h / r0;
    let at = |r: f64, th: f64, d: Domain| velocity_amplitude(ms, sol, PolarPoint { r, theta: th.rem_euclid(2.0 * PI) }, d);

    // one-sided in r, central in θ; `dir` points into the domain
    let side = |d: Domain, dir: f64, eta: f64| -> Result<(Complex64, Complex64, f64)> {
        let u0 = at(r0, theta, d)?;
        let u1 = at(r0 + dir * h, theta, d)?;
        let dr_ur = (u1[0] - u0[0]) / (dir * h);
        let dr_ut = (u1[1] - u0[1]) / (dir * h);
        let dth_ur = (at(r0, theta + dth, d)?[0] - at(r0, theta - dth, d)?[0]) / (2.0 * dth);
        let normal = 2.0 * eta * dr_ur;
        let terms = [dr_ut, u0[1] / r0, dth_ur / r0];
        let shear = eta * (terms[0] - terms[1] + terms[2]);
        let largest = terms.iter().map(|t| eta * t.norm()).fold(0.0, f64::max);
        Ok((normal, shear, largest))
    };
    let (nd, sd, sd_scale) = side(Domain::Droplet, -1.0, fp.eta_d)?;
    let (na, sa, sa_scale) = side(Domain::Ambient, 1.0, fp.eta_a)?;
    let p_at = |d| pressure_amplitude(ms, sol, fp, PolarPoint { r: r0, theta }, d);
    let (pd, pa) = (p_at(Domain::Droplet)?, p_at(Domain::Ambient)?);
    let rhs = fp.sigma_da * curvature_amplitude(ms, sol, theta);
    Ok(InterfaceTerms {
        normal: -nd + pd + na - pa - rhs,
        tangential: -sd + sa,
        normal_scale: rhs.norm().max(pd.norm()),
        tangential_scale: sd_scale.max(sa_scale),
    })
}

/// Complex normal and tangential stress defects at one angle, each divided by
/// its own scale, with one-sided radial stencils of step `h`.
pub fn interface_defects(ms: &ModeSpec, sol: &ModalSolution, fp: &FluidPair, theta: f64, h: f64) -> Result<[Complex64; 2]> {
    check_samples(h, 1, sol.r0)?;
    let t = interface_terms(ms, sol, fp, theta, h)?;
    Ok([t.normal / t.normal_scale.max(f64::MIN_POSITIVE), t.tangential / t.tangential_scale.max(f64::MIN_POSITIVE)])
}

fn thetas(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| 2.0 * PI * i as f64 / n as f64)
}

fn kinematic_residual(ms: &ModeSpec, sol: &ModalSolution, n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for th in thetas(n) {
        let pt = PolarPoint { r: sol.r0, theta: th };
        let d = velocity_amplitude(ms, sol, pt, Domain::Droplet)?;
        let a = velocity_amplitude(ms, sol, pt, Domain::Ambient)?;
        let (b, s) = ms.weights();
        let (sn, cs) = (f64::from(ms.k) * th).sin_cos();
        let v1 = -sol.r0 * sol.gamma * (b * cs + s * sn);
        worst = worst.max((d[0] - v1).norm()).max((a[0] - v1).norm()).max((d[1] - a[1]).norm());
        scale = scale.max(v1.norm()).max(d[1].norm());
    }
    Ok(worst / scale)
}

fn reduce(terms: &[InterfaceTerms]) -> (f64, f64) {
    let ns = terms.iter().map(|t| t.normal_scale).fold(0.0, f64::max);
    let ts = terms.iter().map(|t| t.tangential_scale).fold(0.0, f64::max);
    let nr = terms.iter().map(|t| t.normal.norm()).fold(0.0, f64::max);
    let tr = terms.iter().map(|t| t.tangential.norm()).fold(0.0, f64::max);
    (nr / ns.max(f64::MIN_POSITIVE), tr / ts.max(f64::MIN_POSITIVE))
}

fn check_samples(h: f64, theta_samples: usize, r0: f64) -> Result<()> {
    if !(h > 0.0 && h < 0.5 * r0) {
        return Err(Error::Parameter(format!("stencil step {h} must lie in (0, R₀/2)")));
    }
    if theta_samples == 0 {
        return Err(Error::Parameter("need at least one θ sample".into()));
    }
    Ok(())
}

/// Kinematic and dynamic interface conditions at `theta_samples` uniform
/// angles, stresses from first-order one-sided differences of step `h`.
pub fn check_interface(ms: &ModeSpec, sol: &ModalSolution, fp: &FluidPair, h: f64, theta_samples: usize) -> Result<InterfaceResidual> {
    check_samples(h, theta_samples, sol.r0)?;
    if ms.delta == 0.0 {
        return Ok(InterfaceResidual { kinematic: 0.0, dynamic_normal: 0.0, dynamic_tangential: 0.0 });
    }
    let terms = thetas(theta_samples).map(|th| interface_terms(ms, sol, fp, th, h)).collect::<Result<Vec<_>>>()?;
    let (dynamic_normal, dynamic_tangential) = reduce(&terms);
    Ok(InterfaceResidual { kinematic: kinematic_residual(ms, sol, theta_samples)?, dynamic_normal, dynamic_tangential })
}

/// As [`check_interface`], with the stress residuals Richardson-extrapolated
/// over `levels` halvings of `h` (error terms `h, h², …` removed in turn).
pub fn check_interface_extrapolated(
    ms: &ModeSpec,
    sol: &ModalSolution,
    fp: &FluidPair,
    h: f64,
    theta_samples: usize,
    levels: usize,
) -> Result<InterfaceResidual> {
    check_samples(h, theta_samples, sol.r0)?;
    if levels == 0 {
        return Err(Error::Parameter("extrapolation needs at least one level".into()));
    }
    if ms.delta == 0.0 {
        return Ok(InterfaceResidual { kinematic: 0.0, dynamic_normal: 0.0, dynamic_tangential: 0.0 });
    }
    let mut terms = Vec::with_capacity(theta_samples);
    for th in thetas(theta_samples) {
        let table = (0..levels)
            .map(|l| interface_terms(ms, sol, fp, th, h / f64::from(1u32 << l)))
            .collect::<Result<Vec<_>>>()?;
        let mut n: Vec<Complex64> = table.iter().map(|t| t.normal).collect();
        let mut s: Vec<Complex64> = table.iter().map(|t| t.tangential).collect();
        for order in 1..levels {
            let f = f64::from(1u32 << order);
            for i in 0..levels - order {
                n[i] = (f * n[i + 1] - n[i]) / (f - 1.0);
                s[i] = (f * s[i + 1] - s[i]) / (f - 1.0);
            }
        }
        terms.push(InterfaceTerms { normal: n[0], tangential: s[0], ..table[levels - 1] });
    }
    let (dynamic_normal, dynamic_tangential) = reduce(&terms);
    Ok(InterfaceResidual { kinematic: kinematic_residual(ms, sol, theta_samples)?, dynamic_normal, dynamic_tangential })
}

/// All residuals for one mode.
pub fn residual_report(
    ms: &ModeSpec,
    sol: &ModalSolution,
    fp: &FluidPair,
    h: f64,
    bulk_samples: usize,
    theta_samples: usize,
    exec: Execution,
) -> Result<ResidualReport> {
    let bd = check_bulk(ms, sol, fp, Domain::Droplet, h, bulk_samples, exec)?;
    let ba = check_bulk(ms, sol, fp, Domain::Ambient, h, bulk_samples, exec)?;
    let raw = check_interface(ms, sol, fp, h, theta_samples)?;
    let ext = check_interface_extrapolated(ms, sol, fp, h, theta_samples, 5)?;
    Ok(ResidualReport {
        momentum_res: DomainPair { droplet: bd.momentum, ambient: ba.momentum },
        div_res: DomainPair { droplet: bd.divergence, ambient: ba.divergence },
        kinematic_res: raw.kinematic,
        dynamic_normal_res: raw.dynamic_normal,
        dynamic_tangential_res: raw.dynamic_tangential,
        dynamic_normal_extrapolated: ext.dynamic_normal,
        dynamic_tangential_extrapolated: ext.dynamic_tangential,
        stencil_h: h,
        theta_samples,
        bulk_samples,
    })
}
