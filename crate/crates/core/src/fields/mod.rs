//! Analytic space-time fields of a solved mode.
//!
//! Every physical quantity is `δ·Re(a(r, θ) e^{−γt})` for a complex
//! amplitude `a`; the amplitudes are exposed so callers can differentiate
//! in time analytically before the real part is taken.

mod snapshot;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{FluidPair, ModalSolution, ModeSpec};
use crate::special::{bessel_j_pair, hankel2_pair};

pub use snapshot::{format_float, sample_snapshot, FieldSnapshot, Grid, SnapshotMeta};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    /// m
    pub r: f64,
    /// rad, in `[0, 2π)`
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0 && theta.is_finite()) {
            return Err(Error::Parameter(format!("invalid polar point ({r}, {theta})")));
        }
        Ok(PolarPoint { r, theta: theta.rem_euclid(2.0 * PI) })
    }

    pub fn from_cartesian(x: f64, y: f64) -> Self {
        PolarPoint { r: x.hypot(y), theta: y.atan2(x).rem_euclid(2.0 * PI) }
    }
}

/// Which solution branch to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Droplet,
    Ambient,
    /// Droplet for `r ≤ R₀`, ambient otherwise.
    Auto,
}

impl Domain {
    fn resolve(self, r: f64, r0: f64) -> Result<Domain> {
        match self {
            Domain::Auto if r <= r0 => Ok(Domain::Droplet),
            Domain::Auto => Ok(Domain::Ambient),
            Domain::Ambient if r == 0.0 => Err(Error::Domain("ambient branch is singular at r = 0".into())),
            d => Ok(d),
        }
    }
}

/// `(β cos kθ + √(1−β²) sin kθ, −√(1−β²) cos kθ + β sin kθ)`
fn angular(ms: &ModeSpec, theta: f64) -> (f64, f64) {
    let (b, s) = ms.weights();
    let (sn, cs) = (f64::from(ms.k) * theta).sin_cos();
    (b * cs + s * sn, -s * cs + b * sn)
}

fn time_factor(sol: &ModalSolution, t: f64) -> Complex64 {
    (-sol.gamma * t).exp()
}

/// `R_δ(θ, t) = Re(R₀ + R₀ δ Θ(θ) e^{−γt})`
pub fn interface_radius(ms: &ModeSpec, sol: &ModalSolution, theta: f64, t: f64) -> f64 {
    let (th, _) = angular(ms, theta);
    sol.r0 + sol.r0 * ms.delta * th * time_factor(sol, t).re
}

/// `∂_t R_δ`, the normal interface speed [m/s].
pub fn interface_velocity(ms: &ModeSpec, sol: &ModalSolution, theta: f64, t: f64) -> f64 {
    let (th, _) = angular(ms, theta);
    ms.delta * th * (-sol.r0 * sol.gamma * time_factor(sol, t)).re
}

/// First-order curvature of `r = R_δ(θ, t)`:
/// `R₀⁻¹ + δ R₀⁻¹ (k²−1) Θ(θ) Re(e^{−γt})`, with the same angular factor
/// `Θ = β cos kθ + √(1−β²) sin kθ` as the interface.
pub fn curvature_first_order(ms: &ModeSpec, sol: &ModalSolution, theta: f64, t: f64) -> f64 {
    let (th, _) = angular(ms, theta);
    curvature_with(ms, sol, th, t)
}

/// Curvature with the sine term subtracted, `β cos kθ − √(1−β²) sin kθ`.
/// Differs from the geometric curvature whenever `β < 1`; kept for comparison.
pub fn curvature_first_order_sine_flipped(ms: &ModeSpec, sol: &ModalSolution, theta: f64, t: f64) -> f64 {
    let (b, s) = ms.weights();
    let (sn, cs) = (f64::from(ms.k) * theta).sin_cos();
    curvature_with(ms, sol, b * cs - s * sn, t)
}

fn curvature_with(ms: &ModeSpec, sol: &ModalSolution, th: f64, t: f64) -> f64 {
    let k = f64::from(ms.k);
    (1.0 + ms.delta * (k * k - 1.0) * th * time_factor(sol, t).re) / sol.r0
}

/// Complex amplitude of the curvature perturbation, `κ₁ = a·e^{−γt}`.
pub fn curvature_amplitude(ms: &ModeSpec, sol: &ModalSolution, theta: f64) -> Complex64 {
    let k = f64::from(ms.k);
    let (th, _) = angular(ms, theta);
    Complex64::new((k * k - 1.0) * th / sol.r0, 0.0)
}

/// Complex amplitude `(u_r, u_θ)` of the first-order velocity, such that
/// `u₁ = Re(a e^{−γt})`.
pub fn velocity_amplitude(ms: &ModeSpec, sol: &ModalSolution, p: PolarPoint, domain: Domain) -> Result<[Complex64; 2]> {
    let zero = Complex64::new(0.0, 0.0);
    let (tr, tt) = angular(ms, p.theta);
    let k = ms.k as i32;
    let kf = f64::from(ms.k);
    let r = p.r;
    match domain.resolve(r, sol.r0)? {
        Domain::Droplet => {
            if r == 0.0 {
                return Ok([zero, zero]);
            }
            let (j, j_lo) = bessel_j_pair(k, sol.m_d * r)?;
            let rk = r.powi(k);
            let ur = (kf / r) * (sol.coeff_a * j + sol.coeff_e * rk);
            let ut = -sol.coeff_a * (sol.m_d * j_lo - (kf / r) * j) - sol.coeff_e * (kf * rk / r);
            Ok([ur * tr, ut * tt])
        }
        _ => {
            debug_assert!((sol.m_a * r).im < 0.0);
            let (h, h_lo) = hankel2_pair(k, sol.m_a * r)?;
            let rk = r.powi(-k);
            let ur = (kf / r) * (sol.coeff_b * h + sol.coeff_f * rk);
            let ut = -sol.coeff_b * (sol.m_a * h_lo - (kf / r) * h) + sol.coeff_f * (kf * rk / r);
            Ok([ur * tr, ut * tt])
        }
    }
}

/// Complex amplitude of the first-order pressure.
pub fn pressure_amplitude(ms: &ModeSpec, sol: &ModalSolution, fp: &FluidPair, p: PolarPoint, domain: Domain) -> Result<Complex64> {
    let (tr, _) = angular(ms, p.theta);
    let k = ms.k as i32;
    Ok(match domain.resolve(p.r, sol.r0)? {
        Domain::Droplet => sol.coeff_e * fp.eta_d * sol.m_d * sol.m_d * p.r.powi(k) * tr,
        _ => -sol.coeff_f * fp.eta_a * sol.m_a * sol.m_a * p.r.powi(-k) * tr,
    })
}

/// `(u_r, u_θ) = δ·Re(a e^{−γt})` [m/s].
pub fn velocity(ms: &ModeSpec, sol: &ModalSolution, p: PolarPoint, t: f64, domain: Domain) -> Result<(f64, f64)> {
    let a = velocity_amplitude(ms, sol, p, domain)?;
    let f = time_factor(sol, t);
    Ok((ms.delta * (a[0] * f).re, ms.delta * (a[1] * f).re))
}

/// Generating pressure plus `δ·Re(p₁)`.
pub fn pressure(ms: &ModeSpec, sol: &ModalSolution, fp: &FluidPair, p: PolarPoint, t: f64, domain: Domain) -> Result<f64> {
    let base = match domain.resolve(p.r, sol.r0)? {
        Domain::Droplet => fp.sigma_da / fp.r0,
        _ => 0.0,
    };
    let a = pressure_amplitude(ms, sol, fp, p, domain)?;
    Ok(base + ms.delta * (a * time_factor(sol, t)).re)
}

/// Cartesian components of a polar vector at angle `theta`.
pub fn to_cartesian(ur: f64, ut: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (ur * c - ut * s, ur * s + ut * c)
}

/// `(u_x, u_y)` at a Cartesian point, automatic branch.
pub fn velocity_cartesian(ms: &ModeSpec, sol: &ModalSolution, x: f64, y: f64, t: f64) -> Result<(f64, f64)> {
    if x == 0.0 && y == 0.0 {
        return Ok((0.0, 0.0));
    }
    let p = PolarPoint::from_cartesian(x, y);
    let (ur, ut) = velocity(ms, sol, p, t, Domain::Auto)?;
    Ok(to_cartesian(ur, ut, p.theta))
}

/// `tanh(d / (√2 ε))` with `d = R₀ − r` the signed distance to the
/// generating circle, positive inside the droplet.
pub fn initial_order_parameter(fp: &FluidPair, eps: f64, x: f64, y: f64) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Parameter(format!("interface thickness must be positive, got {eps}")));
    }
    Ok(((fp.r0 - x.hypot(y)) * FRAC_1_SQRT_2 / eps).tanh())
}

/// Velocity at the phase offset `t₀`, where the interface passes through
/// the generating circle.
pub fn initial_velocity(ms: &ModeSpec, sol: &ModalSolution, x: f64, y: f64) -> Result<(f64, f64)> {
    velocity_cartesian(ms, sol, x, y, sol.phase_offset())
}
