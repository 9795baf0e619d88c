//! Algebraic closures of the Navier–Stokes–Cahn–Hilliard mixture model.
//!
//! `φ = 1` is pure droplet fluid, `φ = −1` pure ambient fluid. Values outside
//! `[−1, 1]` are allowed.

use crate::error::{Error, Result};
use crate::modes::FluidPair;

pub type Tensor2 = [[f64; 2]; 2];

/// Local state needed by the stress closures.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MixtureState {
    pub phi: f64,
    /// 1/m
    pub grad_phi: [f64; 2],
    pub grad_mu: [f64; 2],
    /// `grad_u[i][j] = ∂u_i/∂x_j` [1/s]
    pub grad_u: Tensor2,
}

/// Piecewise density: linear between `−1−λ` and `1+λ`, quadratic blends to
/// the constants `ρ_A/4` and `ρ_D + 3ρ_A/4` beyond, `λ = ρ_A/(ρ_D − ρ_A)`.
/// When `ρ_D < ρ_A` the species are swapped (`φ → −φ`) so `λ > 0`.
pub fn density_extension(rho_d: f64, rho_a: f64, phi: f64) -> Result<f64> {
    if rho_d == rho_a {
        return Err(Error::Parameter("density extension needs rho_d ≠ rho_a".into()));
    }
    if !(rho_d > 0.0 && rho_a > 0.0) {
        return Err(Error::Parameter("densities must be positive".into()));
    }
    let (heavy, light, x) = if rho_d > rho_a { (rho_d, rho_a, phi) } else { (rho_a, rho_d, -phi) };
    let lam = light / (heavy - light);
    let q = 0.25 * light / (lam * lam);
    Ok(if x <= -1.0 - 2.0 * lam {
        0.25 * light
    } else if x < -1.0 - lam {
        0.25 * light + q * (1.0 + 2.0 * lam + x).powi(2)
    } else if x <= 1.0 + lam {
        0.5 * (1.0 + x) * heavy + 0.5 * (1.0 - x) * light
    } else if x < 1.0 + 2.0 * lam {
        heavy + 0.75 * light - q * (1.0 + 2.0 * lam - x).powi(2)
    } else {
        heavy + 0.75 * light
    })
}

/// `dρ/dφ` of [`density_extension`].
pub fn density_extension_derivative(rho_d: f64, rho_a: f64, phi: f64) -> Result<f64> {
    density_extension(rho_d, rho_a, phi)?;
    let (heavy, light, x, sign) = if rho_d > rho_a { (rho_d, rho_a, phi, 1.0) } else { (rho_a, rho_d, -phi, -1.0) };
    let lam = light / (heavy - light);
    let q = 0.25 * light / (lam * lam);
    let d = if x <= -1.0 - 2.0 * lam || x >= 1.0 + 2.0 * lam {
        0.0
    } else if x < -1.0 - lam {
        2.0 * q * (1.0 + 2.0 * lam + x)
    } else if x <= 1.0 + lam {
        0.5 * (heavy - light)
    } else {
        2.0 * q * (1.0 + 2.0 * lam - x)
    };
    Ok(sign * d)
}

pub fn density(fp: &FluidPair, phi: f64) -> f64 {
    density_extension(fp.rho_d, fp.rho_a, phi).expect("FluidPair has distinct positive densities")
}

/// Arrhenius mixture viscosity,
/// `log η = ((1+φ)Λ log η_D + (1−φ) log η_A) / ((1+φ)Λ + (1−φ))`.
pub fn viscosity(fp: &FluidPair, phi: f64, molar_ratio: f64) -> Result<f64> {
    if !(molar_ratio > 0.0 && molar_ratio.is_finite()) {
        return Err(Error::Parameter(format!("molar ratio must be positive, got {molar_ratio}")));
    }
    // pure phases exactly, not through exp(ln η)
    if phi == 1.0 {
        return Ok(fp.eta_d);
    }
    if phi == -1.0 {
        return Ok(fp.eta_a);
    }
    let wd = (1.0 + phi) * molar_ratio;
    let wa = 1.0 - phi;
    let den = wd + wa;
    if den.abs() <= 1e-12 * (wd.abs() + wa.abs()) {
        return Err(Error::Parameter(format!("Arrhenius weights cancel at phi = {phi}")));
    }
    Ok(((wd * fp.eta_d.ln() + wa * fp.eta_a.ln()) / den).exp())
}

/// `(Ψ, Ψ′)` with `Ψ = (φ²−1)²/4`.
pub fn double_well(phi: f64) -> (f64, f64) {
    let a = phi * phi - 1.0;
    (0.25 * a * a, phi * a)
}

/// Diffusive mass flux `J = m (ρ_A − ρ_D)/2 ∇μ`.
pub fn flux_j(fp: &FluidPair, mobility: f64, grad_mu: [f64; 2]) -> [f64; 2] {
    let c = mobility * 0.5 * (fp.rho_a - fp.rho_d);
    [c * grad_mu[0], c * grad_mu[1]]
}

/// Viscous stress `τ = η(∇u + ∇uᵀ)` (Arrhenius with `Λ = 1`) and capillary
/// stress `ζ = −σε∇φ⊗∇φ + I(σε|∇φ|²/2 + σΨ/ε)`.
pub fn stresses(fp: &FluidPair, sigma: f64, eps: f64, state: &MixtureState) -> Result<(Tensor2, Tensor2)> {
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("interface thickness must be positive, got {eps}")));
    }
    let eta = viscosity(fp, state.phi, 1.0)?;
    let g = &state.grad_u;
    let mut tau = [[0.0; 2]; 2];
    let mut zeta = [[0.0; 2]; 2];
    let gp = state.grad_phi;
    let iso = 0.5 * sigma * eps * (gp[0] * gp[0] + gp[1] * gp[1]) + sigma / eps * double_well(state.phi).0;
    for i in 0..2 {
        for j in 0..2 {
            tau[i][j] = eta * (g[i][j] + g[j][i]);
            zeta[i][j] = -sigma * eps * (gp[i] * gp[j]) + if i == j { iso } else { 0.0 };
        }
    }
    Ok((tau, zeta))
}

/// `T_diff = ε³/(σ m)`.
pub fn diffusive_time_scale(eps: f64, sigma: f64, mobility: f64) -> Result<f64> {
    if !(eps > 0.0 && sigma > 0.0 && mobility > 0.0) {
        return Err(Error::Parameter("eps, sigma and mobility must be positive".into()));
    }
    Ok(eps.powi(3) / (sigma * mobility))
}

/// Tangential excess of `ζ` across the planar equilibrium profile
/// `φ(s) = tanh(s/(√2ε))`, by trapezoid quadrature on `n` nodes over
/// `|s| ≤ 40ε`. Equals `2√2σ/3` in the limit.
pub fn excess_tension(fp: &FluidPair, sigma: f64, eps: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Parameter("quadrature needs at least 3 nodes".into()));
    }
    let half = 40.0 * eps;
    let ds = 2.0 * half / (n - 1) as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let s = -half + i as f64 * ds;
        let x = s / (std::f64::consts::SQRT_2 * eps);
        let phi = x.tanh();
        let dphi = (1.0 - phi * phi) / (std::f64::consts::SQRT_2 * eps);
        let state = MixtureState { phi, grad_phi: [dphi, 0.0], ..Default::default() };
        let (_, zeta) = stresses(fp, sigma, eps, &state)?;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        sum += w * zeta[1][1];
    }
    Ok(sum * ds)
}
