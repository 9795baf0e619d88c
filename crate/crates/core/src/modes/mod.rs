//! Natural modes of the linearized droplet problem.
//!
//! For each wave number `k ≥ 2` the temporal response coefficient
//! `γ = α − iν` is a root of the determinant of the nondimensional 5×5
//! augmented matrix built from the kinematic and dynamic interface
//! conditions. At a root, the kernel of that matrix, scaled so that its last
//! entry is `−1`, gives the coefficients `(A, B, E, F)` of the droplet and
//! ambient velocity/pressure fields.
//!
//! Nondimensionalization uses droplet density, droplet viscosity and droplet
//! radius: time `ρ_D R₀²/η_D`, length `R₀`.

mod coeffs;
mod matrix;
mod root;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ComplexScalar;

pub use coeffs::{solve_coefficients, solve_mode, solve_modes, Table1Values};
pub use matrix::{augmented_matrix, det_augmented, m_from_gamma, relative_det, Wavenumbers};
pub use root::{count_roots_in_box, det_scan, find_gamma, inviscid_seed, DetScanPoint, DispersionRoot, GammaBox};

/// Physical configuration: droplet (`_d`) and ambient (`_a`) fluids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFluidPair")]
pub struct FluidPair {
    /// kg/m²
    pub rho_d: f64,
    /// kg/s (2D dynamic viscosity)
    pub eta_d: f64,
    pub rho_a: f64,
    pub eta_a: f64,
    /// kg·m/s² (2D surface tension)
    pub sigma_da: f64,
    /// m
    pub r0: f64,
}

#[derive(Deserialize)]
struct RawFluidPair {
    rho_d: f64,
    eta_d: f64,
    rho_a: f64,
    eta_a: f64,
    sigma_da: f64,
    r0: f64,
}

impl TryFrom<RawFluidPair> for FluidPair {
    type Error = Error;

    fn try_from(r: RawFluidPair) -> Result<Self> {
        FluidPair::new(r.rho_d, r.eta_d, r.rho_a, r.eta_a, r.sigma_da, r.r0)
    }
}

impl FluidPair {
    pub fn new(rho_d: f64, eta_d: f64, rho_a: f64, eta_a: f64, sigma_da: f64, r0: f64) -> Result<Self> {
        let fields = [
            ("rho_d", rho_d),
            ("eta_d", eta_d),
            ("rho_a", rho_a),
            ("eta_a", eta_a),
            ("sigma_da", sigma_da),
            ("r0", r0),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if rho_d == rho_a {
            return Err(Error::Parameter("rho_d and rho_a must differ".into()));
        }
        Ok(FluidPair { rho_d, eta_d, rho_a, eta_a, sigma_da, r0 })
    }

    /// Water droplet of radius √2·10 µm in air.
    pub fn water_in_air() -> Self {
        FluidPair {
            rho_d: 1.0e3,
            eta_d: 1.0e-3,
            rho_a: 1.0,
            eta_a: 1.813e-5,
            sigma_da: 7.28e-2,
            r0: std::f64::consts::SQRT_2 * 1.0e-5,
        }
    }

    pub fn scales(&self) -> Scales {
        nondimensionalize(self)
    }

    /// Cahn–Hilliard rescaled surface tension `σ = 3σ_DA/(2√2)`.
    pub fn sigma_ch(&self) -> f64 {
        3.0 * self.sigma_da / (2.0 * std::f64::consts::SQRT_2)
    }
}

/// Perturbation: wave number, orientation and relative amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub k: u32,
    pub beta: f64,
    pub delta: f64,
}

impl ModeSpec {
    pub fn new(k: u32, beta: f64, delta: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("wave number must be ≥ 2, got {k}")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::Parameter(format!("beta must lie in [0, 1], got {beta}")));
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::Parameter(format!("delta must be ≥ 0, got {delta}")));
        }
        Ok(ModeSpec { k, beta, delta })
    }

    /// Amplitudes above 0.1 are outside the regime where the linearization
    /// is a meaningful reference.
    pub fn is_small_amplitude(&self) -> bool {
        self.delta <= 0.1
    }

    /// `(β, √(1−β²))`, the cosine and sine weights of the mode shape.
    pub fn weights(&self) -> (f64, f64) {
        (self.beta, (1.0 - self.beta * self.beta).max(0.0).sqrt())
    }
}

/// Reference scales derived from `ρ_D`, `η_D`, `R₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scales {
    /// `ρ_D R₀²/η_D` [s]
    pub time: f64,
    /// `R₀` [m]
    pub length: f64,
    /// `η_A/η_D`
    pub eta_ratio: f64,
    /// `ρ_A/ρ_D`
    pub rho_ratio: f64,
    /// `σ_DA ρ_D R₀/η_D²`
    pub sigma_nd: f64,
}

pub fn nondimensionalize(fp: &FluidPair) -> Scales {
    Scales {
        time: fp.rho_d * fp.r0 * fp.r0 / fp.eta_d,
        length: fp.r0,
        eta_ratio: fp.eta_a / fp.eta_d,
        rho_ratio: fp.rho_a / fp.rho_d,
        sigma_nd: fp.sigma_da * fp.rho_d * fp.r0 / (fp.eta_d * fp.eta_d),
    }
}

/// A solved natural mode, dimensional and nondimensional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModalSolution {
    pub k: u32,
    /// Generating radius `R₀` [m].
    pub r0: f64,
    /// `γ = α − iν` [1/s]
    pub gamma: ComplexScalar,
    /// [1/m]
    pub m_d: ComplexScalar,
    pub m_a: ComplexScalar,
    /// [m²/s]
    pub coeff_a: ComplexScalar,
    /// [m²/s]
    pub coeff_b: ComplexScalar,
    /// [m^{2−k}/s]
    pub coeff_e: ComplexScalar,
    /// [m^{2+k}/s]
    pub coeff_f: ComplexScalar,
    pub gamma_nd: ComplexScalar,
    pub m_d_nd: ComplexScalar,
    pub m_a_nd: ComplexScalar,
    pub a_nd: ComplexScalar,
    pub b_nd: ComplexScalar,
    pub e_nd: ComplexScalar,
    pub f_nd: ComplexScalar,
    /// `|det| / Π‖row‖₂` of the augmented matrix at the root.
    pub det_residual: f64,
    /// `‖Ã x − b̃‖ / ‖b̃‖` for the extracted coefficients.
    pub system_residual: f64,
}

impl ModalSolution {
    /// Damping rate `α = Re γ` [1/s].
    pub fn damping(&self) -> f64 {
        self.gamma.re
    }

    /// Angular frequency `ν = −Im γ` [rad/s].
    pub fn frequency(&self) -> f64 {
        -self.gamma.im
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.frequency()
    }

    /// `t₀` with `−Im(γ) t₀ = π/2`, where the interface passes through the circle.
    pub fn phase_offset(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 / self.frequency()
    }
}
