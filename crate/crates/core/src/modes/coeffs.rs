use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{augmented_matrix, wavenumbers};
use super::root::{find_gamma, DispersionRoot};
use super::{FluidPair, ModalSolution};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg;

const PIVOT_FLOOR: f64 = 1e-9;
const SYSTEM_TOL: f64 = 1e-10;

/// Kernel of `(Ã | b̃)` at a dispersion root, scaled to `(Ã, B̃, Ẽ, F̃, −1)`,
/// then redimensionalized.
pub fn solve_coefficients(root: &DispersionRoot, fp: &FluidPair) -> Result<ModalSolution> {
    let k = root.k;
    let s = fp.scales();
    let g = root.gamma_nd;
    let m = augmented_matrix(k, g, &s)?;
    let (eq, _) = linalg::equilibrate_rows(&m);
    let nv = linalg::null_vector(&eq);
    let p = nv.relative_pivots;
    if p[3] < PIVOT_FLOOR {
        let nullity = p.iter().filter(|&&x| x < PIVOT_FLOOR).count();
        return Err(Error::Rank { k, nullity });
    }
    let last = nv.vector[4];
    if last.norm() == 0.0 {
        return Err(Error::Rank { k, nullity: 1 });
    }
    let x: Vec<Complex64> = nv.vector.iter().map(|v| -v / last).collect();

    // ‖Ã x − b̃‖ / ‖b̃‖ on the unscaled system
    let mut num = 0.0;
    let mut den = 0.0;
    for row in &m {
        let r: Complex64 = (0..4).map(|c| row[c] * x[c]).sum::<Complex64>() - row[4];
        num += r.norm_sqr();
        den += row[4].norm_sqr();
    }
    let system_residual = (num / den).sqrt();
    if !(system_residual <= SYSTEM_TOL) {
        return Err(Error::Convergence(format!("k = {k}: linear-system residual {system_residual:e}")));
    }

    let w = wavenumbers(g, s.rho_ratio, s.eta_ratio);
    let u = fp.eta_d / fp.rho_d;
    let kf = f64::from(k);
    Ok(ModalSolution {
        k,
        r0: s.length,
        gamma: g / s.time,
        m_d: w.m_d / s.length,
        m_a: w.m_a / s.length,
        coeff_a: x[0] * u,
        coeff_b: x[1] * u,
        coeff_e: x[2] * (u * s.length.powf(-kf)),
        coeff_f: x[3] * (u * s.length.powf(kf)),
        gamma_nd: g,
        m_d_nd: w.m_d,
        m_a_nd: w.m_a,
        a_nd: x[0],
        b_nd: x[1],
        e_nd: x[2],
        f_nd: x[3],
        det_residual: root.det_residual,
        system_residual,
    })
}

/// Root and coefficients for one wave number, from the default seed.
pub fn solve_mode(k: u32, fp: &FluidPair) -> Result<ModalSolution> {
    solve_coefficients(&find_gamma(k, fp, None)?, fp)
}

/// [`solve_mode`] for every wave number in `ks`, in order.
pub fn solve_modes(ks: &[u32], fp: &FluidPair, exec: Execution) -> Vec<Result<ModalSolution>> {
    exec.map(ks, |&k| solve_mode(k, fp))
}

/// Coefficients rescaled to the units of the water-in-air reference table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Values {
    pub k: u32,
    /// [1/s]
    pub gamma: Complex64,
    /// [10⁻¹¹ m²/s]
    pub a: Complex64,
    /// [10⁻⁴ m²/s]
    pub b: Complex64,
    /// [10^{5k−7} m^{2−k}/s]
    pub e: Complex64,
    /// [10^{−5k−4} m^{2+k}/s]
    pub f: Complex64,
}

impl Table1Values {
    pub fn from_solution(s: &ModalSolution) -> Self {
        let k = s.k as i32;
        Table1Values {
            k: s.k,
            gamma: s.gamma,
            a: s.coeff_a / 1e-11,
            b: s.coeff_b / 1e-4,
            e: s.coeff_e / 10f64.powi(5 * k - 7),
            f: s.coeff_f / 10f64.powi(-5 * k - 4),
        }
    }
}
