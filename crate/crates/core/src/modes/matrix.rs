use num_complex::Complex64;

use super::Scales;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::special::{bessel_j_pair, hankel2_pair, ComplexScalar};

/// Nondimensional radial wave numbers of the droplet and ambient fluids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumbers {
    pub m_d: ComplexScalar,
    pub m_a: ComplexScalar,
    /// Set when `γ̃` is real, so no root with `Im m < 0` exists.
    pub degenerate: bool,
}

/// Square root with `Im < 0`; for real non-negative arguments the root with
/// `Re ≥ 0`, flagged.
fn admissible_sqrt(w: Complex64) -> (Complex64, bool) {
    let s = w.sqrt();
    if s.im < 0.0 {
        (s, false)
    } else if s.im > 0.0 {
        (-s, false)
    } else {
        (s, true)
    }
}

/// `m̃_D² = γ̃` and `m̃_A² = γ̃ ρ̃_A/η̃_A`, each root taken with `Im m̃ < 0`.
pub fn m_from_gamma(gamma_nd: ComplexScalar, rho_ratio: f64, eta_ratio: f64) -> Result<Wavenumbers> {
    if gamma_nd.re < 0.0 {
        return Err(Error::Branch { re: gamma_nd.re, im: gamma_nd.im });
    }
    Ok(wavenumbers(gamma_nd, rho_ratio, eta_ratio))
}

pub(super) fn wavenumbers(gamma_nd: Complex64, rho_ratio: f64, eta_ratio: f64) -> Wavenumbers {
    let (m_d, d1) = admissible_sqrt(gamma_nd);
    let (m_a, d2) = admissible_sqrt(gamma_nd * (rho_ratio / eta_ratio));
    Wavenumbers { m_d, m_a, degenerate: d1 || d2 }
}

/// The 5×5 nondimensional augmented matrix `(Ã | b̃)(k, γ̃)`.
///
/// Columns are `(Ã, B̃, Ẽ, F̃, rhs)`. Rows 1–3 are the kinematic
/// conditions (normal velocity on each side, tangential continuity), rows
/// 4–5 the normal and tangential stress balance.
pub fn augmented_matrix(k: u32, gamma_nd: ComplexScalar, scales: &Scales) -> Result<Matrix<5>> {
    if k < 2 {
        return Err(Error::Parameter(format!("wave number must be ≥ 2, got {k}")));
    }
    let w = wavenumbers(gamma_nd, scales.rho_ratio, scales.eta_ratio);
    // H2 is only evaluated away from its cut
    debug_assert!(w.m_a.im < 0.0 || w.m_a.re > 0.0);

    let n = k as i32;
    let (j, j_lo) = bessel_j_pair(n, w.m_d)?;
    let (h, h_lo) = hankel2_pair(n, w.m_a)?;
    let j_hat = w.m_d * j_lo;
    let h_hat = w.m_a * h_lo;

    let kf = f64::from(k);
    let zeta = 2.0 * (kf - 1.0) * kf;
    let xi = 2.0 * (kf + 1.0) * kf;
    let eta = scales.eta_ratio;
    let md2 = w.m_d * w.m_d;
    let ma2 = w.m_a * w.m_a;
    let zero = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);

    Ok([
        [kf * j, zero, re(kf), zero, -gamma_nd],
        [zero, kf * h, zero, re(kf), -gamma_nd],
        [-j_hat + kf * j, h_hat - kf * h, re(-kf), re(-kf), zero],
        [
            -2.0 * kf * j_hat + xi * j,
            eta * (2.0 * kf * h_hat - xi * h),
            md2 - zeta,
            eta * (ma2 - xi),
            re(scales.sigma_nd * (kf * kf - 1.0)),
        ],
        [
            -2.0 * j_hat - (md2 - xi) * j,
            eta * (2.0 * h_hat + (ma2 - xi) * h),
            re(zeta),
            re(-eta * xi),
            zero,
        ],
    ])
}

/// `det (Ã | b̃)(k, γ̃)`, by partial-pivoted LU on the row-equilibrated matrix.
pub fn det_augmented(k: u32, gamma_nd: ComplexScalar, scales: &Scales) -> Result<ComplexScalar> {
    let m = augmented_matrix(k, gamma_nd, scales)?;
    let (eq, s) = linalg::equilibrate_rows(&m);
    Ok(linalg::determinant(eq) * s.iter().product::<f64>())
}

/// `|det| / Π‖row‖₂` after scaling every column to unit norm; lies in
/// `[0, 1]` and is insensitive to the exponential growth of the Bessel
/// columns.
pub fn relative_det(k: u32, gamma_nd: ComplexScalar, scales: &Scales) -> Result<f64> {
    let m = augmented_matrix(k, gamma_nd, scales)?;
    let (cols, _) = linalg::equilibrate_cols(&m);
    let (eq, _) = linalg::equilibrate_rows(&cols);
    Ok(linalg::determinant(eq).norm() / linalg::hadamard_bound(&eq))
}
