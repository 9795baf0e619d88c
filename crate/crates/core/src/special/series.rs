//! Ascending power series, used for small `|z|`.

use std::f64::consts::PI;

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_TERMS: usize = 200;

/// `(z/2)^n / n!`, built incrementally to stay in range for large `n`.
fn leading(n: u32, half_z: Complex64) -> Complex64 {
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * half_z / f64::from(k))
}

pub(super) fn bessel_j(n: u32, z: Complex64) -> Complex64 {
    let half_z = z * 0.5;
    let q = -(half_z * half_z);
    let mut term = leading(n, half_z);
    let mut sum = term;
    for k in 1..MAX_TERMS {
        term *= q / (k as f64 * (f64::from(n) + k as f64));
        sum += term;
        if term.norm() <= f64::EPSILON * 0.5 * sum.norm() {
            break;
        }
    }
    sum
}

/// Digamma at positive integers: `ψ(m) = −γ + H_{m−1}`.
fn digamma_int(m: u32) -> f64 {
    -EULER_GAMMA + (1..m).map(|j| 1.0 / f64::from(j)).sum::<f64>()
}

/// `Y_n(z)` from the logarithmic series
///
/// `Y_n = −(z/2)^{−n}/π Σ_{k<n} (n−k−1)!/k! (z²/4)^k + (2/π) ln(z/2) J_n
///        − (z/2)^n/π Σ_k (ψ(k+1) + ψ(n+k+1)) (−z²/4)^k / (k! (n+k)!)`.
pub(super) fn bessel_y(n: u32, z: Complex64) -> Complex64 {
    let half_z = z * 0.5;
    let zz4 = half_z * half_z;

    // finite part, Σ_{k=0}^{n-1} (n-k-1)!/k! (z²/4)^k
    let mut finite = Complex64::new(0.0, 0.0);
    if n > 0 {
        let mut coeff: f64 = (1..n).map(f64::from).product(); // (n-1)!
        let mut power = Complex64::new(1.0, 0.0);
        for k in 0..n {
            finite += power * coeff;
            if k + 1 < n {
                // (n-k-2)!/(k+1)! = (n-k-1)!/k! / ((n-k-1)(k+1))
                coeff /= f64::from(n - k - 1) * f64::from(k + 1);
                power *= zz4;
            }
        }
        finite = -finite / (PI * half_z.powu(n));
    }

    let log_part = half_z.ln() * bessel_j(n, z) * (2.0 / PI);

    let q = -zz4;
    let mut psi_a = digamma_int(1);
    let mut psi_b = digamma_int(n + 1);
    let mut term = leading(n, half_z);
    let mut sum = term * (psi_a + psi_b);
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (f64::from(n) + kf));
        psi_a += 1.0 / kf;
        psi_b += 1.0 / (f64::from(n) + kf);
        let contrib = term * (psi_a + psi_b);
        sum += contrib;
        if contrib.norm() <= f64::EPSILON * 0.5 * sum.norm() {
            break;
        }
    }
    finite + log_part - sum / PI
}
