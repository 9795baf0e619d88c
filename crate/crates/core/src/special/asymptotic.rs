//! Hankel asymptotic expansions for large `|z|`.
//!
//! `H⁽¹⁾_n ~ √(2/πz) e^{iω} Σ i^k a_k/z^k` holds for `−π < arg z < 2π` and
//! `H⁽²⁾_n ~ √(2/πz) e^{−iω} Σ (−i)^k a_k/z^k` for `−2π < arg z < π`, with
//! `ω = z − nπ/2 − π/4` and `a_k = Π_{j≤k} (4n² − (2j−1)²) / (k! 8^k)`.
//! Each is only used away from the edge of its sector.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

const MAX_TERMS: usize = 200;

#[derive(Clone, Copy)]
pub(super) enum Kind {
    First,
    Second,
}

pub(super) fn hankel(kind: Kind, n: u32, z: Complex64) -> Complex64 {
    let s = match kind {
        Kind::First => 1.0,
        Kind::Second => -1.0,
    };
    let mu = 4.0 * f64::from(n).powi(2);
    let inv_z = 1.0 / z;
    let is = Complex64::new(0.0, s);

    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0); // a_k / z^k
    let mut phase = Complex64::new(1.0, 0.0); // (is)^k
    let mut last = f64::INFINITY;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (8.0 * k as f64) * inv_z;
        phase *= is;
        let size = term.norm();
        if size > last || size == 0.0 {
            break;
        }
        last = size;
        sum += phase * term;
        if size <= f64::EPSILON * 0.25 {
            break;
        }
    }
    let omega = z - f64::from(n) * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / PI).sqrt() / z.sqrt() * (is * omega).exp() * sum
}

/// `J_n(z)`, reflected into the right half plane first.
pub(super) fn bessel_j(n: u32, z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        let j = bessel_j(n, -z);
        return if n % 2 == 0 { j } else { -j };
    }
    (hankel(Kind::First, n, z) + hankel(Kind::Second, n, z)) * 0.5
}
