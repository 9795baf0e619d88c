//! Normalized backward recurrence for `J_n`.
//!
//! The recurrence `J_{k−1} = (2k/z) J_k − J_{k+1}` is run downward from an
//! order well past both `n` and `|z|`, where `J` is negligible. The trial
//! sequence is normalized with the generating-function identity
//! `e^{isz} = J_0 + 2 Σ_{k≥1} (is)^k J_k`, picking `s = ±1` so that
//! `|e^{isz}| ≥ 1`; the sum then has no destructive cancellation anywhere in
//! the plane.

use num_complex::Complex64;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

fn start_order(n: u32, az: f64) -> u32 {
    let base = f64::from(n).max(az);
    let m = (base + 40.0 + 6.0 * base.cbrt()).ceil() as u32;
    m + (m & 1)
}

pub(super) fn bessel_j(n: u32, z: Complex64) -> Complex64 {
    let top = start_order(n, z.norm());
    let s = if z.im <= 0.0 { 1.0 } else { -1.0 };
    let is = Complex64::new(0.0, s);
    let inv_z = 1.0 / z;

    // powers of (is)^k cycle with period 4
    let cycle = [Complex64::new(1.0, 0.0), is, is * is, is * is * is];

    let mut upper = Complex64::new(0.0, 0.0); // f_{k+1}
    let mut current = Complex64::new(1e-30, 0.0); // f_k
    let mut sum = Complex64::new(0.0, 0.0);
    let mut wanted = Complex64::new(0.0, 0.0);

    for k in (1..=top).rev() {
        if k == n {
            wanted = current;
        }
        sum += 2.0 * cycle[(k % 4) as usize] * current;
        let lower = current * (2.0 * f64::from(k)) * inv_z - upper;
        upper = current;
        current = lower;
        if current.norm() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            upper *= RESCALE_BY;
            sum *= RESCALE_BY;
            wanted *= RESCALE_BY;
        }
    }
    if n == 0 {
        wanted = current;
    }
    sum += current;
    wanted * (is * z).exp() / sum
}
