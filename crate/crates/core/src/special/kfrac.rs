//! Hankel functions through `K_0`, `K_1` (Temme's continued fraction).
//!
//! For `|ζ| ≥ 2`, `Re ζ ≥ 0` the Steed/Temme algorithm evaluates
//! `K_0(ζ)` and `K_1(ζ)` with a single continued fraction and an
//! accompanying series. The decaying Hankel function of each half plane
//! then follows from
//!
//! `H⁽²⁾_n(z) = (2/π) i^{n+1} K_n(iz)`  and  `H⁽¹⁾_n(z) = (2/π) (−i)^{n+1} K_n(−iz)`,
//!
//! and higher orders from forward recurrence, which is stable for both
//! Hankel functions.

use std::f64::consts::PI;

use num_complex::Complex64;

const MAX_ITER: usize = 100_000;

/// `(K_0(x), K_1(x))` for `|x| ≥ 2`, `Re x ≥ 0`.
fn k01(x: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let mut b = 2.0 * (one + x);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25;
    let mut q = Complex64::new(a1, 0.0);
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = one / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < f64::EPSILON * 0.5 * s.norm() {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn recur_up(n: u32, z: Complex64, h0: Complex64, h1: Complex64) -> Complex64 {
    if n == 0 {
        return h0;
    }
    let inv_z = 1.0 / z;
    let (mut prev, mut cur) = (h0, h1);
    for m in 1..n {
        let next = cur * (2.0 * f64::from(m)) * inv_z - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H⁽²⁾_n(z)` for `|z| ≥ 2` with `−π < arg z ≤ 0`.
pub(super) fn hankel2_lower(n: u32, z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let (k0, k1) = k01(i * z);
    let h0 = (2.0 / PI) * i * k0;
    let h1 = -(2.0 / PI) * k1;
    recur_up(n, z, h0, h1)
}

/// `H⁽¹⁾_n(z)` for `|z| ≥ 2` with `0 ≤ arg z ≤ π`.
pub(super) fn hankel1_upper(n: u32, z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let (k0, k1) = k01(-i * z);
    let h0 = -(2.0 / PI) * i * k0;
    let h1 = -(2.0 / PI) * k1;
    recur_up(n, z, h0, h1)
}
