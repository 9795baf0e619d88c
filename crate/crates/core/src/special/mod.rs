//! Integer-order Bessel functions of complex argument.
//!
//! `J_n` is evaluated by its power series near the origin, by normalized
//! backward (Miller) recurrence at moderate modulus, and from the Hankel
//! asymptotic expansions once `|z|` is large compared with `n²`. `Y_n` and
//! `H⁽²⁾_n` share the same regimes, except that in the recurrence regime the
//! Hankel function that decays away from the real axis is computed directly
//! through the modified Bessel function `K` (Temme's continued fraction), so
//! that `H⁽²⁾_n` keeps full relative accuracy in the lower half plane where
//! `J_n` and `Y_n` are exponentially large and nearly cancel.
//!
//! `Y_n` and `H⁽²⁾_n` are principal-branch values, with the cut on `(−∞, 0]`
//! and points on the cut taken from above.

mod asymptotic;
mod kfrac;
mod miller;
mod series;

use num_complex::Complex64;

use self::asymptotic::Kind;
use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type ComplexScalar = Complex64;

/// Largest supported `|z|`.
pub const MAX_MODULUS: f64 = 1.0e4;
/// Power series used for `|z|` up to this radius.
pub const SERIES_RADIUS: f64 = 2.0;
/// Hankel asymptotics used beyond this radius (when `n² ≤ 2|z|`).
pub const ASYMPTOTIC_RADIUS: f64 = 35.0;

// exp(|Im z|) must stay finite
const MAX_IMAG: f64 = 700.0;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Regime {
    Series,
    Recurrence,
    Asymptotic,
}

fn regime(n: u32, z: Complex64) -> Regime {
    let az = z.norm();
    if az <= SERIES_RADIUS {
        Regime::Series
    } else if az > ASYMPTOTIC_RADIUS && f64::from(n).powi(2) <= 2.0 * az {
        Regime::Asymptotic
    } else {
        Regime::Recurrence
    }
}

fn check_arg(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.norm() > MAX_MODULUS {
        return Err(Error::Domain(format!("|z| = {} exceeds {MAX_MODULUS}", z.norm())));
    }
    if z.im.abs() > MAX_IMAG {
        return Err(Error::Overflow(format!("|Im z| = {} too large", z.im.abs())));
    }
    Ok(())
}

/// Deep in the lower half plane `|H⁽²⁾_n(z)| ~ e^{Im z}` is below the
/// smallest double.
fn decayed(z: Complex64) -> bool {
    z.im < -MAX_IMAG && z.norm() <= MAX_MODULUS
}

fn check_nonzero(z: Complex64) -> Result<()> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("Y_n and H2_n are singular at z = 0".into()));
    }
    Ok(())
}

/// `true` when `z` is evaluated through the lower-half-plane route. Points
/// on the negative real axis belong to the upper side of the cut.
fn lower_side(z: Complex64) -> bool {
    z.im < 0.0 || (z.im == 0.0 && z.re >= 0.0)
}

/// Bessel function of the first kind `J_n(z)`.
pub fn bessel_j(n: i32, z: ComplexScalar) -> Result<ComplexScalar> {
    let n = order(n)?;
    check_arg(z)?;
    Ok(j_unchecked(n, z))
}

/// Bessel function of the second kind `Y_n(z)`, principal branch.
pub fn bessel_y(n: i32, z: ComplexScalar) -> Result<ComplexScalar> {
    let n = order(n)?;
    check_arg(z)?;
    check_nonzero(z)?;
    Ok(y_and_h2(n, z).0)
}

/// Hankel function of the second kind `H⁽²⁾_n(z) = J_n(z) − i·Y_n(z)`.
pub fn hankel2(n: i32, z: ComplexScalar) -> Result<ComplexScalar> {
    let n = order(n)?;
    if decayed(z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    check_arg(z)?;
    check_nonzero(z)?;
    Ok(y_and_h2(n, z).1)
}

/// `(J_n, J_{n-1})` for `n ≥ 1`, the pair needed by the mode matrix.
pub fn bessel_j_pair(n: i32, z: ComplexScalar) -> Result<(ComplexScalar, ComplexScalar)> {
    if n < 1 {
        return Err(Error::Domain(format!("pair requires n ≥ 1, got {n}")));
    }
    Ok((bessel_j(n, z)?, bessel_j(n - 1, z)?))
}

/// `(H⁽²⁾_n, H⁽²⁾_{n-1})` for `n ≥ 1`.
pub fn hankel2_pair(n: i32, z: ComplexScalar) -> Result<(ComplexScalar, ComplexScalar)> {
    if n < 1 {
        return Err(Error::Domain(format!("pair requires n ≥ 1, got {n}")));
    }
    Ok((hankel2(n, z)?, hankel2(n - 1, z)?))
}

fn order(n: i32) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Domain(format!("negative order {n}")))
}

fn j_unchecked(n: u32, z: Complex64) -> Complex64 {
    match regime(n, z) {
        Regime::Series => series::bessel_j(n, z),
        Regime::Recurrence => miller::bessel_j(n, z),
        Regime::Asymptotic => asymptotic::bessel_j(n, z),
    }
}

/// `(Y, H⁽²⁾)` from `J` and the decaying `H⁽²⁾` (lower half plane).
fn split_lower(j: Complex64, h2: Complex64) -> (Complex64, Complex64) {
    (I * (h2 - j), h2)
}

/// `(Y, H⁽²⁾)` from `J` and the decaying `H⁽¹⁾` (upper half plane).
fn split_upper(j: Complex64, h1: Complex64) -> (Complex64, Complex64) {
    (I * (j - h1), 2.0 * j - h1)
}

fn y_and_h2(n: u32, z: Complex64) -> (Complex64, Complex64) {
    match regime(n, z) {
        Regime::Series => {
            let j = series::bessel_j(n, z);
            let y = series::bessel_y(n, z);
            (y, j - I * y)
        }
        Regime::Asymptotic => {
            let j = asymptotic::bessel_j(n, z);
            if lower_side(z) {
                split_lower(j, asymptotic::hankel(Kind::Second, n, z))
            } else {
                split_upper(j, asymptotic::hankel(Kind::First, n, z))
            }
        }
        Regime::Recurrence => {
            let j = miller::bessel_j(n, z);
            if lower_side(z) {
                split_lower(j, kfrac::hankel2_lower(n, z))
            } else {
                split_upper(j, kfrac::hankel1_upper(n, z))
            }
        }
    }
}
