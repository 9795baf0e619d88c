//! Double-double complex arithmetic, just enough to sum the `J_n` power
//! series with ~32 significant digits.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = self.sub(Dd { hi: p, lo: e });
        let q2 = r.hi / d;
        let (hi, lo) = two_sum(q1, q2);
        Dd { hi, lo }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn from(z: Complex64) -> Self {
        DdComplex { re: Dd::from(z.re), im: Dd::from(z.im) }
    }

    pub fn add(self, o: Self) -> Self {
        DdComplex { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn mul(self, o: Self) -> Self {
        DdComplex {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn div_f64(self, d: f64) -> Self {
        DdComplex { re: self.re.div_f64(d), im: self.im.div_f64(d) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// `J_n(z)` by direct power-series summation in double-double.
pub fn bessel_j_series(n: u32, z: Complex64) -> Complex64 {
    let half = DdComplex::from(z).div_f64(2.0);
    let mut term = DdComplex { re: Dd::from(1.0), im: Dd::ZERO };
    for k in 1..=n {
        term = term.mul(half).div_f64(f64::from(k));
    }
    let q = half.mul(half);
    let q = DdComplex { re: q.re.neg(), im: q.im.neg() };
    let mut sum = term;
    for k in 1..400u32 {
        term = term.mul(q).div_f64(f64::from(k) * f64::from(n + k));
        sum = sum.add(term);
        if term.to_c64().norm() < 1e-34 * sum.to_c64().norm() {
            break;
        }
    }
    sum.to_c64()
}
