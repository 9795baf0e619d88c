#![allow(dead_code)]

pub mod dd;

use droplet_modes::modes::FluidPair;
use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform point in the annulus `r_min ≤ |z| ≤ r_max`, keeping `|arg z| ≤ π − cut_gap`.
pub fn annulus_point(rng: &mut StdRng, r_min: f64, r_max: f64, cut_gap: f64) -> Complex64 {
    let r = (rng.gen::<f64>() * (r_max * r_max - r_min * r_min) + r_min * r_min).sqrt();
    let th = (rng.gen::<f64>() * 2.0 - 1.0) * (std::f64::consts::PI - cut_gap);
    Complex64::from_polar(r, th)
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn table2() -> FluidPair {
    FluidPair::water_in_air()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Reference rows for water in air, k = 2..6:
/// γ [1/s], A [1e-11], B [1e-4], E [1e(5k-7)], F [1e(-5k-4)].
pub const TABLE1: [(u32, [(f64, f64); 5]); 5] = [
    (2, [(18788.18393, -390396.1271), (4664.160935, 137.5420287), (1.142101737, 4.485396518), (2.618366811, 194.0864949), (1.904600443, 1.883632636)]),
    (3, [(53722.95262, -777097.6733), (376.1242266, -953.0487542), (7.390256000, 6.296111161), (3.392996002, 182.1390754), (4.168582183, 3.618449771)]),
    (4, [(104333.5005, -1223261.977), (-123.9009766, -195.0741019), (14.90136892, 1.040690443), (3.548390076, 152.0972759), (7.942104534, 6.209497220)]),
    (5, [(170139.1932, -1722774.521), (-53.99114858, -11.92064586), (16.35189970, -10.42851063), (3.366783037, 121.2100680), (14.10551086, 10.15645338)]),
    (6, [(250754.7829, -2270070.007), (-12.54654878, 6.299980519), (8.074025870, -20.94948730), (3.017014114, 94.14089637), (23.99270873, 16.16915562)]),
];
