//! Dense linear algebra on small fixed-size complex matrices.

use num_complex::Complex64;

pub type Matrix<const N: usize> = [[Complex64; N]; N];

/// Determinant by LU with partial pivoting.
pub fn determinant<const N: usize>(mut m: Matrix<N>) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap_or(col);
        if m[pivot][col] == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for row in col + 1..N {
            let factor = m[row][col] / p;
            for k in col + 1..N {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
        }
    }
    det
}

/// Divides each row by its largest modulus. Returns the scaled matrix and
/// the divisors.
pub fn equilibrate_rows<const N: usize>(m: &Matrix<N>) -> (Matrix<N>, [f64; N]) {
    let mut out = *m;
    let mut scales = [1.0; N];
    for (row, s) in out.iter_mut().zip(scales.iter_mut()) {
        let max = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if max > 0.0 {
            *s = max;
            for v in row.iter_mut() {
                *v /= max;
            }
        }
    }
    (out, scales)
}

/// Divides each column by its Euclidean norm. Returns the scaled matrix and
/// the divisors.
pub fn equilibrate_cols<const N: usize>(m: &Matrix<N>) -> (Matrix<N>, [f64; N]) {
    let mut out = *m;
    let mut scales = [1.0; N];
    for (c, s) in scales.iter_mut().enumerate() {
        let n = m.iter().map(|row| row[c].norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            *s = n;
            for row in out.iter_mut() {
                row[c] /= n;
            }
        }
    }
    (out, scales)
}

/// Product of the Euclidean row norms, an upper bound on `|det|`.
pub fn hadamard_bound<const N: usize>(m: &Matrix<N>) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .product()
}

/// Result of a complete-pivoting elimination.
#[derive(Debug, Clone)]
pub struct NullVector<const N: usize> {
    pub vector: [Complex64; N],
    /// Pivot moduli in elimination order, relative to the first pivot.
    pub relative_pivots: [f64; N],
}

/// Kernel vector of a (numerically) rank `N−1` matrix by Gaussian
/// elimination with complete pivoting. The last pivot is treated as zero;
/// the free unknown is set to one and the others back-substituted.
pub fn null_vector<const N: usize>(m: &Matrix<N>) -> NullVector<N> {
    let mut a = *m;
    let mut cols: [usize; N] = std::array::from_fn(|i| i);
    let mut pivots = [0.0; N];
    for step in 0..N {
        let mut best = (step, step, -1.0);
        for (r, row) in a.iter().enumerate().skip(step) {
            for (c, v) in row.iter().enumerate().skip(step) {
                if v.norm() > best.2 {
                    best = (r, c, v.norm());
                }
            }
        }
        let (pr, pc, size) = best;
        pivots[step] = size;
        a.swap(step, pr);
        if pc != step {
            for row in a.iter_mut() {
                row.swap(step, pc);
            }
            cols.swap(step, pc);
        }
        if step + 1 == N || size == 0.0 {
            continue;
        }
        let p = a[step][step];
        for r in step + 1..N {
            let factor = a[r][step] / p;
            for c in step..N {
                let v = a[step][c];
                a[r][c] -= factor * v;
            }
        }
    }

    // back substitution on the leading (N-1)x(N-1) triangle
    let mut y = [Complex64::new(0.0, 0.0); N];
    y[N - 1] = Complex64::new(1.0, 0.0);
    for i in (0..N - 1).rev() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in i + 1..N {
            acc += a[i][j] * y[j];
        }
        y[i] = -acc / a[i][i];
    }
    let mut vector = [Complex64::new(0.0, 0.0); N];
    for (k, &c) in cols.iter().enumerate() {
        vector[c] = y[k];
    }
    let lead = if pivots[0] > 0.0 { pivots[0] } else { 1.0 };
    NullVector {
        vector,
        relative_pivots: pivots.map(|p| p / lead),
    }
}

pub fn mat_vec<const N: usize>(m: &Matrix<N>, x: &[Complex64; N]) -> [Complex64; N] {
    std::array::from_fn(|r| m[r].iter().zip(x).map(|(a, b)| a * b).sum())
}
