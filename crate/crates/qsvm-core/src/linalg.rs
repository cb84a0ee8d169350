//! Small self-contained linear algebra helpers.
//!
//! The only nontrivial routine is a cyclic Jacobi eigensolver for real
//! symmetric matrices, used for positive-semidefiniteness checks on Gram
//! matrices and density matrices. Matrices here are row-major `Vec<f64>`.

use num_complex::Complex64;

/// Eigenvalues of a real symmetric matrix (row-major, `n x n`), ascending.
///
/// Cyclic Jacobi sweeps until all off-diagonal mass is annihilated. Good to
/// near machine precision for the sizes used in this crate (n <= ~500).
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(matrix.len(), n * n, "matrix must be n*n");
    if n == 0 {
        return Vec::new();
    }
    let mut a = matrix.to_vec();
    let max_sweeps = 50;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frobenius(&a, n)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Jacobi rotation annihilating a[p][q].
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_symmetric_eigenvalue(matrix: &[f64], n: usize) -> f64 {
    symmetric_eigenvalues(matrix, n)[0]
}

/// Smallest eigenvalue of a complex Hermitian matrix (row-major).
///
/// Uses the standard embedding of an n x n Hermitian H = A + iB into the
/// 2n x 2n real symmetric [[A, -B], [B, A]], whose spectrum is that of H
/// with every eigenvalue doubled in multiplicity.
pub fn min_hermitian_eigenvalue(matrix: &[Complex64], n: usize) -> f64 {
    assert_eq!(matrix.len(), n * n);
    let m = 2 * n;
    let mut real = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = matrix[i * n + j];
            real[i * m + j] = z.re;
            real[(i + n) * m + (j + n)] = z.re;
            real[i * m + (j + n)] = -z.im;
            real[(i + n) * m + j] = z.im;
        }
    }
    min_symmetric_eigenvalue(&real, m)
}

fn frobenius(a: &[f64], n: usize) -> f64 {
    a.iter().take(n * n).map(|x| x * x).sum::<f64>().sqrt()
}
