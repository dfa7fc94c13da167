//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.
//!
//! The reduced density matrices handled here are at most 8x8 (and the dense
//! test oracles stay below a few hundred), so a dependency-free Jacobi sweep
//! converges quickly and to machine precision.

use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix given in row-major order, sorted
/// descending. Only the Hermitian part of the input is consulted.
pub fn hermitian_eigenvalues(matrix: &[Complex64], dim: usize) -> Vec<f64> {
    assert_eq!(matrix.len(), dim * dim, "matrix size mismatch");
    if dim == 0 {
        return Vec::new();
    }
    if dim == 1 {
        return vec![matrix[0].re];
    }

    let mut a = matrix.to_vec();
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let tol = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += a[p * dim + q].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                rotate_pair(&mut a, dim, p, q);
            }
        }
    }

    let mut eigenvalues: Vec<f64> = (0..dim).map(|i| a[i * dim + i].re).collect();
    eigenvalues.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigenvalues
}

/// One complex Jacobi rotation annihilating the (p, q) off-diagonal entry.
fn rotate_pair(a: &mut [Complex64], dim: usize, p: usize, q: usize) {
    let apq = a[p * dim + q];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r; // e^{i phi} with a_pq = r e^{i phi}
    let app = a[p * dim + p].re;
    let aqq = a[q * dim + q].re;

    // tan(2 theta) = 2r / (app - aqq); pick the smaller rotation angle.
    let tau = (app - aqq) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Columns: B = A * V with V = [[c, -s u], [s conj(u), c]] on (p, q).
    for i in 0..dim {
        let aip = a[i * dim + p];
        let aiq = a[i * dim + q];
        a[i * dim + p] = aip * c + aiq * s * phase.conj();
        a[i * dim + q] = -aip * s * phase + aiq * c;
    }
    // Rows: A' = V^dagger * B.
    for j in 0..dim {
        let apj = a[p * dim + j];
        let aqj = a[q * dim + j];
        a[p * dim + j] = apj * c + aqj * s * phase;
        a[q * dim + j] = -apj * s * phase.conj() + aqj * c;
    }

    a[p * dim + q] = Complex64::ZERO;
    a[q * dim + p] = Complex64::ZERO;
    a[p * dim + p] = Complex64::new(a[p * dim + p].re, 0.0);
    a[q * dim + q] = Complex64::new(a[q * dim + q].re, 0.0);
}
