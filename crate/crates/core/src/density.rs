//! Small reduced density matrices and von Neumann entropy.

use num_complex::Complex64;

use crate::eigen::hermitian_eigenvalues;
use crate::error::{Error, Result};

/// Tolerance below which a computed eigenvalue may dip negative and still be
/// clamped to zero; anything more negative is a genuine error.
pub const EIGENVALUE_NEGATIVITY_TOL: f64 = 1e-12;

/// Tolerance on |trace - 1| accepted by [`DensityMatrix::von_neumann_entropy`].
pub const TRACE_TOL: f64 = 1e-8;

/// A dense Hermitian density matrix of small dimension (2, 4 or 8 in normal
/// use; the dense test oracles go somewhat larger).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Builds from row-major entries, checking Hermiticity.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        assert_eq!(entries.len(), dim * dim, "entry count mismatch");
        let mut deviation = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let d = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if deviation > 1e-9 {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(DensityMatrix { dim, entries })
    }

    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        DensityMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    /// Largest `|rho[i][j] - conj(rho[j][i])|` over all pairs.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.entry(i, j) - self.entry(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries, self.dim)
    }

    /// Von Neumann entropy in bits: -sum_i lambda_i log2 lambda_i.
    ///
    /// Eigenvalues in [-1e-12, 0) are clamped to 0 (numerical eigensolvers
    /// produce tiny negatives); values above 1 are clamped to 1. A trace off
    /// by more than 1e-8, or an eigenvalue below the negativity tolerance,
    /// is an error.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let trace = self.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let mut entropy = 0.0f64;
        for lambda in self.eigenvalues() {
            if lambda < -EIGENVALUE_NEGATIVITY_TOL {
                return Err(Error::NegativeEigenvalue { value: lambda });
            }
            let l = lambda.clamp(0.0, 1.0);
            if l > 0.0 {
                entropy -= l * l.log2();
            }
        }
        // -0.0 from a pure state rounds up to exactly 0.
        Ok(entropy.max(0.0))
    }

    /// Partial trace of a register of qubits, keeping the listed qubits (in
    /// the given order). Qubit 0 is the most significant bit of the index.
    /// The dimension must be a power of two.
    pub fn partial_trace_keep(&self, keep: &[usize]) -> DensityMatrix {
        let n_qubits = self.dim.trailing_zeros() as usize;
        assert_eq!(1usize << n_qubits, self.dim, "dimension must be 2^k");
        assert!(keep.iter().all(|&q| q < n_qubits));

        let traced: Vec<usize> = (0..n_qubits).filter(|q| !keep.contains(q)).collect();
        let out_dim = 1usize << keep.len();
        let trace_count = 1usize << traced.len();

        // Qubit 0 is the most significant bit of a full index.
        let compose = |kept_bits: usize, traced_bits: usize| {
            let mut idx = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                let b = (kept_bits >> (keep.len() - 1 - pos)) & 1;
                idx |= b << (n_qubits - 1 - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let b = (traced_bits >> (traced.len() - 1 - pos)) & 1;
                idx |= b << (n_qubits - 1 - q);
            }
            idx
        };

        let mut out = vec![Complex64::ZERO; out_dim * out_dim];
        for i in 0..out_dim {
            for j in 0..out_dim {
                let mut sum = Complex64::ZERO;
                for t in 0..trace_count {
                    let row = compose(i, t);
                    let col = compose(j, t);
                    sum += self.entries[row * self.dim + col];
                }
                out[i * out_dim + j] = sum;
            }
        }
        DensityMatrix::from_entries_unchecked(out_dim, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(values: &[f64]) -> DensityMatrix {
        let dim = values.len();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for (i, &v) in values.iter().enumerate() {
            entries[i * dim + i] = c(v, 0.0);
        }
        DensityMatrix::from_entries(dim, entries).unwrap()
    }

    #[test]
    fn maximally_mixed_qubit_has_one_bit() {
        let rho = diag(&[0.5, 0.5]);
        assert!((rho.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_one_projector_has_zero_entropy() {
        for dim in [2usize, 4, 8] {
            let mut entries = vec![Complex64::ZERO; dim * dim];
            entries[0] = c(1.0, 0.0);
            let rho = DensityMatrix::from_entries(dim, entries).unwrap();
            assert_eq!(rho.von_neumann_entropy().unwrap(), 0.0);
        }
    }

    #[test]
    fn three_level_example() {
        let rho = diag(&[0.5, 0.25, 0.25]);
        assert!((rho.von_neumann_entropy().unwrap() - 1.5).abs() < 1e-13);
    }

    #[test]
    fn binary_entropy_example() {
        // Oracle: closed-form -sum lambda log2 lambda.
        let expected = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        let rho = diag(&[0.75, 0.25]);
        assert!((rho.von_neumann_entropy().unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.81128).abs() < 1e-5);
    }

    #[test]
    fn off_trace_matrix_is_rejected() {
        let rho = diag(&[0.6, 0.6]);
        assert!(matches!(
            rho.von_neumann_entropy(),
            Err(Error::TraceNotOne { .. })
        ));
    }

    #[test]
    fn genuinely_negative_eigenvalue_is_rejected() {
        // Unit trace and Hermitian, but not positive semidefinite.
        let rho = diag(&[-0.5, 1.5]);
        assert!(matches!(
            rho.von_neumann_entropy(),
            Err(Error::NegativeEigenvalue { .. })
        ));
        // A tiny negative within the clamp tolerance is accepted.
        let rho = diag(&[-0.5e-12, 1.0 + 0.5e-12]);
        assert!(rho.von_neumann_entropy().unwrap().abs() < 1e-10);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let entries = vec![c(0.5, 0.0), c(0.3, 0.0), c(0.1, 0.0), c(0.5, 0.0)];
        assert!(matches!(
            DensityMatrix::from_entries(2, entries),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state_factors() {
        // rho = |0><0| (x) I/2 on two qubits.
        let mut entries = vec![Complex64::ZERO; 16];
        entries[0] = c(0.5, 0.0); // |00><00|
        entries[5] = c(0.5, 0.0); // |01><01|
        let rho = DensityMatrix::from_entries(4, entries).unwrap();

        let q0 = rho.partial_trace_keep(&[0]);
        assert!((q0.entry(0, 0).re - 1.0).abs() < 1e-15);
        assert!(q0.entry(1, 1).norm() < 1e-15);

        let q1 = rho.partial_trace_keep(&[1]);
        assert!((q1.entry(0, 0).re - 0.5).abs() < 1e-15);
        assert!((q1.entry(1, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_of_ghz_gives_mixed_singles() {
        // GHZ on 3 qubits: (|000> + |111>)/sqrt(2).
        let dim = 8;
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for &(i, j) in &[(0usize, 0usize), (0, 7), (7, 0), (7, 7)] {
            entries[i * dim + j] = c(0.5, 0.0);
        }
        let rho = DensityMatrix::from_entries(dim, entries).unwrap();
        for q in 0..3 {
            let single = rho.partial_trace_keep(&[q]);
            assert!((single.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-12);
        }
        for pair in [[0usize, 1], [0, 2], [1, 2]] {
            let two = rho.partial_trace_keep(&pair);
            assert!((two.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
