//! Dense brute-force references for small grids.
//!
//! Everything here is built directly from the operator definitions (explicit
//! matrices and full outer-product density matrices), independently of the
//! structured in-place transforms, so it can serve as an oracle for them.

#![allow(clippy::needless_range_loop)] // indexed loops mirror the matrix algebra

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::geometry::GridGeometry;
use crate::operators::{OracleSpec, COIN_DOWN, COIN_LEFT, COIN_RIGHT, COIN_UP};
use crate::state::WalkState;

/// Hard cap on N for dense construction; 8N = 512 keeps the matrices small.
pub const DENSE_POSITION_LIMIT: usize = 64;

/// A dense square complex matrix, row-major.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn dagger(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[j * self.dim + i] = self.data[i * self.dim + j].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        let mut out = vec![Complex64::ZERO; d];
        for i in 0..d {
            let mut acc = Complex64::ZERO;
            for j in 0..d {
                acc += self.data[i * d + j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Explicit matrix of one walk step U = W O, assembled from the operator
/// definitions: the shift permutation, the Grover coin, the conditional
/// sign block, and the rank-one oracle update U = W - 2 (W a) a^dagger.
pub fn build_dense_unitary(geometry: &GridGeometry, spec: &OracleSpec) -> Result<DenseMatrix> {
    let n = geometry.n_positions();
    if n > DENSE_POSITION_LIMIT {
        return Err(Error::DenseTooLarge {
            n_positions: n,
            limit: DENSE_POSITION_LIMIT,
        });
    }
    let side = geometry.side();
    let dim = 8 * n;
    let half = 4 * n;

    // Coin-position block C = C0 (x) I_N with C0[i][j] = 1/2 - delta_ij.
    let mut coin = DenseMatrix::zeros(half);
    for ci in 0..4 {
        for cj in 0..4 {
            let value = if ci == cj { -0.5 } else { 0.5 };
            for p in 0..n {
                coin.set(ci * n + p, cj * n + p, Complex64::new(value, 0.0));
            }
        }
    }

    // Shift permutation sigma on (coin, position), from its four terms.
    let mut sigma = vec![0usize; half];
    for y in 0..side {
        for x in 0..side {
            let p = y * side + x;
            let xp = (x + 1) % side + y * side;
            let xm = (x + side - 1) % side + y * side;
            let yp = (y + 1) % side * side + x;
            let ym = (y + side - 1) % side * side + x;
            sigma[COIN_RIGHT * n + p] = COIN_LEFT * n + xp;
            sigma[COIN_LEFT * n + p] = COIN_RIGHT * n + xm;
            sigma[COIN_UP * n + p] = COIN_DOWN * n + yp;
            sigma[COIN_DOWN * n + p] = COIN_UP * n + ym;
        }
    }

    // W: control-1 block S*C (row permutation of C), control-0 block -I.
    let mut walk = DenseMatrix::zeros(dim);
    for k in 0..half {
        walk.set(k, k, Complex64::new(-1.0, 0.0));
        for j in 0..half {
            let value = coin.get(k, j);
            if value != Complex64::ZERO {
                walk.set(half + sigma[k], half + j, value);
            }
        }
    }

    // Reflection axis a = |delta_ctr, u_c, t>.
    let t = geometry.position_index(spec.target());
    let mut axis = vec![Complex64::ZERO; dim];
    for c in 0..4 {
        axis[c * n + t] = Complex64::new(-spec.delta().sin() * 0.5, 0.0);
        axis[half + c * n + t] = Complex64::new(spec.delta().cos() * 0.5, 0.0);
    }

    // U = W (I - 2 a a^dagger) = W - 2 (W a) a^dagger.
    let wa = walk.matvec(&axis);
    let mut unitary = walk;
    for (j, aj) in axis.iter().enumerate() {
        if *aj == Complex64::ZERO {
            continue;
        }
        let scale = 2.0 * aj.conj();
        for i in 0..dim {
            let delta = wa[i] * scale;
            let cur = unitary.get(i, j);
            unitary.set(i, j, cur - delta);
        }
    }
    Ok(unitary)
}

/// Full outer-product density matrix |psi><psi| (dimension 8N).
pub fn dense_full_density(state: &WalkState) -> DenseMatrix {
    let amps = state.amplitudes();
    let dim = amps.len();
    let mut rho = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            rho.data[i * dim + j] = amps[i] * amps[j].conj();
        }
    }
    rho
}

/// Which registers to keep in [`dense_reduced_density`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseKeep {
    ControlCoin,
    Control,
    Coin,
    Position,
    CoinPosition,
    ControlPosition,
}

/// Reduced density matrix via the full |psi><psi| and explicit index sums —
/// the brute-force route, usable only at dense scale.
pub fn dense_reduced_density(state: &WalkState, keep: DenseKeep) -> Result<DensityMatrix> {
    let n = state.geometry().n_positions();
    if n > DENSE_POSITION_LIMIT {
        return Err(Error::DenseTooLarge {
            n_positions: n,
            limit: DENSE_POSITION_LIMIT,
        });
    }
    let rho = dense_full_density(state);
    let full = 8 * n;
    // Full index = (ctr*4 + coin)*N + p.
    let split = |idx: usize| (idx / (4 * n), (idx / n) % 4, idx % n);
    let (out_dim, project): (usize, Box<dyn Fn(usize) -> usize>) = match keep {
        DenseKeep::ControlCoin => (8, Box::new(move |i| i / n)),
        DenseKeep::Control => (2, Box::new(move |i| split(i).0)),
        DenseKeep::Coin => (4, Box::new(move |i| split(i).1)),
        DenseKeep::Position => (n, Box::new(move |i| split(i).2)),
        DenseKeep::CoinPosition => (4 * n, Box::new(move |i| {
            let (_, c, p) = split(i);
            c * n + p
        })),
        DenseKeep::ControlPosition => (2 * n, Box::new(move |i| {
            let (ctr, _, p) = split(i);
            ctr * n + p
        })),
    };
    // Complementary label must match for an entry to survive the trace.
    let complement: Box<dyn Fn(usize) -> usize> = match keep {
        DenseKeep::ControlCoin => Box::new(move |i| split(i).2),
        DenseKeep::Control => Box::new(move |i| {
            let (_, c, p) = split(i);
            c * n + p
        }),
        DenseKeep::Coin => Box::new(move |i| {
            let (ctr, _, p) = split(i);
            ctr * n + p
        }),
        DenseKeep::Position => Box::new(move |i| i / n),
        DenseKeep::CoinPosition => Box::new(move |i| split(i).0),
        DenseKeep::ControlPosition => Box::new(move |i| split(i).1),
    };

    let mut out = vec![Complex64::ZERO; out_dim * out_dim];
    for row in 0..full {
        for col in 0..full {
            if complement(row) == complement(col) {
                out[project(row) * out_dim + project(col)] += rho.get(row, col);
            }
        }
    }
    Ok(DensityMatrix::from_entries_unchecked(out_dim, out))
}
