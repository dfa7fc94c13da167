//! The pure state vector over control x coin x position.

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::geometry::{GridGeometry, Position};

/// The subsystems of the control x coin x position factorization whose
/// reduced density matrix is small enough to materialize (dim 2, 4, 8).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedSubsystem {
    Control,
    Coin,
    ControlCoin,
}

/// Any subsystem of the factorization. Entropies of position-containing
/// subsystems are evaluated through the complementary small subsystem
/// (exact for pure global states), so no N-dimensional matrix is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Control,
    Coin,
    ControlCoin,
    Position,
    CoinPosition,
    ControlPosition,
}

impl Subsystem {
    /// The small subsystem whose reduced state has the same spectrum.
    pub fn entropy_carrier(self) -> ReducedSubsystem {
        match self {
            Subsystem::Control | Subsystem::CoinPosition => ReducedSubsystem::Control,
            Subsystem::Coin | Subsystem::ControlPosition => ReducedSubsystem::Coin,
            Subsystem::ControlCoin | Subsystem::Position => ReducedSubsystem::ControlCoin,
        }
    }
}

/// Pure state of the walk register: `8N` complex amplitudes laid out with
/// position fastest (see [`GridGeometry`]).
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    geometry: GridGeometry,
    amplitudes: Vec<Complex64>,
}

impl WalkState {
    /// The search's initial state |1> (x) |u_c> (x) |u_p>: every amplitude in
    /// the control-1 block equals 1/(2 sqrt(N)), the control-0 block is zero.
    pub fn initial(geometry: GridGeometry) -> Self {
        let n = geometry.n_positions();
        let amp = Complex64::new(0.5 / (n as f64).sqrt(), 0.0);
        let mut amplitudes = vec![Complex64::ZERO; geometry.n_amplitudes()];
        amplitudes[4 * n..].fill(amp);
        WalkState {
            geometry,
            amplitudes,
        }
    }

    /// All-zero register, for assembling custom states in tests and tools.
    pub fn zero(geometry: GridGeometry) -> Self {
        WalkState {
            geometry,
            amplitudes: vec![Complex64::ZERO; geometry.n_amplitudes()],
        }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, ctr: usize, coin: usize, pos: Position) -> Complex64 {
        self.amplitudes[self.geometry.amplitude_index(ctr, coin, pos)]
    }

    pub fn set_amplitude(&mut self, ctr: usize, coin: usize, pos: Position, value: Complex64) {
        let idx = self.geometry.amplitude_index(ctr, coin, pos);
        self.amplitudes[idx] = value;
    }

    /// The contiguous control block (4N amplitudes).
    pub fn control_block(&self, ctr: usize) -> &[Complex64] {
        let n = self.geometry.n_positions();
        &self.amplitudes[ctr * 4 * n..(ctr + 1) * 4 * n]
    }

    pub(crate) fn control_block_mut(&mut self, ctr: usize) -> &mut [Complex64] {
        let n = self.geometry.n_positions();
        &mut self.amplitudes[ctr * 4 * n..(ctr + 1) * 4 * n]
    }

    /// Euclidean norm of the state vector.
    pub fn norm(&self) -> f64 {
        chunked_norm_sqr(&self.amplitudes).sqrt()
    }

    /// Rescales to unit norm.
    pub fn normalize(&mut self) {
        let norm = self.norm();
        assert!(norm > 0.0, "cannot normalize the zero state");
        let inv = 1.0 / norm;
        for amp in &mut self.amplitudes {
            *amp *= inv;
        }
    }

    /// Probability of finding the walker at `target` if position were
    /// measured now: the modulus-squared over both control values and all
    /// four coin directions at that site.
    pub fn target_probability(&self, target: Position) -> Result<f64> {
        if !self.geometry.contains(target) {
            return Err(Error::TargetOutOfRange {
                x: target.x,
                y: target.y,
                side: self.geometry.side(),
            });
        }
        let n = self.geometry.n_positions();
        let p = self.geometry.position_index(target);
        let mut sum = 0.0;
        for block in 0..8 {
            sum += self.amplitudes[block * n + p].norm_sqr();
        }
        Ok(sum)
    }

    /// The 8x8 reduced density matrix of control x coin, traced over
    /// position in one pass over the amplitudes.
    pub(crate) fn control_coin_density(&self) -> DensityMatrix {
        let n = self.geometry.n_positions();
        let mut rho = vec![Complex64::ZERO; 64];
        for p in 0..n {
            let mut local = [Complex64::ZERO; 8];
            for (b, slot) in local.iter_mut().enumerate() {
                *slot = self.amplitudes[b * n + p];
            }
            for i in 0..8 {
                for j in i..8 {
                    rho[i * 8 + j] += local[i] * local[j].conj();
                }
            }
        }
        for i in 0..8 {
            for j in (i + 1)..8 {
                rho[j * 8 + i] = rho[i * 8 + j].conj();
            }
        }
        DensityMatrix::from_entries_unchecked(8, rho)
    }

    /// Partial trace of |psi><psi| onto a small subsystem.
    pub fn reduced_density(&self, subsystem: ReducedSubsystem) -> DensityMatrix {
        let rho8 = self.control_coin_density();
        match subsystem {
            ReducedSubsystem::ControlCoin => rho8,
            // Qubit 0 = control, qubits 1..3 = coin.
            ReducedSubsystem::Control => rho8.partial_trace_keep(&[0]),
            ReducedSubsystem::Coin => rho8.partial_trace_keep(&[1, 2]),
        }
    }

    /// Von Neumann entropy (bits) of any subsystem of a normalized state.
    /// Position-containing subsystems use pure-state duality S(A) = S(A~).
    pub fn subsystem_entropy(&self, subsystem: Subsystem) -> f64 {
        self.reduced_density(subsystem.entropy_carrier())
            .von_neumann_entropy()
            .expect("subsystem entropy requires a normalized state")
    }
}

/// Sum of |z|^2 with chunked accumulation to keep rounding error flat in N.
pub(crate) fn chunked_norm_sqr(values: &[Complex64]) -> f64 {
    values
        .chunks(4096)
        .map(|chunk| chunk.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum()
}
