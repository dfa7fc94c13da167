use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice site on the torus grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Position {
    pub x: usize,
    pub y: usize,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0, y: 0 };

    pub fn new(x: usize, y: usize) -> Self {
        Position { x, y }
    }
}

/// Dimensions and index arithmetic for the square torus grid.
///
/// The grid holds `N = 2^n` sites arranged as `L x L` with `L = 2^(n/2)`,
/// so `n` must be even. The full walk register is control (2) x coin (4)
/// x position (N), i.e. `8N` amplitudes, laid out position-fastest:
///
/// ```text
/// idx = ctr * 4N + coin * N + y * L + x
/// ```
///
/// which keeps every (control, coin) block a contiguous `L x L` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridGeometry {
    n_qubits: u32,
    side: usize,
    n_positions: usize,
}

/// Largest supported position register; 8 * 2^26 amplitudes is 8 GiB.
const MAX_QUBITS: u32 = 26;

impl GridGeometry {
    pub fn new(n_qubits: u32) -> Result<Self> {
        if n_qubits < 2 || !n_qubits.is_multiple_of(2) {
            return Err(Error::InvalidGeometry(format!(
                "position register needs an even number >= 2 of qubits, got {n_qubits}"
            )));
        }
        if n_qubits > MAX_QUBITS {
            return Err(Error::InvalidGeometry(format!(
                "{n_qubits} position qubits exceed the supported maximum of {MAX_QUBITS}"
            )));
        }
        let side = 1usize << (n_qubits / 2);
        Ok(GridGeometry {
            n_qubits,
            side,
            n_positions: side * side,
        })
    }

    /// Number of position qubits `n`.
    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Grid side length `L = sqrt(N)`.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Number of grid sites `N = L^2`.
    pub fn n_positions(&self) -> usize {
        self.n_positions
    }

    /// Total state-vector length `8N`.
    pub fn n_amplitudes(&self) -> usize {
        8 * self.n_positions
    }

    pub fn contains(&self, pos: Position) -> bool {
        pos.x < self.side && pos.y < self.side
    }

    /// Flat position index with x fastest.
    pub fn position_index(&self, pos: Position) -> usize {
        debug_assert!(self.contains(pos));
        pos.y * self.side + pos.x
    }

    /// Flat amplitude index for |ctr, coin, x, y>.
    pub fn amplitude_index(&self, ctr: usize, coin: usize, pos: Position) -> usize {
        debug_assert!(ctr < 2 && coin < 4);
        (ctr * 4 + coin) * self.n_positions + self.position_index(pos)
    }
}
