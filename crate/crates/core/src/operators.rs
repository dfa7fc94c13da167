//! The oracle, coin, shift and conditional-walk operators as structured
//! in-place transforms.
//!
//! Coin basis: 0 = left, 1 = right, 2 = down, 3 = up. The shift is the
//! flip-flop convention with periodic (torus) boundaries, so every operator
//! here is an involution up to the conditional sign structure of the walk.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{GridGeometry, Position};
use crate::state::WalkState;

pub const COIN_LEFT: usize = 0;
pub const COIN_RIGHT: usize = 1;
pub const COIN_DOWN: usize = 2;
pub const COIN_UP: usize = 3;

/// The marked site and the control-rotation angle of the reflection axis
/// |delta_ctr, u_c, t> with |delta_ctr> = -sin(delta)|0> + cos(delta)|1>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSpec {
    delta: f64,
    target: Position,
}

impl OracleSpec {
    pub fn new(delta: f64, target: Position) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&delta) {
            return Err(Error::InvalidDelta(delta));
        }
        Ok(OracleSpec { delta, target })
    }

    /// delta = arccos(1 / sqrt(log2 N)), the choice that makes the unitary
    /// walk's target probability independent of N.
    pub fn tulsi(geometry: &GridGeometry, target: Position) -> Self {
        let delta = (1.0 / (geometry.n_qubits() as f64).sqrt()).acos();
        OracleSpec { delta, target }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn target(&self) -> Position {
        self.target
    }

    /// Amplitudes of the reflection axis on the (control, coin) register at
    /// the target site: w(0) = -sin(delta)/2, w(1) = cos(delta)/2.
    fn axis_weights(&self) -> (f64, f64) {
        (-self.delta.sin() * 0.5, self.delta.cos() * 0.5)
    }
}

/// Oracle reflection psi <- psi - 2 <axis|psi> |axis>. Only the eight
/// amplitudes at the target site are touched.
pub fn apply_oracle(state: &mut WalkState, spec: &OracleSpec) {
    let geometry = *state.geometry();
    debug_assert!(geometry.contains(spec.target()));
    let n = geometry.n_positions();
    let p = geometry.position_index(spec.target());
    let (w0, w1) = spec.axis_weights();

    let amps = state.amplitudes_mut();
    let mut overlap = Complex64::ZERO;
    for coin in 0..4 {
        overlap += amps[coin * n + p] * w0;
        overlap += amps[(4 + coin) * n + p] * w1;
    }
    let twice = overlap * 2.0;
    for coin in 0..4 {
        amps[coin * n + p] -= twice * w0;
        amps[(4 + coin) * n + p] -= twice * w1;
    }
}

/// Grover coin C0 = -I + 2|u_c><u_c| on every (control, position) coin
/// 4-vector: v_i <- (sum v)/2 - v_i.
pub fn apply_coin(state: &mut WalkState) {
    coin_on_block(state, 0);
    coin_on_block(state, 1);
}

fn coin_on_block(state: &mut WalkState, ctr: usize) {
    let n = state.geometry().n_positions();
    let block = state.control_block_mut(ctr);
    let (head, tail) = block.split_at_mut(2 * n);
    let (plane0, plane1) = head.split_at_mut(n);
    let (plane2, plane3) = tail.split_at_mut(n);
    for p in 0..n {
        let mean = (plane0[p] + plane1[p] + plane2[p] + plane3[p]) * 0.5;
        plane0[p] = mean - plane0[p];
        plane1[p] = mean - plane1[p];
        plane2[p] = mean - plane2[p];
        plane3[p] = mean - plane3[p];
    }
}

/// Flip-flop shift with periodic boundaries on every control block:
/// right at (x, y) <-> left at (x+1, y), up at (x, y) <-> down at (x, y+1).
pub fn apply_shift(state: &mut WalkState) {
    shift_on_block(state, 0);
    shift_on_block(state, 1);
}

fn shift_on_block(state: &mut WalkState, ctr: usize) {
    let side = state.geometry().side();
    let n = state.geometry().n_positions();
    let mask = side - 1;
    let block = state.control_block_mut(ctr);

    // The shift is a product of disjoint transpositions, so pairwise swaps
    // apply it exactly once per amplitude and allocate nothing.
    let (head, tail) = block.split_at_mut(2 * n);
    let (left, right) = head.split_at_mut(n);
    for y in 0..side {
        let row = y * side;
        for x in 0..side {
            std::mem::swap(&mut left[row + x], &mut right[row + ((x + mask) & mask)]);
        }
    }
    let (down, up) = tail.split_at_mut(n);
    for y in 0..side {
        let row = y * side;
        let partner_row = ((y + mask) & mask) * side;
        for x in 0..side {
            std::mem::swap(&mut down[row + x], &mut up[partner_row + x]);
        }
    }
}

/// Conditional walk W = |1><1| (x) (S C) - |0><0| (x) I: the control-1 block
/// gets the coin then the shift, the control-0 block is negated.
pub fn apply_conditional_walk(state: &mut WalkState) {
    for amp in state.control_block_mut(0) {
        *amp = -*amp;
    }
    coin_on_block(state, 1);
    shift_on_block(state, 1);
}

/// One walk step U = W O: oracle first, then the conditional walk.
pub fn step(state: &mut WalkState, spec: &OracleSpec) {
    apply_oracle(state, spec);
    apply_conditional_walk(state);
}
