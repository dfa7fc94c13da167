//! C ABI for the qwalk simulator.
//!
//! States are opaque heap handles created by [`qw_state_new`] and released
//! by [`qw_state_free`]. Every fallible call returns a [`QwStatus`]; result
//! values come back through out-pointers. The companion header
//! `include/qwalk.h` is generated by cbindgen at build time.

use std::ffi::c_char;

use qwalk::correlations::{self, CorrelationKind};
use qwalk::engine::{
    self, run_ima_deterministic, run_ima_monte_carlo, run_unitary, IMAConfig, RunMode,
};
use qwalk::error::Error;
use qwalk::geometry::{GridGeometry, Position};
use qwalk::operators::{step, OracleSpec};
use qwalk::state::{Subsystem, WalkState};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Requested collapse branch has vanishing probability.
    DegenerateCollapse = 3,
    BufferTooSmall = 4,
}

/// Subsystem selector for entropy queries.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwSubsystem {
    Control = 0,
    Coin = 1,
    ControlCoin = 2,
    Position = 3,
    CoinPosition = 4,
    ControlPosition = 5,
}

impl From<QwSubsystem> for Subsystem {
    fn from(subsystem: QwSubsystem) -> Self {
        match subsystem {
            QwSubsystem::Control => Subsystem::Control,
            QwSubsystem::Coin => Subsystem::Coin,
            QwSubsystem::ControlCoin => Subsystem::ControlCoin,
            QwSubsystem::Position => Subsystem::Position,
            QwSubsystem::CoinPosition => Subsystem::CoinPosition,
            QwSubsystem::ControlPosition => Subsystem::ControlPosition,
        }
    }
}

/// Correlation selector: the six bipartite MI measures and the cumulative
/// correlation measure of the control+coin register.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwCorrelation {
    MiCtrRest = 0,
    MiCtrCoinPos = 1,
    MiPosCtrCoin = 2,
    MiCoinPos = 3,
    MiCtrCoin = 4,
    MiCtrPos = 5,
    Ccm = 6,
}

impl From<QwCorrelation> for CorrelationKind {
    fn from(kind: QwCorrelation) -> Self {
        match kind {
            QwCorrelation::MiCtrRest => CorrelationKind::MiCtrRest,
            QwCorrelation::MiCtrCoinPos => CorrelationKind::MiCtrCoinPos,
            QwCorrelation::MiPosCtrCoin => CorrelationKind::MiPosCtrCoin,
            QwCorrelation::MiCoinPos => CorrelationKind::MiCoinPos,
            QwCorrelation::MiCtrCoin => CorrelationKind::MiCtrCoin,
            QwCorrelation::MiCtrPos => CorrelationKind::MiCtrPos,
            QwCorrelation::Ccm => CorrelationKind::CcmCtrCoin,
        }
    }
}

/// Opaque walk-state handle.
pub struct QwState {
    inner: WalkState,
}

fn geometry_for(n_qubits: u32) -> Result<GridGeometry, QwStatus> {
    GridGeometry::new(n_qubits).map_err(|_| QwStatus::InvalidArgument)
}

fn position_for(geometry: &GridGeometry, x: u64, y: u64) -> Result<Position, QwStatus> {
    let pos = Position::new(x as usize, y as usize);
    if geometry.contains(pos) {
        Ok(pos)
    } else {
        Err(QwStatus::InvalidArgument)
    }
}

fn oracle_for(geometry: &GridGeometry, delta: f64, tx: u64, ty: u64) -> Result<OracleSpec, QwStatus> {
    let target = position_for(geometry, tx, ty)?;
    OracleSpec::new(delta, target).map_err(|_| QwStatus::InvalidArgument)
}

macro_rules! nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            return QwStatus::NullPointer;
        }
    };
}

/// Allocates the initial search state |1, u_c, u_p> on a 2^(n/2) x 2^(n/2)
/// torus. `n_qubits` must be even and small enough to fit in memory.
///
/// # Safety
/// `out` must point to writable storage for one pointer. The returned
/// handle must be released with [`qw_state_free`].
#[no_mangle]
pub unsafe extern "C" fn qw_state_new(n_qubits: u32, out: *mut *mut QwState) -> QwStatus {
    nonnull!(out);
    match geometry_for(n_qubits) {
        Ok(geometry) => {
            let handle = Box::new(QwState {
                inner: WalkState::initial(geometry),
            });
            unsafe { out.write(Box::into_raw(handle)) };
            QwStatus::Ok
        }
        Err(status) => status,
    }
}

/// Deep-copies a state handle.
///
/// # Safety
/// `state` must be a live handle from this library; `out` as in
/// [`qw_state_new`].
#[no_mangle]
pub unsafe extern "C" fn qw_state_clone(state: *const QwState, out: *mut *mut QwState) -> QwStatus {
    nonnull!(state);
    nonnull!(out);
    let cloned = Box::new(QwState {
        inner: unsafe { &*state }.inner.clone(),
    });
    unsafe { out.write(Box::into_raw(cloned)) };
    QwStatus::Ok
}

/// Releases a handle. Passing NULL is a no-op.
///
/// # Safety
/// `state` must be NULL or a live handle from this library; it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qw_state_free(state: *mut QwState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Number of complex amplitudes (8 N).
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_state_num_amplitudes(state: *const QwState, out: *mut u64) -> QwStatus {
    nonnull!(state);
    nonnull!(out);
    let n = unsafe { &*state }.inner.geometry().n_amplitudes() as u64;
    unsafe { out.write(n) };
    QwStatus::Ok
}

/// Euclidean norm of the state vector.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_state_norm(state: *const QwState, out: *mut f64) -> QwStatus {
    nonnull!(state);
    nonnull!(out);
    unsafe { out.write((*state).inner.norm()) };
    QwStatus::Ok
}

/// Applies one walk step (oracle then conditional walk) in place.
///
/// # Safety
/// `state` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qw_state_step(
    state: *mut QwState,
    delta: f64,
    target_x: u64,
    target_y: u64,
) -> QwStatus {
    nonnull!(state);
    let handle = unsafe { &mut *state };
    match oracle_for(handle.inner.geometry(), delta, target_x, target_y) {
        Ok(spec) => {
            step(&mut handle.inner, &spec);
            QwStatus::Ok
        }
        Err(status) => status,
    }
}

/// Probability of finding the walker at (x, y) if position were measured.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_state_target_probability(
    state: *const QwState,
    x: u64,
    y: u64,
    out: *mut f64,
) -> QwStatus {
    nonnull!(state);
    nonnull!(out);
    let handle = unsafe { &*state };
    match position_for(handle.inner.geometry(), x, y) {
        Ok(pos) => {
            let p = handle
                .inner
                .target_probability(pos)
                .expect("position was validated");
            unsafe { out.write(p) };
            QwStatus::Ok
        }
        Err(status) => status,
    }
}

/// Probability that measuring the control qubit now yields 0.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_state_control_zero_probability(
    state: *const QwState,
    out: *mut f64,
) -> QwStatus {
    nonnull!(state);
    nonnull!(out);
    unsafe { out.write(engine::control_zero_probability(&(*state).inner)) };
    QwStatus::Ok
}

/// Projects the control qubit onto `outcome` (0 or 1), renormalizes, and
/// reports the pre-collapse probability of that outcome.
///
/// # Safety
/// `state` must be a live handle; `out_probability` may be NULL when the
/// probability is not wanted.
#[no_mangle]
pub unsafe extern "C" fn qw_state_collapse_control(
    state: *mut QwState,
    outcome: u32,
    out_probability: *mut f64,
) -> QwStatus {
    nonnull!(state);
    if outcome > 1 {
        return QwStatus::InvalidArgument;
    }
    match engine::collapse_control(&mut unsafe { &mut *state }.inner, outcome as u8) {
        Ok(probability) => {
            if !out_probability.is_null() {
                unsafe { out_probability.write(probability) };
            }
            QwStatus::Ok
        }
        Err(Error::DegenerateCollapse { .. }) => QwStatus::DegenerateCollapse,
        Err(_) => QwStatus::InvalidArgument,
    }
}

/// Von Neumann entropy (bits) of a subsystem of the normalized state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_state_subsystem_entropy(
    state: *const QwState,
    subsystem: QwSubsystem,
    out: *mut f64,
) -> QwStatus {
    nonnull!(state);
    nonnull!(out);
    let entropy = unsafe { &*state }.inner.subsystem_entropy(subsystem.into());
    unsafe { out.write(entropy) };
    QwStatus::Ok
}

/// One correlation measure of the current state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_state_correlation(
    state: *const QwState,
    kind: QwCorrelation,
    out: *mut f64,
) -> QwStatus {
    nonnull!(state);
    nonnull!(out);
    let value = correlations::evaluate(&unsafe { &*state }.inner, kind.into());
    unsafe { out.write(value) };
    QwStatus::Ok
}

/// Steps for the unitary walk to approach the marked site:
/// round((pi/4) sqrt(N (log2 N + tan^2(delta)/4))).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_t_delta(n_qubits: u32, delta: f64, out: *mut u64) -> QwStatus {
    nonnull!(out);
    match geometry_for(n_qubits) {
        Ok(geometry) => {
            unsafe { out.write(engine::t_delta(&geometry, delta) as u64) };
            QwStatus::Ok
        }
        Err(status) => status,
    }
}

/// The standard step budget round((pi/4) sqrt(N log2 N)).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_default_kmax(n_qubits: u32, out: *mut u64) -> QwStatus {
    nonnull!(out);
    match geometry_for(n_qubits) {
        Ok(geometry) => {
            unsafe { out.write(engine::default_kmax(&geometry) as u64) };
            QwStatus::Ok
        }
        Err(status) => status,
    }
}

/// The N-adapted rotation angle arccos(1 / sqrt(log2 N)).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qw_tulsi_delta(n_qubits: u32, out: *mut f64) -> QwStatus {
    nonnull!(out);
    match geometry_for(n_qubits) {
        Ok(geometry) => {
            unsafe { out.write(OracleSpec::tulsi(&geometry, Position::ORIGIN).delta()) };
            QwStatus::Ok
        }
        Err(status) => status,
    }
}

fn build_config(
    n_qubits: u32,
    delta: f64,
    tx: u64,
    ty: u64,
    lapse: u64,
    k_max: u64,
) -> Result<(IMAConfig, bool), QwStatus> {
    let geometry = geometry_for(n_qubits)?;
    let target = position_for(&geometry, tx, ty)?;
    let unitary = lapse == 0;
    let mut config = IMAConfig::new(geometry, delta, target, if unitary { 1 } else { lapse as usize });
    config.k_max = k_max as usize;
    config.validate().map_err(|_| QwStatus::InvalidArgument)?;
    Ok((config, unitary))
}

/// Runs the walk with control measurements every `lapse` steps (0 means no
/// measurements) and writes the cumulative success probability P_c(k) for
/// k = 0..=k_max into `out`. `len` must be at least k_max + 1; the number
/// of rows written is k_max + 1 (a vanished branch keeps P_c constant).
///
/// # Safety
/// `out` must point to at least `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qw_run_cumulative_probability(
    n_qubits: u32,
    delta: f64,
    target_x: u64,
    target_y: u64,
    lapse: u64,
    k_max: u64,
    out: *mut f64,
    len: u64,
) -> QwStatus {
    nonnull!(out);
    if len < k_max + 1 {
        return QwStatus::BufferTooSmall;
    }
    let (config, unitary) = match build_config(n_qubits, delta, target_x, target_y, lapse, k_max) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    let trace = if unitary {
        run_unitary(&config)
    } else {
        run_ima_deterministic(&config)
    };
    let trace = match trace {
        Ok(trace) => trace,
        Err(_) => return QwStatus::InvalidArgument,
    };
    let rows = trace.rows();
    let mut last = 0.0;
    for k in 0..=(k_max as usize) {
        if let Some(row) = rows.get(k) {
            last = row.p_c;
        }
        unsafe { out.add(k).write(last) };
    }
    QwStatus::Ok
}

/// Samples `trials` experiments with per-trial seeds `seed + i` and writes
/// the success frequency and its binomial standard error.
///
/// # Safety
/// `out_frequency` and `out_std_error` must be writable (either may be
/// NULL when not wanted).
#[no_mangle]
pub unsafe extern "C" fn qw_run_monte_carlo(
    n_qubits: u32,
    delta: f64,
    target_x: u64,
    target_y: u64,
    lapse: u64,
    k_max: u64,
    trials: u64,
    seed: u64,
    out_frequency: *mut f64,
    out_std_error: *mut f64,
) -> QwStatus {
    if lapse == 0 || trials == 0 {
        return QwStatus::InvalidArgument;
    }
    let (mut config, _) = match build_config(n_qubits, delta, target_x, target_y, lapse, k_max) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    config.mode = RunMode::MonteCarlo { trials, seed };
    match run_ima_monte_carlo(&config) {
        Ok(result) => {
            if !out_frequency.is_null() {
                unsafe { out_frequency.write(result.frequency) };
            }
            if !out_std_error.is_null() {
                unsafe { out_std_error.write(result.std_error) };
            }
            QwStatus::Ok
        }
        Err(_) => QwStatus::InvalidArgument,
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn qw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
