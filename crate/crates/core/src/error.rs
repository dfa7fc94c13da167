use thiserror::Error;

/// Errors produced by the simulator and analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("target position ({x}, {y}) outside a {side}x{side} grid")]
    TargetOutOfRange { x: usize, y: usize, side: usize },

    #[error("delta must lie in [0, pi/2), got {0}")]
    InvalidDelta(f64),

    #[error("dense operator requested for {n_positions} positions (limit {limit})")]
    DenseTooLarge { n_positions: usize, limit: usize },

    #[error("collapse to control outcome {outcome} has probability {probability:.3e}, below tolerance")]
    DegenerateCollapse { outcome: u8, probability: f64 },

    #[error("density matrix trace {trace} deviates from 1 beyond tolerance")]
    TraceNotOne { trace: f64 },

    #[error("density matrix has eigenvalue {value:.3e} below the negativity tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("matrix is not Hermitian (max asymmetry {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("probability argument {name}={value} outside the open interval (0, 1)")]
    ProbabilityDomain { name: &'static str, value: f64 },

    #[error("smoothing window must be odd and >= 1, got {0}")]
    InvalidWindow(usize),

    #[error("cannot normalize an all-zero series")]
    AllZeroSeries,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
