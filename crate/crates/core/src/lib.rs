//! Simulator for controlled quantum-walk search on a 2D torus grid.
//!
//! A walker with a four-direction coin and an ancilla control qubit searches
//! a marked site on an `L x L` torus (`N = L^2` sites). One step applies a
//! conditioned reflection about the marked site followed by a conditional
//! coined walk. Between steps the control qubit may be measured: outcome 0
//! certifies the walker sits on the marked site, outcome 1 collapses the
//! walk and lets it continue. The crate provides
//!
//! - the state vector, reduced density matrices and von Neumann entropies
//!   ([`WalkState`], [`DensityMatrix`]),
//! - the structured O(N) step operators and a dense brute-force reference
//!   ([`operators`], [`dense`]),
//! - deterministic and Monte Carlo runners with per-step probability traces
//!   ([`engine`]),
//! - bipartite mutual-information and cumulative-correlation series
//!   ([`correlations`]),
//! - repetition/total-step/efficiency arithmetic, lapse and grid-size
//!   sweeps, and order-fit curves ([`analysis`]),
//! - a self-check harness ([`validation`]) and the config/output layer used
//!   by the `qwalk` binary ([`experiment`], [`output`]).

pub mod analysis;
pub mod correlations;
pub mod dense;
pub mod density;
pub mod eigen;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod operators;
pub mod output;
pub mod state;
pub mod validation;

pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use geometry::{GridGeometry, Position};
pub use num_complex::Complex64;
pub use operators::OracleSpec;
pub use state::{ReducedSubsystem, Subsystem, WalkState};
