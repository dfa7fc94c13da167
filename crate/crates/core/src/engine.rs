//! Deterministic and Monte Carlo runners for the walk with intermediate
//! control measurements.
//!
//! The deterministic runner tracks the single surviving measurement branch
//! (the control collapses to 1 at every intermediate measurement; outcome 0
//! stops the experiment with the target found), so the cumulative success
//! probability is exact:
//!
//! ```text
//! P_c(k) = sum_j [prod_{i<j} (1 - P0_i)] P0_j  +  [prod_j (1 - P0_j)] P_t(k)
//! ```
//!
//! which unrolls the nested bracket form x + (1 - x) a measurement by
//! measurement. The Monte Carlo runner samples the same experiment per
//! trial and is kept as an independent validation path for the recursion.

use std::f64::consts::FRAC_PI_4;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlations::{self, CorrelationKind};
use crate::error::{Error, Result};
use crate::geometry::{GridGeometry, Position};
use crate::operators::{step, OracleSpec};
use crate::state::{chunked_norm_sqr, WalkState};

/// Collapse probabilities below this are treated as a vanished branch.
pub const COLLAPSE_TOL: f64 = 1e-12;

/// Steps of U needed for the unitary walk to approach the marked site:
/// round((pi/4) sqrt(N (log2 N + tan^2(delta)/4))).
pub fn t_delta(geometry: &GridGeometry, delta: f64) -> usize {
    let n = geometry.n_positions() as f64;
    let log_n = geometry.n_qubits() as f64;
    let tan = delta.tan();
    (FRAC_PI_4 * (n * (log_n + tan * tan / 4.0)).sqrt()).round() as usize
}

/// The standard step budget round((pi/4) sqrt(N log2 N)) used by default
/// for every run; equals [`t_delta`] at delta = 0.
pub fn default_kmax(geometry: &GridGeometry) -> usize {
    t_delta(geometry, 0.0)
}

/// Probability that measuring the control now yields 0.
pub fn control_zero_probability(state: &WalkState) -> f64 {
    chunked_norm_sqr(state.control_block(0))
}

/// Projects the control onto `outcome`, renormalizes, and returns the
/// pre-collapse probability of that outcome. A probability below
/// [`COLLAPSE_TOL`] means the branch does not exist.
pub fn collapse_control(state: &mut WalkState, outcome: u8) -> Result<f64> {
    assert!(outcome < 2);
    let p0 = control_zero_probability(state);
    let probability = if outcome == 0 { p0 } else { 1.0 - p0 };
    if probability < COLLAPSE_TOL {
        return Err(Error::DegenerateCollapse {
            outcome,
            probability,
        });
    }
    let other = usize::from(outcome == 0);
    state
        .control_block_mut(other)
        .fill(num_complex::Complex64::ZERO);
    let scale = 1.0 / probability.sqrt();
    for amp in state.control_block_mut(usize::from(outcome)) {
        *amp *= scale;
    }
    Ok(probability)
}

/// How a run is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Deterministic,
    MonteCarlo { trials: u64, seed: u64 },
}

/// Parameters of one experiment.
#[derive(Debug, Clone, Copy)]
pub struct IMAConfig {
    pub geometry: GridGeometry,
    pub delta: f64,
    pub target: Position,
    /// Unitary steps between consecutive control measurements.
    pub lapse: usize,
    /// Total step budget of one experiment.
    pub k_max: usize,
    /// Desired overall success probability P used by the amplification
    /// arithmetic downstream.
    pub success_target: f64,
    pub mode: RunMode,
}

impl IMAConfig {
    /// Deterministic config with the standard step budget.
    pub fn new(geometry: GridGeometry, delta: f64, target: Position, lapse: usize) -> Self {
        IMAConfig {
            geometry,
            delta,
            target,
            lapse,
            k_max: default_kmax(&geometry),
            success_target: 0.5,
            mode: RunMode::Deterministic,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.geometry.contains(self.target) {
            return Err(Error::TargetOutOfRange {
                x: self.target.x,
                y: self.target.y,
                side: self.geometry.side(),
            });
        }
        OracleSpec::new(self.delta, self.target)?;
        if self.lapse < 1 {
            return Err(Error::InvalidConfig("lapse must be >= 1".into()));
        }
        if self.success_target <= 0.0 || self.success_target >= 1.0 {
            return Err(Error::ProbabilityDomain {
                name: "success_target",
                value: self.success_target,
            });
        }
        if let RunMode::MonteCarlo { trials, .. } = self.mode {
            if trials == 0 {
                return Err(Error::InvalidConfig("trials must be >= 1".into()));
            }
        }
        Ok(())
    }

    fn oracle(&self) -> OracleSpec {
        OracleSpec::new(self.delta, self.target).expect("validated delta")
    }
}

/// One recorded step of a run.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub k: usize,
    /// Target probability of the surviving branch at this step. At
    /// measurement steps this is the post-collapse value.
    pub p_t: f64,
    /// Control-0 probability recorded at measurement steps.
    pub p0: Option<f64>,
    /// Probability that no intermediate measurement has stopped the
    /// experiment yet: prod (1 - P0) over measurements so far.
    pub survival: f64,
    /// Cumulative success probability if the experiment were cut at k.
    pub p_c: f64,
    /// One value per requested correlation kind.
    pub correlations: Vec<f64>,
}

/// Per-step record of a run, rows k = 0..=k_max.
#[derive(Debug, Clone)]
pub struct RunTrace {
    kinds: Vec<CorrelationKind>,
    rows: Vec<TraceRow>,
}

impl RunTrace {
    pub fn kinds(&self) -> &[CorrelationKind] {
        &self.kinds
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn final_p_c(&self) -> f64 {
        self.rows.last().map_or(0.0, |row| row.p_c)
    }

    pub fn p_t_series(&self) -> Vec<f64> {
        self.rows.iter().map(|row| row.p_t).collect()
    }

    pub fn p_c_series(&self) -> Vec<f64> {
        self.rows.iter().map(|row| row.p_c).collect()
    }

    /// (step, value) of the largest recorded target probability.
    pub fn max_target_probability(&self) -> (usize, f64) {
        let mut best = (0usize, f64::MIN);
        for row in &self.rows {
            if row.p_t > best.1 {
                best = (row.k, row.p_t);
            }
        }
        best
    }

    /// Values of one recorded correlation kind, step by step.
    pub fn correlation_values(&self, kind: CorrelationKind) -> Option<Vec<f64>> {
        let idx = self.kinds.iter().position(|&k| k == kind)?;
        Some(self.rows.iter().map(|row| row.correlations[idx]).collect())
    }

    /// Bare trace from (k, P_c) points, for exercising the analysis layer
    /// against closed-form cumulative-probability shapes.
    #[cfg(test)]
    pub(crate) fn synthetic(points: Vec<(usize, f64)>) -> RunTrace {
        RunTrace {
            kinds: Vec::new(),
            rows: points
                .into_iter()
                .map(|(k, p_c)| TraceRow {
                    k,
                    p_t: p_c,
                    p0: None,
                    survival: 1.0,
                    p_c,
                    correlations: Vec::new(),
                })
                .collect(),
        }
    }
}

/// Unitary evolution: no measurements, P_c(k) = P_t(k).
pub fn run_unitary(config: &IMAConfig) -> Result<RunTrace> {
    run_unitary_recording(config, &[])
}

pub fn run_unitary_recording(config: &IMAConfig, kinds: &[CorrelationKind]) -> Result<RunTrace> {
    run_loop(config, kinds, false)
}

/// Deterministic branch evolution of the measured walk.
pub fn run_ima_deterministic(config: &IMAConfig) -> Result<RunTrace> {
    run_ima_deterministic_recording(config, &[])
}

pub fn run_ima_deterministic_recording(
    config: &IMAConfig,
    kinds: &[CorrelationKind],
) -> Result<RunTrace> {
    run_loop(config, kinds, true)
}

fn run_loop(config: &IMAConfig, kinds: &[CorrelationKind], measured: bool) -> Result<RunTrace> {
    config.validate()?;
    let oracle = config.oracle();
    let mut state = WalkState::initial(config.geometry);
    let mut rows = Vec::with_capacity(config.k_max + 1);

    let mut accumulated = 0.0f64; // probability banked by 0-outcomes so far
    let mut survival = 1.0f64;

    // One entropy snapshot per recorded step serves every requested kind.
    let record = |state: &WalkState| -> Vec<f64> {
        if kinds.is_empty() {
            return Vec::new();
        }
        let snapshot = correlations::EntropySnapshot::new(state);
        kinds.iter().map(|&kind| snapshot.value(kind)).collect()
    };

    let p_t0 = state.target_probability(config.target)?;
    rows.push(TraceRow {
        k: 0,
        p_t: p_t0,
        p0: None,
        survival,
        p_c: p_t0,
        correlations: record(&state),
    });

    for k in 1..=config.k_max {
        step(&mut state, &oracle);
        let mut p0_here = None;
        if measured && k % config.lapse == 0 {
            let p0 = control_zero_probability(&state);
            accumulated += survival * p0;
            survival *= 1.0 - p0;
            p0_here = Some(p0);
            match collapse_control(&mut state, 1) {
                Ok(_) => {}
                Err(Error::DegenerateCollapse { .. }) => {
                    // The surviving branch has vanished: everything the
                    // experiment can still win is already accumulated. The
                    // state was not touched, so the row records the
                    // pre-collapse correlations.
                    rows.push(TraceRow {
                        k,
                        p_t: 0.0,
                        p0: p0_here,
                        survival,
                        p_c: accumulated,
                        correlations: record(&state),
                    });
                    return Ok(RunTrace {
                        kinds: kinds.to_vec(),
                        rows,
                    });
                }
                Err(other) => return Err(other),
            }
        }
        let p_t = state.target_probability(config.target)?;
        let p_c = accumulated + survival * p_t;
        debug_assert!(p_c <= 1.0 + 1e-9);
        rows.push(TraceRow {
            k,
            p_t,
            p0: p0_here,
            survival,
            p_c,
            correlations: record(&state),
        });
    }
    Ok(RunTrace {
        kinds: kinds.to_vec(),
        rows,
    })
}

/// Outcome counts of a Monte Carlo run.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarloResult {
    pub trials: u64,
    /// Trials that stopped early on a control-0 outcome (target certified).
    pub successes_control: u64,
    /// Trials whose final position measurement hit the target.
    pub successes_position: u64,
    pub frequency: f64,
    pub std_error: f64,
}

/// Samples `trials` independent experiments.
///
/// Conditioned on every intermediate outcome being 1, the branch state is
/// the same deterministic trajectory for all trials, so the measurement
/// probabilities are computed once and each trial reduces to drawing its
/// outcome sequence. Trial `i` uses its own generator seeded `seed + i`,
/// which makes the outcome sequence reproducible and lets trials be
/// partitioned across workers without changing results.
pub fn run_ima_monte_carlo(config: &IMAConfig) -> Result<MonteCarloResult> {
    config.validate()?;
    let RunMode::MonteCarlo { trials, seed } = config.mode else {
        return Err(Error::InvalidConfig(
            "run_ima_monte_carlo requires Monte Carlo mode".into(),
        ));
    };

    // Measurement schedule of the surviving branch.
    let oracle = config.oracle();
    let mut state = WalkState::initial(config.geometry);
    let mut zero_probabilities = Vec::new();
    let mut branch_alive = true;
    for k in 1..=config.k_max {
        step(&mut state, &oracle);
        if k % config.lapse == 0 {
            let p0 = control_zero_probability(&state);
            zero_probabilities.push(p0);
            match collapse_control(&mut state, 1) {
                Ok(_) => {}
                Err(Error::DegenerateCollapse { .. }) => {
                    branch_alive = false;
                    break;
                }
                Err(other) => return Err(other),
            }
        }
    }
    let final_target_probability = if branch_alive {
        state.target_probability(config.target)?
    } else {
        0.0
    };

    let (successes_control, successes_position) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
            for &p0 in &zero_probabilities {
                if rng.random::<f64>() < p0 {
                    return (1u64, 0u64);
                }
            }
            if rng.random::<f64>() < final_target_probability {
                (0, 1)
            } else {
                (0, 0)
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let frequency = (successes_control + successes_position) as f64 / trials as f64;
    let std_error = (frequency * (1.0 - frequency) / trials as f64).sqrt();
    Ok(MonteCarloResult {
        trials,
        successes_control,
        successes_position,
        frequency,
        std_error,
    })
}
