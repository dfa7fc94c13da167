//! Self-check harness behind `qwalk validate`: dense-oracle equivalence,
//! operator involutions, the invariant subspace, entropy duality, and
//! Monte Carlo vs deterministic consistency, all at small N.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dense::{build_dense_unitary, dense_reduced_density, DenseKeep};
use crate::engine::{
    collapse_control, control_zero_probability, run_ima_deterministic, run_ima_monte_carlo,
    IMAConfig, RunMode,
};
use crate::error::Result;
use crate::geometry::{GridGeometry, Position};
use crate::operators::{
    apply_coin, apply_oracle, apply_shift, step, OracleSpec,
};
use crate::state::{ReducedSubsystem, WalkState};

/// Outcome of one self-check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Largest deviation observed, in the check's own units.
    pub deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn from_deviation(name: &'static str, deviation: f64, tolerance: f64, detail: String) -> Self {
        CheckOutcome {
            name,
            passed: deviation <= tolerance,
            deviation,
            tolerance,
            detail,
        }
    }
}

fn random_state(geometry: GridGeometry, seed: u64) -> WalkState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = WalkState::zero(geometry);
    for ctr in 0..2 {
        for coin in 0..4 {
            for y in 0..geometry.side() {
                for x in 0..geometry.side() {
                    state.set_amplitude(
                        ctr,
                        coin,
                        Position::new(x, y),
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                    );
                }
            }
        }
    }
    state.normalize();
    state
}

/// Max-abs amplitude deviation between the structured evolution under
/// `step_fn` and the dense matrix power, over `steps` steps.
pub fn dense_equivalence_deviation(
    geometry: GridGeometry,
    spec: &OracleSpec,
    steps: usize,
    mut step_fn: impl FnMut(&mut WalkState, &OracleSpec),
) -> Result<f64> {
    let unitary = build_dense_unitary(&geometry, spec)?;
    let mut structured = WalkState::initial(geometry);
    let mut dense = structured.amplitudes().to_vec();
    let mut worst = 0.0f64;
    for _ in 0..steps {
        step_fn(&mut structured, spec);
        dense = unitary.matvec(&dense);
        let diff = structured
            .amplitudes()
            .iter()
            .zip(&dense)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(diff);
    }
    Ok(worst)
}

/// Structured vs dense evolution at N in {4, 16, 64} and three angles.
pub fn check_dense_equivalence(steps: usize) -> CheckOutcome {
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for n_qubits in [2u32, 4, 6] {
        let geometry = GridGeometry::new(n_qubits).expect("small grid");
        let tulsi = OracleSpec::tulsi(&geometry, Position::ORIGIN).delta();
        for delta in [0.0, std::f64::consts::FRAC_PI_4, tulsi] {
            let spec = OracleSpec::new(delta, Position::ORIGIN).expect("valid delta");
            let deviation = dense_equivalence_deviation(geometry, &spec, steps, step)
                .expect("dense scale is guarded");
            worst = worst.max(deviation);
            detail.push_str(&format!(
                "N={} delta={:.4}: {:.3e}; ",
                geometry.n_positions(),
                delta,
                deviation
            ));
        }
    }
    CheckOutcome::from_deviation("dense-equivalence", worst, 1e-10, detail)
}

/// O^2 = C^2 = S^2 = I on random states.
pub fn check_involutions(rounds: usize, seed: u64) -> CheckOutcome {
    let geometry = GridGeometry::new(4).expect("small grid");
    let spec = OracleSpec::new(0.8, Position::new(1, 2)).expect("valid delta");
    let mut worst = 0.0f64;
    for round in 0..rounds {
        let original = random_state(geometry, seed.wrapping_add(round as u64));
        let ops: [&dyn Fn(&mut WalkState); 3] = [
            &|s| apply_oracle(s, &spec),
            &|s| apply_coin(s),
            &|s| apply_shift(s),
        ];
        for apply in ops {
            let mut state = original.clone();
            apply(&mut state);
            apply(&mut state);
            let diff = state
                .amplitudes()
                .iter()
                .zip(original.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst = worst.max(diff);
        }
    }
    CheckOutcome::from_deviation(
        "operator-involutions",
        worst,
        1e-12,
        format!("{rounds} random states"),
    )
}

/// Control-0 amplitudes away from the target stay exactly dark along a run.
pub fn check_invariant_subspace(n_qubits: u32, delta: f64, lapse: usize) -> CheckOutcome {
    let geometry = GridGeometry::new(n_qubits).expect("valid grid");
    let target = Position::ORIGIN;
    let spec = OracleSpec::new(delta, target).expect("valid delta");
    let config = IMAConfig::new(geometry, delta, target, lapse);
    let n = geometry.n_positions();
    let t = geometry.position_index(target);

    let mut state = WalkState::initial(geometry);
    let mut worst = 0.0f64;
    for k in 1..=config.k_max {
        step(&mut state, &spec);
        if k % lapse == 0 {
            collapse_control(&mut state, 1).expect("surviving branch");
        }
        for coin in 0..4 {
            for p in 0..n {
                if p != t {
                    worst = worst.max(state.amplitudes()[coin * n + p].norm());
                }
            }
        }
    }
    CheckOutcome::from_deviation(
        "invariant-subspace",
        worst,
        1e-12,
        format!("N={n} lapse={lapse}, {} steps", config.k_max),
    )
}

/// S of a small subsystem equals S of its dense complement (pure duality).
pub fn check_entropy_duality(steps: usize) -> CheckOutcome {
    let geometry = GridGeometry::new(4).expect("small grid");
    let spec = OracleSpec::new(std::f64::consts::FRAC_PI_4, Position::ORIGIN).expect("delta");
    let mut state = WalkState::initial(geometry);
    let mut worst = 0.0f64;
    for _ in 0..steps {
        step(&mut state, &spec);
        let pairs = [
            (ReducedSubsystem::Control, DenseKeep::CoinPosition),
            (ReducedSubsystem::Coin, DenseKeep::ControlPosition),
            (ReducedSubsystem::ControlCoin, DenseKeep::Position),
        ];
        for (small, dense) in pairs {
            let fast = state
                .reduced_density(small)
                .von_neumann_entropy()
                .expect("normalized state");
            let slow = dense_reduced_density(&state, dense)
                .expect("dense scale")
                .von_neumann_entropy()
                .expect("normalized state");
            worst = worst.max((fast - slow).abs());
        }
    }
    CheckOutcome::from_deviation(
        "entropy-duality",
        worst,
        1e-10,
        format!("N=16, {steps} steps, three subsystem pairs"),
    )
}

/// Monte Carlo success frequency within 3 binomial sigma of the
/// deterministic cumulative probability.
pub fn check_monte_carlo(trials: u64, seed: u64) -> CheckOutcome {
    let geometry = GridGeometry::new(8).expect("valid grid");
    let lapse = geometry.side() / 2;
    let mut config = IMAConfig::new(
        geometry,
        std::f64::consts::FRAC_PI_4,
        Position::ORIGIN,
        lapse,
    );
    let deterministic = run_ima_deterministic(&config)
        .expect("deterministic run")
        .final_p_c();
    config.mode = RunMode::MonteCarlo { trials, seed };
    let mc = run_ima_monte_carlo(&config).expect("monte carlo run");
    let sigma = (deterministic * (1.0 - deterministic) / trials as f64).sqrt();
    let z = (mc.frequency - deterministic).abs() / sigma;
    CheckOutcome::from_deviation(
        "monte-carlo-consistency",
        z,
        3.0,
        format!(
            "freq {:.5} vs P_c {:.5} over {trials} trials (z-score units)",
            mc.frequency, deterministic
        ),
    )
}

/// Post-collapse control purity: P0 vanishes right after collapsing to 1.
pub fn check_collapse_purity() -> CheckOutcome {
    let geometry = GridGeometry::new(6).expect("valid grid");
    let spec = OracleSpec::new(std::f64::consts::FRAC_PI_4, Position::ORIGIN).expect("delta");
    let mut state = WalkState::initial(geometry);
    let mut worst = 0.0f64;
    for k in 1..=40 {
        step(&mut state, &spec);
        if k % 4 == 0 {
            collapse_control(&mut state, 1).expect("surviving branch");
            worst = worst.max(control_zero_probability(&state));
        }
    }
    CheckOutcome::from_deviation("collapse-purity", worst, 1e-20, "10 collapses at N=64".into())
}

/// The full battery, sized to finish in seconds.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        check_dense_equivalence(20),
        check_involutions(100, seed),
        check_invariant_subspace(8, std::f64::consts::FRAC_PI_4, 4),
        check_entropy_duality(12),
        check_collapse_purity(),
        check_monte_carlo(20_000, seed),
    ]
}
