//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers and status codes.

use std::f64::consts::FRAC_PI_4;
use std::ptr;

use qwalk::engine::{self, IMAConfig, RunMode};
use qwalk::geometry::{GridGeometry, Position};
use qwalk_ffi::*;

fn new_state(n_qubits: u32) -> *mut QwState {
    let mut handle: *mut QwState = ptr::null_mut();
    let status = unsafe { qw_state_new(n_qubits, &mut handle) };
    assert_eq!(status, QwStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn lifecycle_and_initial_state() {
    let state = new_state(6);
    let mut amplitudes = 0u64;
    assert_eq!(
        unsafe { qw_state_num_amplitudes(state, &mut amplitudes) },
        QwStatus::Ok
    );
    assert_eq!(amplitudes, 8 * 64);

    let mut norm = 0.0;
    assert_eq!(unsafe { qw_state_norm(state, &mut norm) }, QwStatus::Ok);
    assert!((norm - 1.0).abs() < 1e-12);

    let mut p = 0.0;
    assert_eq!(
        unsafe { qw_state_target_probability(state, 0, 0, &mut p) },
        QwStatus::Ok
    );
    assert!((p - 1.0 / 64.0).abs() < 1e-14);

    let mut p0 = 1.0;
    assert_eq!(
        unsafe { qw_state_control_zero_probability(state, &mut p0) },
        QwStatus::Ok
    );
    assert_eq!(p0, 0.0);

    unsafe { qw_state_free(state) };
    unsafe { qw_state_free(ptr::null_mut()) }; // NULL is a no-op
}

#[test]
fn stepping_matches_core_engine() {
    let state = new_state(4);
    for _ in 0..10 {
        assert_eq!(
            unsafe { qw_state_step(state, FRAC_PI_4, 0, 0) },
            QwStatus::Ok
        );
    }
    let mut p_ffi = 0.0;
    unsafe { qw_state_target_probability(state, 0, 0, &mut p_ffi) };

    let geometry = GridGeometry::new(4).unwrap();
    let spec = qwalk::operators::OracleSpec::new(FRAC_PI_4, Position::ORIGIN).unwrap();
    let mut reference = qwalk::state::WalkState::initial(geometry);
    for _ in 0..10 {
        qwalk::operators::step(&mut reference, &spec);
    }
    let p_core = reference.target_probability(Position::ORIGIN).unwrap();
    assert!((p_ffi - p_core).abs() < 1e-15);
    unsafe { qw_state_free(state) };
}

#[test]
fn entropy_and_correlation_queries() {
    let state = new_state(4);
    let mut entropy = -1.0;
    assert_eq!(
        unsafe { qw_state_subsystem_entropy(state, QwSubsystem::Control, &mut entropy) },
        QwStatus::Ok
    );
    assert!(entropy.abs() < 1e-12, "initial control is pure");

    for _ in 0..5 {
        unsafe { qw_state_step(state, FRAC_PI_4, 1, 2) };
    }
    let mut mi = -1.0;
    assert_eq!(
        unsafe { qw_state_correlation(state, QwCorrelation::MiCtrRest, &mut mi) },
        QwStatus::Ok
    );
    let mut s_ctr = -1.0;
    unsafe { qw_state_subsystem_entropy(state, QwSubsystem::Control, &mut s_ctr) };
    assert!((mi - 2.0 * s_ctr).abs() < 1e-12, "pure-state identity");

    let mut ccm = -1.0;
    assert_eq!(
        unsafe { qw_state_correlation(state, QwCorrelation::Ccm, &mut ccm) },
        QwStatus::Ok
    );
    assert!(ccm >= -1e-10);
    unsafe { qw_state_free(state) };
}

#[test]
fn collapse_status_codes() {
    let state = new_state(4);
    // The initial control is |1>: collapsing to 0 has no branch.
    assert_eq!(
        unsafe { qw_state_collapse_control(state, 0, ptr::null_mut()) },
        QwStatus::DegenerateCollapse
    );
    let mut probability = 0.0;
    assert_eq!(
        unsafe { qw_state_collapse_control(state, 1, &mut probability) },
        QwStatus::Ok
    );
    assert_eq!(probability, 1.0);
    assert_eq!(
        unsafe { qw_state_collapse_control(state, 2, ptr::null_mut()) },
        QwStatus::InvalidArgument
    );
    unsafe { qw_state_free(state) };
}

#[test]
fn argument_validation() {
    let mut handle: *mut QwState = ptr::null_mut();
    assert_eq!(unsafe { qw_state_new(7, &mut handle) }, QwStatus::InvalidArgument);
    assert_eq!(
        unsafe { qw_state_new(6, ptr::null_mut()) },
        QwStatus::NullPointer
    );

    let state = new_state(4);
    let mut out = 0.0;
    assert_eq!(
        unsafe { qw_state_target_probability(state, 4, 0, &mut out) },
        QwStatus::InvalidArgument,
        "x outside the 4x4 grid"
    );
    assert_eq!(
        unsafe { qw_state_step(state, 1.6, 0, 0) },
        QwStatus::InvalidArgument,
        "delta outside [0, pi/2)"
    );
    assert_eq!(
        unsafe { qw_state_norm(ptr::null(), &mut out) },
        QwStatus::NullPointer
    );
    unsafe { qw_state_free(state) };
}

#[test]
fn step_budget_helpers() {
    let mut steps = 0u64;
    assert_eq!(unsafe { qw_default_kmax(18, &mut steps) }, QwStatus::Ok);
    assert_eq!(steps, 1706);
    let mut delta = 0.0;
    assert_eq!(unsafe { qw_tulsi_delta(16, &mut delta) }, QwStatus::Ok);
    assert!((delta.cos() - 0.25).abs() < 1e-14);
    assert_eq!(unsafe { qw_t_delta(18, delta, &mut steps) }, QwStatus::Ok);
    assert_eq!(unsafe { qw_t_delta(7, 0.0, &mut steps) }, QwStatus::InvalidArgument);
}

#[test]
fn cumulative_probability_series_matches_engine() {
    let n_qubits = 8u32;
    let k_max = 36u64;
    let lapse = 8u64;
    let mut series = vec![0.0f64; (k_max + 1) as usize];
    let status = unsafe {
        qw_run_cumulative_probability(
            n_qubits,
            FRAC_PI_4,
            0,
            0,
            lapse,
            k_max,
            series.as_mut_ptr(),
            series.len() as u64,
        )
    };
    assert_eq!(status, QwStatus::Ok);

    let geometry = GridGeometry::new(n_qubits).unwrap();
    let mut config = IMAConfig::new(geometry, FRAC_PI_4, Position::ORIGIN, lapse as usize);
    config.k_max = k_max as usize;
    let trace = engine::run_ima_deterministic(&config).unwrap();
    for (row, &value) in trace.rows().iter().zip(&series) {
        assert_eq!(row.p_c, value);
    }

    // Too-small buffer is rejected before any write.
    let status = unsafe {
        qw_run_cumulative_probability(n_qubits, FRAC_PI_4, 0, 0, lapse, k_max, series.as_mut_ptr(), k_max)
    };
    assert_eq!(status, QwStatus::BufferTooSmall);
}

#[test]
fn monte_carlo_matches_engine() {
    let mut frequency = -1.0;
    let mut std_error = -1.0;
    let status = unsafe {
        qw_run_monte_carlo(6, FRAC_PI_4, 0, 0, 4, 30, 5000, 99, &mut frequency, &mut std_error)
    };
    assert_eq!(status, QwStatus::Ok);

    let geometry = GridGeometry::new(6).unwrap();
    let mut config = IMAConfig::new(geometry, FRAC_PI_4, Position::ORIGIN, 4);
    config.k_max = 30;
    config.mode = RunMode::MonteCarlo {
        trials: 5000,
        seed: 99,
    };
    let reference = engine::run_ima_monte_carlo(&config).unwrap();
    assert_eq!(frequency, reference.frequency);
    assert_eq!(std_error, reference.std_error);
}

#[test]
fn version_is_nul_terminated() {
    let ptr = qw_version();
    let text = unsafe { std::ffi::CStr::from_ptr(ptr) }.to_str().unwrap();
    assert_eq!(text, env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/qwalk.h"
    ))
    .expect("header generated at build time");
    for symbol in [
        "qw_state_new",
        "qw_state_free",
        "qw_state_step",
        "qw_state_collapse_control",
        "qw_run_cumulative_probability",
        "qw_run_monte_carlo",
        "QW_STATUS_DEGENERATE_COLLAPSE",
        "QW_CORRELATION_MI_CTR_REST",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}
