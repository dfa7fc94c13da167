//! Classical amplification arithmetic, total-step and efficiency metrics,
//! optimal stopping search, lapse and grid-size sweeps, and order-fit
//! curves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{default_window, moving_average};
use crate::engine::{
    default_kmax, run_ima_deterministic, run_unitary, IMAConfig, RunMode, RunTrace,
};
use crate::error::{Error, Result};
use crate::geometry::{GridGeometry, Position};

/// Independent repetitions needed to reach overall success probability `p`
/// when one experiment succeeds with probability `p0` (geometric law):
/// R = log(1 - p) / log(1 - p0).
pub fn repetitions_needed(p0: f64, p: f64) -> Result<f64> {
    check_open_unit("P0", p0)?;
    check_open_unit("P", p)?;
    Ok((1.0 - p).ln() / (1.0 - p0).ln())
}

/// Expected total step count: k_max experiments' steps times the repetition
/// count at per-experiment success probability `p_c`.
pub fn total_steps(k_max: usize, p_c: f64, p: f64) -> Result<f64> {
    Ok(k_max as f64 * repetitions_needed(p_c, p)?)
}

/// Steps-efficiency e(k) = 1 / TS(k); larger is better.
pub fn efficiency(k: usize, p_c: f64, p: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidConfig("efficiency needs k >= 1".into()));
    }
    Ok(1.0 / total_steps(k, p_c, p)?)
}

fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::ProbabilityDomain { name, value });
    }
    Ok(())
}

/// Smoothed-efficiency argmax over a trace: the step budget that minimizes
/// the total step count. Ties (values within 1e-12 relative) break toward
/// the smaller step count.
pub fn optimal_kmax(trace: &RunTrace, p: f64, window: usize) -> Result<(usize, f64)> {
    check_open_unit("P", p)?;
    let rows = trace.rows();
    if rows.len() < 2 {
        return Err(Error::InsufficientData(
            "trace has no steps beyond the initial state".into(),
        ));
    }
    let log_fail = (1.0 - p).ln();
    let raw: Vec<f64> = rows
        .iter()
        .filter(|row| row.k >= 1)
        .map(|row| {
            // e(k) = (1/k) log(1 - P_c) / log(1 - P); clamp the degenerate ends.
            let p_c = row.p_c.min(1.0 - 1e-15);
            if p_c <= 0.0 {
                0.0
            } else {
                (1.0 - p_c).ln() / (row.k as f64 * log_fail)
            }
        })
        .collect();
    if raw.iter().all(|&e| e == 0.0) {
        return Err(Error::InsufficientData(
            "cumulative probability is identically zero".into(),
        ));
    }
    let smoothed = moving_average(&raw, window)?;
    let mut best = (0usize, -1.0f64);
    for (idx, &value) in smoothed.iter().enumerate() {
        if value > best.1 + best.1.abs() * 1e-12 {
            best = (idx, value);
        }
    }
    let k_opt = best.0 + 1; // raw[0] is k = 1
    let p_c_opt = rows[k_opt].p_c;
    let ts = total_steps(k_opt, p_c_opt, p)?;
    Ok((k_opt, ts))
}

/// Lapse schedule of a sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LapseRule {
    /// No intermediate measurements.
    Unitary,
    /// Fixed lapse, e.g. 1 for measuring at every step.
    Const(usize),
    /// l = max(1, round(sqrt(N) / 2^m)); m = -1 gives 2 sqrt(N).
    SqrtNOverPow2(i32),
}

impl LapseRule {
    /// Concrete lapse for a grid, or None for the unitary rule.
    pub fn lapse(&self, geometry: &GridGeometry) -> Option<usize> {
        match *self {
            LapseRule::Unitary => None,
            LapseRule::Const(l) => Some(l.max(1)),
            LapseRule::SqrtNOverPow2(m) => {
                let side = geometry.side() as f64;
                let l = side * 2f64.powi(-m);
                Some((l.round() as usize).max(1))
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let lower = t.to_ascii_lowercase();
        if lower == "unitary" {
            return Ok(LapseRule::Unitary);
        }
        if let Ok(l) = lower.parse::<usize>() {
            if l == 0 {
                return Err(Error::InvalidConfig("lapse rule 0 is not valid".into()));
            }
            return Ok(LapseRule::Const(l));
        }
        match lower.as_str() {
            "2sqrtn" => Ok(LapseRule::SqrtNOverPow2(-1)),
            "sqrtn" => Ok(LapseRule::SqrtNOverPow2(0)),
            "sqrtn/2" => Ok(LapseRule::SqrtNOverPow2(1)),
            "sqrtn/4" => Ok(LapseRule::SqrtNOverPow2(2)),
            "sqrtn/8" => Ok(LapseRule::SqrtNOverPow2(3)),
            "sqrtn/16" => Ok(LapseRule::SqrtNOverPow2(4)),
            _ => Err(Error::InvalidConfig(format!(
                "unknown lapse rule '{text}' (expected unitary, an integer, or 2sqrtN, sqrtN, sqrtN/2, sqrtN/4, sqrtN/8, sqrtN/16)"
            ))),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            LapseRule::Unitary => "unitary".into(),
            LapseRule::Const(l) => l.to_string(),
            LapseRule::SqrtNOverPow2(m) => match m {
                -1 => "2sqrtN".into(),
                0 => "sqrtN".into(),
                m => format!("sqrtN/{}", 1u32 << m),
            },
        }
    }
}

impl std::fmt::Display for LapseRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// One sweep cell: a grid size and lapse schedule with its step metrics.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n_qubits: u32,
    pub n_positions: usize,
    pub rule: LapseRule,
    /// Concrete lapse (absent for unitary rows).
    pub lapse: Option<usize>,
    /// Measurement density m = sqrt(N) / l (absent for unitary rows).
    pub m: Option<f64>,
    pub k_max: usize,
    pub p_c_final: f64,
    pub total_steps: f64,
    pub optimal_k: usize,
    pub total_steps_at_optimal: f64,
}

impl SweepRow {
    /// Order-fit value f(alpha) = TS / (sqrt(N) (log2 N)^alpha).
    pub fn order_fit_value(&self, alpha: f64) -> f64 {
        let n = self.n_positions as f64;
        self.total_steps / (n.sqrt() * (self.n_qubits as f64).powf(alpha))
    }
}

/// Rows of a lapse or grid-size sweep, sorted by (N, lapse density).
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn rows_for_rule(&self, rule: LapseRule) -> Vec<&SweepRow> {
        self.rows.iter().filter(|row| row.rule == rule).collect()
    }
}

fn sweep_cell(
    geometry: GridGeometry,
    delta: f64,
    target: Position,
    rule: LapseRule,
    p: f64,
) -> Result<SweepRow> {
    let lapse = rule.lapse(&geometry);
    let mut config = IMAConfig::new(geometry, delta, target, lapse.unwrap_or(1));
    config.success_target = p;
    config.mode = RunMode::Deterministic;
    let trace = match lapse {
        Some(_) => run_ima_deterministic(&config)?,
        None => run_unitary(&config)?,
    };
    let p_c_final = trace.final_p_c();
    let ts = total_steps(config.k_max, p_c_final, p)?;
    let window = default_window(geometry.side(), lapse);
    let (optimal_k, ts_opt) = optimal_kmax(&trace, p, window)?;
    Ok(SweepRow {
        n_qubits: geometry.n_qubits(),
        n_positions: geometry.n_positions(),
        rule,
        lapse,
        m: lapse.map(|l| geometry.side() as f64 / l as f64),
        k_max: config.k_max,
        p_c_final,
        total_steps: ts,
        optimal_k,
        total_steps_at_optimal: ts_opt,
    })
}

fn sort_rows(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| {
        (a.n_positions, a.m.unwrap_or(-1.0), a.lapse.unwrap_or(0))
            .partial_cmp(&(b.n_positions, b.m.unwrap_or(-1.0), b.lapse.unwrap_or(0)))
            .unwrap()
    });
}

/// Runs one grid size over a list of lapses plus the unitary case.
/// Cells execute in parallel; the result ordering is deterministic.
pub fn sweep_lapse(
    geometry: GridGeometry,
    delta: f64,
    target: Position,
    lapses: &[usize],
    p: f64,
) -> Result<SweepResult> {
    let mut cells: Vec<LapseRule> = lapses.iter().map(|&l| LapseRule::Const(l)).collect();
    cells.push(LapseRule::Unitary);
    let mut rows = cells
        .into_par_iter()
        .map(|rule| sweep_cell(geometry, delta, target, rule, p))
        .collect::<Result<Vec<_>>>()?;
    sort_rows(&mut rows);
    Ok(SweepResult { rows })
}

/// Grid-size scaling: the exponent must be even (square torus).
///
/// `delta` may depend on the grid; pass a closure (e.g. a constant, or the
/// N-dependent Tulsi angle).
pub fn sweep_order(
    exponents: &[u32],
    delta: impl Fn(&GridGeometry) -> f64 + Sync,
    target: Position,
    rule: LapseRule,
    p: f64,
) -> Result<SweepResult> {
    if exponents.is_empty() {
        return Err(Error::InvalidConfig("no grid exponents given".into()));
    }
    let mut rows = exponents
        .par_iter()
        .map(|&n| {
            let geometry = GridGeometry::new(n)?;
            sweep_cell(geometry, delta(&geometry), target, rule, p)
        })
        .collect::<Result<Vec<_>>>()?;
    sort_rows(&mut rows);
    Ok(SweepResult { rows })
}

/// TS(N) divided by sqrt(N) (log2 N)^alpha, with the flatness ratio over
/// the largest three grid sizes.
#[derive(Debug, Clone, Serialize)]
pub struct OrderFitSeries {
    pub alpha: f64,
    pub beta: f64,
    /// (N, f(alpha, N)) ordered by N.
    pub values: Vec<(usize, f64)>,
    /// max/min of f over the largest three N.
    pub flatness: f64,
}

/// Normalizes a single-rule sweep by the candidate order curve. Requires
/// at least three grid sizes so the flatness window is meaningful.
pub fn order_fit(sweep: &SweepResult, alpha: f64) -> Result<OrderFitSeries> {
    let rows = &sweep.rows;
    if rows.len() < 3 {
        return Err(Error::InsufficientData(
            "order fit needs at least three grid sizes".into(),
        ));
    }
    let rule = rows[0].rule;
    if rows.iter().any(|row| row.rule != rule) {
        return Err(Error::InvalidConfig(
            "order fit expects a single lapse rule per sweep".into(),
        ));
    }
    let mut values: Vec<(usize, f64)> = rows
        .iter()
        .map(|row| (row.n_positions, row.order_fit_value(alpha)))
        .collect();
    values.sort_by_key(|&(n, _)| n);
    let top = &values[values.len() - 3..];
    let max = top.iter().map(|&(_, f)| f).fold(f64::MIN, f64::max);
    let min = top.iter().map(|&(_, f)| f).fold(f64::MAX, f64::min);
    Ok(OrderFitSeries {
        alpha,
        beta: 1.0,
        values,
        flatness: max / min,
    })
}

/// Shared smoothing-window rule, re-exported where sweeps need it.
pub fn smoothing_window(geometry: &GridGeometry, lapse: Option<usize>) -> usize {
    default_window(geometry.side(), lapse)
}

/// Standard step budget, re-exported for CLI convenience.
pub fn standard_kmax(geometry: &GridGeometry) -> usize {
    default_kmax(geometry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn geom(n: u32) -> GridGeometry {
        GridGeometry::new(n).unwrap()
    }

    #[test]
    fn repetition_count_examples() {
        assert!((repetitions_needed(0.5, 0.75).unwrap() - 2.0).abs() < 1e-14);
        assert!((repetitions_needed(0.3, 0.3).unwrap() - 1.0).abs() < 1e-15);
        let r = repetitions_needed(0.1, 0.9).unwrap();
        let oracle = 0.1f64.ln() / 0.9f64.ln();
        assert!((r - oracle).abs() < 1e-12);
        assert!((r - 21.854).abs() < 1e-3);
    }

    #[test]
    fn repetition_domain_errors() {
        assert!(repetitions_needed(0.0, 0.5).is_err());
        assert!(repetitions_needed(1.0, 0.5).is_err());
        assert!(repetitions_needed(0.5, 0.0).is_err());
        assert!(repetitions_needed(0.5, 1.0).is_err());
    }

    #[test]
    fn total_steps_examples() {
        assert!((total_steps(100, 0.5, 0.75).unwrap() - 200.0).abs() < 1e-12);
        assert_eq!(total_steps(123, 0.37, 0.37).unwrap(), 123.0);
        // Scale consistency: built from the same floating ops.
        let ts = total_steps(77, 0.21, 0.6).unwrap();
        let r = repetitions_needed(0.21, 0.6).unwrap();
        assert_eq!(ts, 77.0 * r);
    }

    #[test]
    fn efficiency_examples() {
        assert!((efficiency(100, 0.75, 0.75).unwrap() - 0.01).abs() < 1e-16);
        let (k, p_c, p) = (50usize, 0.4, 0.8);
        let e = efficiency(k, p_c, p).unwrap();
        let ts = total_steps(k, p_c, p).unwrap();
        assert_eq!(e, 1.0 / ts);
        assert!((e * ts - 1.0).abs() < 1e-15);
        // Doubling k halves e.
        let e2 = efficiency(2 * k, p_c, p).unwrap();
        assert!((e2 - e / 2.0).abs() < 1e-16 * e.abs().max(1.0));
    }

    #[test]
    fn ratio_of_total_steps_is_independent_of_p() {
        let (ka, pca) = (120usize, 0.31);
        let (kb, pcb) = (340usize, 0.62);
        for (p1, p2) in [(0.5, 0.9), (0.1, 0.99), (0.33, 0.66)] {
            let r1 = total_steps(ka, pca, p1).unwrap() / total_steps(kb, pcb, p1).unwrap();
            let r2 = total_steps(ka, pca, p2).unwrap() / total_steps(kb, pcb, p2).unwrap();
            assert!((r1 - r2).abs() < 1e-12 * r1.abs());
        }
    }

    fn synthetic_trace(p_c: impl Fn(usize) -> f64, k_max: usize) -> RunTrace {
        // Drive the real engine row shape through a tiny run, then overwrite
        // no fields: build via a real run is clumsy here, so synthesize rows
        // through the public constructor path used by the engine itself.
        RunTrace::synthetic((0..=k_max).map(|k| (k, p_c(k))).collect())
    }

    #[test]
    fn constant_hazard_efficiency_is_flat_and_ties_break_small() {
        let c = 0.02f64;
        let trace = synthetic_trace(|k| 1.0 - (1.0 - c).powi(k as i32), 40);
        let (k_opt, _ts) = optimal_kmax(&trace, 0.5, 1).unwrap();
        assert_eq!(k_opt, 1);
    }

    #[test]
    fn interior_optimum_is_found() {
        // Accelerating P_c up to k = 20, flat afterwards: e(k) grows while
        // the gain accelerates and decays as 1/k once it stops.
        let trace = synthetic_trace(
            |k| {
                let capped = (k.min(20)) as f64;
                0.00125 * capped * capped
            },
            60,
        );
        let (k_opt, ts) = optimal_kmax(&trace, 0.5, 1).unwrap();
        assert!(k_opt > 10 && k_opt <= 20, "k_opt = {k_opt}");
        // TS at the optimum is no worse than the endpoints.
        let rows = trace.rows();
        let ts_1 = total_steps(1, rows[1].p_c, 0.5).unwrap();
        let ts_end = total_steps(60, rows[60].p_c, 0.5).unwrap();
        assert!(ts <= ts_1 && ts <= ts_end);
    }

    #[test]
    fn zero_cumulative_probability_is_an_error() {
        let trace = synthetic_trace(|_| 0.0, 10);
        assert!(optimal_kmax(&trace, 0.5, 1).is_err());
    }

    #[test]
    fn lapse_rules_resolve() {
        let g = geom(8); // side 16
        assert_eq!(LapseRule::Unitary.lapse(&g), None);
        assert_eq!(LapseRule::Const(1).lapse(&g), Some(1));
        assert_eq!(LapseRule::SqrtNOverPow2(-1).lapse(&g), Some(32));
        assert_eq!(LapseRule::SqrtNOverPow2(0).lapse(&g), Some(16));
        assert_eq!(LapseRule::SqrtNOverPow2(2).lapse(&g), Some(4));
        assert_eq!(LapseRule::SqrtNOverPow2(4).lapse(&g), Some(1));
        assert_eq!(LapseRule::parse("sqrtN/4").unwrap(), LapseRule::SqrtNOverPow2(2));
        assert_eq!(LapseRule::parse("17").unwrap(), LapseRule::Const(17));
        assert_eq!(LapseRule::parse("unitary").unwrap(), LapseRule::Unitary);
        assert!(LapseRule::parse("sqrtN/3").is_err());
    }

    #[test]
    fn lapse_sweep_contains_unitary_row_and_all_lapses() {
        let g = geom(6);
        let sweep = sweep_lapse(g, FRAC_PI_4, Position::ORIGIN, &[1, 4, 8], 0.5).unwrap();
        assert_eq!(sweep.rows.len(), 4);
        assert_eq!(
            sweep
                .rows
                .iter()
                .filter(|row| row.rule == LapseRule::Unitary)
                .count(),
            1
        );
        for row in &sweep.rows {
            assert!(row.total_steps > 0.0);
            assert!(row.p_c_final > 0.0 && row.p_c_final < 1.0);
            if let (Some(l), Some(m)) = (row.lapse, row.m) {
                assert!((m - g.side() as f64 / l as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn order_sweep_total_steps_grow_with_n() {
        for rule in [
            LapseRule::Const(1),
            LapseRule::Unitary,
            LapseRule::SqrtNOverPow2(1),
        ] {
            let sweep = sweep_order(
                &[6, 8, 10],
                |_| FRAC_PI_4,
                Position::ORIGIN,
                rule,
                0.5,
            )
            .unwrap();
            let ts: Vec<f64> = sweep.rows.iter().map(|row| row.total_steps).collect();
            assert!(ts[0] < ts[1] && ts[1] < ts[2], "rule {rule}: {ts:?}");
        }
    }

    #[test]
    fn order_fit_cancels_synthetic_scaling_exactly() {
        let mut rows = Vec::new();
        for n in [8u32, 10, 12, 14] {
            let g = geom(n);
            let ts = (g.n_positions() as f64).sqrt() * (n as f64).powf(0.9);
            rows.push(SweepRow {
                n_qubits: n,
                n_positions: g.n_positions(),
                rule: LapseRule::Const(1),
                lapse: Some(1),
                m: Some(g.side() as f64),
                k_max: 10,
                p_c_final: 0.5,
                total_steps: ts,
                optimal_k: 10,
                total_steps_at_optimal: ts,
            });
        }
        let sweep = SweepResult { rows };
        let fit = order_fit(&sweep, 0.9).unwrap();
        assert!((fit.flatness - 1.0).abs() < 1e-12);
        for &(_, f) in &fit.values {
            assert!((f - 1.0).abs() < 1e-12);
        }
        // Underestimating alpha leaves residual growth in N.
        let low = order_fit(&sweep, 0.6).unwrap();
        for pair in low.values.windows(2) {
            assert!(pair[1].1 > pair[0].1);
        }
        assert!(low.flatness > 1.0);
    }

    #[test]
    fn order_fit_needs_three_sizes() {
        let sweep = SweepResult { rows: Vec::new() };
        assert!(order_fit(&sweep, 1.0).is_err());
    }

    #[test]
    fn sweep_results_do_not_depend_on_worker_count() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                sweep_lapse(geom(6), FRAC_PI_4, Position::ORIGIN, &[1, 2, 4, 8], 0.5).unwrap()
            })
        };
        let serial = run(1);
        let parallel = run(4);
        assert_eq!(serial.rows.len(), parallel.rows.len());
        for (a, b) in serial.rows.iter().zip(&parallel.rows) {
            assert_eq!(a.lapse, b.lapse);
            assert_eq!(a.total_steps.to_bits(), b.total_steps.to_bits());
            assert_eq!(a.p_c_final.to_bits(), b.p_c_final.to_bits());
            assert_eq!(a.optimal_k, b.optimal_k);
        }
    }
}
