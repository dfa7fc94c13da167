//! Bipartite mutual information and the cumulative correlation measure.
//!
//! Every measure reduces to von Neumann entropies of the three small
//! reduced matrices rho_ctr, rho_c and rho_{ctr,c}: purity of the global
//! state makes S(rho_p) = S(rho_{ctr,c}), S(rho_{c,p}) = S(rho_ctr) and
//! S(rho_{ctr,p}) = S(rho_c), so nothing N-dimensional is ever formed.

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::state::{ReducedSubsystem, WalkState};

/// The correlation measures recorded along a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorrelationKind {
    /// MI between the control qubit and everything else; 2 S(rho_ctr).
    MiCtrRest,
    /// MI between control+coin and position; 2 S(rho_{ctr,c}).
    MiCtrCoinPos,
    /// MI between position+control and coin; 2 S(rho_c).
    MiPosCtrCoin,
    /// MI between coin and position.
    MiCoinPos,
    /// MI between control and coin.
    MiCtrCoin,
    /// MI between control and position.
    MiCtrPos,
    /// Sum of the three single-qubit bipartition MIs of rho_{ctr,c}.
    CcmCtrCoin,
}

impl CorrelationKind {
    pub const ALL: [CorrelationKind; 7] = [
        CorrelationKind::MiCtrRest,
        CorrelationKind::MiCtrCoinPos,
        CorrelationKind::MiPosCtrCoin,
        CorrelationKind::MiCoinPos,
        CorrelationKind::MiCtrCoin,
        CorrelationKind::MiCtrPos,
        CorrelationKind::CcmCtrCoin,
    ];

    /// Stable column label used in CSV/JSON output.
    pub fn label(&self) -> &'static str {
        match self {
            CorrelationKind::MiCtrRest => "MI_ctr_rest",
            CorrelationKind::MiCtrCoinPos => "MI_ctrcoin_pos",
            CorrelationKind::MiPosCtrCoin => "MI_posctr_coin",
            CorrelationKind::MiCoinPos => "MI_coin_pos",
            CorrelationKind::MiCtrCoin => "MI_ctr_coin",
            CorrelationKind::MiCtrPos => "MI_ctr_pos",
            CorrelationKind::CcmCtrCoin => "CCM_ctrcoin",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let canonical = text.trim().to_ascii_lowercase().replace('-', "_");
        CorrelationKind::ALL
            .iter()
            .copied()
            .find(|kind| kind.label().to_ascii_lowercase() == canonical)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown correlation kind '{text}' (expected one of {})",
                    CorrelationKind::ALL.map(|k| k.label()).join(", ")
                ))
            })
    }
}

impl std::fmt::Display for CorrelationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The three small-subsystem entropies every measure is built from,
/// computed with a single pass over the amplitudes.
#[derive(Debug, Clone)]
pub struct EntropySnapshot {
    rho_control_coin: DensityMatrix,
    s_ctr: f64,
    s_c: f64,
    s_ctrc: f64,
}

impl EntropySnapshot {
    pub fn new(state: &WalkState) -> Self {
        let rho8 = state.reduced_density(ReducedSubsystem::ControlCoin);
        let entropy = |rho: &DensityMatrix| {
            rho.von_neumann_entropy()
                .expect("reduced state of a normalized pure state")
        };
        let s_ctrc = entropy(&rho8);
        let s_ctr = entropy(&rho8.partial_trace_keep(&[0]));
        let s_c = entropy(&rho8.partial_trace_keep(&[1, 2]));
        EntropySnapshot {
            rho_control_coin: rho8,
            s_ctr,
            s_c,
            s_ctrc,
        }
    }

    pub fn control_entropy(&self) -> f64 {
        self.s_ctr
    }

    pub fn coin_entropy(&self) -> f64 {
        self.s_c
    }

    pub fn control_coin_entropy(&self) -> f64 {
        self.s_ctrc
    }

    /// Value of one correlation kind. MIs never dip below the negated
    /// entropy rounding noise; no clamping is applied here.
    pub fn value(&self, kind: CorrelationKind) -> f64 {
        match kind {
            CorrelationKind::MiCtrRest => 2.0 * self.s_ctr,
            CorrelationKind::MiCtrCoinPos => 2.0 * self.s_ctrc,
            CorrelationKind::MiPosCtrCoin => 2.0 * self.s_c,
            CorrelationKind::MiCoinPos => -self.s_ctr + self.s_c + self.s_ctrc,
            CorrelationKind::MiCtrCoin => self.s_ctr + self.s_c - self.s_ctrc,
            CorrelationKind::MiCtrPos => self.s_ctr - self.s_c + self.s_ctrc,
            CorrelationKind::CcmCtrCoin => ccm_of_control_coin_density(&self.rho_control_coin),
        }
    }
}

/// One correlation value for a pure normalized state.
pub fn evaluate(state: &WalkState, kind: CorrelationKind) -> f64 {
    EntropySnapshot::new(state).value(kind)
}

/// Bipartite mutual information (bits) of one of the six MI partitions.
pub fn mutual_information(state: &WalkState, kind: CorrelationKind) -> f64 {
    evaluate(state, kind)
}

/// Cumulative correlation measure of the control+coin register: the sum of
/// S(rho_A) + S(rho_A~) - S(rho) over the three one-qubit-vs-rest
/// bipartitions of {control, coin_high, coin_low}.
pub fn ccm(state: &WalkState) -> f64 {
    ccm_of_control_coin_density(&state.reduced_density(ReducedSubsystem::ControlCoin))
}

/// CCM evaluated directly on an 8x8 three-qubit density matrix
/// (qubit 0 = control, qubits 1, 2 = coin).
pub fn ccm_of_control_coin_density(rho: &DensityMatrix) -> f64 {
    assert_eq!(rho.dim(), 8, "CCM is defined on the 3-qubit register");
    let entropy = |rho: &DensityMatrix| {
        rho.von_neumann_entropy()
            .expect("partial trace of a unit-trace state")
    };
    let s_total = entropy(rho);
    let mut sum = 0.0;
    for q in 0..3usize {
        let rest: Vec<usize> = (0..3).filter(|&r| r != q).collect();
        let s_single = entropy(&rho.partial_trace_keep(&[q]));
        let s_pair = entropy(&rho.partial_trace_keep(&rest));
        sum += s_single + s_pair - s_total;
    }
    sum
}

/// A per-step series of one correlation measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub kind: CorrelationKind,
    pub values: Vec<f64>,
    pub smoothed: Option<Vec<f64>>,
    pub normalized: bool,
}

impl CorrelationSeries {
    pub fn new(kind: CorrelationKind, values: Vec<f64>) -> Self {
        CorrelationSeries {
            kind,
            values,
            smoothed: None,
            normalized: false,
        }
    }

    /// Smoothed values when present, raw values otherwise.
    pub fn active(&self) -> &[f64] {
        self.smoothed.as_deref().unwrap_or(&self.values)
    }
}

/// Centered moving average with edge truncation: windows are shortened at
/// the boundaries instead of padding. `window` must be odd and >= 1.
pub fn moving_average(values: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(Error::InvalidWindow(window));
    }
    let half = window / 2;
    let n = values.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(n);
        let sum: f64 = values[lo..hi].iter().sum();
        out.push(sum / (hi - lo) as f64);
    }
    Ok(out)
}

/// Fills the `smoothed` companion of a series with its moving average.
pub fn smooth(series: &CorrelationSeries, window: usize) -> Result<CorrelationSeries> {
    let smoothed = moving_average(&series.values, window)?;
    Ok(CorrelationSeries {
        kind: series.kind,
        values: series.values.clone(),
        smoothed: Some(smoothed),
        normalized: series.normalized,
    })
}

/// Rescales a series so the largest magnitude of its active data is exactly
/// one; the raw and smoothed arrays share the single scale factor.
pub fn normalize(series: &CorrelationSeries) -> Result<CorrelationSeries> {
    let max = series
        .active()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if max == 0.0 {
        return Err(Error::AllZeroSeries);
    }
    // Divide rather than multiply by the reciprocal so the peak lands on
    // exactly 1.0.
    Ok(CorrelationSeries {
        kind: series.kind,
        values: series.values.iter().map(|v| v / max).collect(),
        smoothed: series
            .smoothed
            .as_ref()
            .map(|s| s.iter().map(|v| v / max).collect()),
        normalized: true,
    })
}

/// Window rule used by the figure outputs and the efficiency smoothing: the
/// measurement lapse rounded up to odd, or sqrt(N)/2 (odd) for unitary runs.
pub fn default_window(side: usize, lapse: Option<usize>) -> usize {
    let base = lapse.unwrap_or(side / 2).max(1);
    base | 1
}
