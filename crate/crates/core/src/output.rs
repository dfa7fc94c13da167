//! CSV and JSON emission for traces, Monte Carlo results and sweeps.
//!
//! Output is deterministic for a given (config, seed): floats use Rust's
//! shortest round-trip formatting, headers are stable, and every file
//! starts with a schema marker. CSV cells left blank mean "not defined at
//! this row" (e.g. P0 off measurement steps).

use std::io::Write;

use serde_json::json;

use crate::analysis::SweepResult;
use crate::correlations::{moving_average, CorrelationKind};
use crate::engine::{MonteCarloResult, RunTrace};
use crate::error::{Error, Result};

pub const TRACE_SCHEMA: &str = "qwalk-trace-v1";
pub const MC_SCHEMA: &str = "qwalk-mc-v1";
pub const SWEEP_SCHEMA: &str = "qwalk-sweep-v1";

/// Order-fit exponents emitted as sweep columns.
pub const SWEEP_ALPHAS: [f64; 4] = [0.6, 0.9, 1.25, 1.5];

/// Post-processing applied to correlation columns on output.
#[derive(Debug, Clone, Copy, Default)]
pub struct TraceColumns {
    /// Odd window; adds one `<kind>_smoothed` column per recorded kind.
    pub smoothing_window: Option<usize>,
    /// Rescale each smoothed column to unit maximum magnitude.
    pub normalize: bool,
}

fn fmt(value: f64) -> String {
    format!("{value}")
}

/// Smoothed (optionally unit-normalized) companion columns.
fn smoothed_columns(
    trace: &RunTrace,
    columns: &TraceColumns,
) -> Result<Vec<(CorrelationKind, Vec<f64>)>> {
    let Some(window) = columns.smoothing_window else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for &kind in trace.kinds() {
        let values = trace
            .correlation_values(kind)
            .expect("kind is recorded in this trace");
        let mut smoothed = moving_average(&values, window)?;
        if columns.normalize {
            let max = smoothed.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if max > 0.0 {
                for v in &mut smoothed {
                    *v /= max;
                }
            }
        }
        out.push((kind, smoothed));
    }
    Ok(out)
}

pub fn write_trace_csv(
    trace: &RunTrace,
    columns: &TraceColumns,
    writer: &mut (impl Write + ?Sized),
) -> Result<()> {
    let smoothed = smoothed_columns(trace, columns)?;
    let mut header = String::from("k,P_t,P0,survival,P_c");
    for kind in trace.kinds() {
        header.push(',');
        header.push_str(kind.label());
    }
    for (kind, _) in &smoothed {
        header.push(',');
        header.push_str(kind.label());
        header.push_str("_smoothed");
    }
    writeln!(writer, "# schema: {TRACE_SCHEMA}").map_err(io_error)?;
    writeln!(writer, "{header}").map_err(io_error)?;
    for (idx, row) in trace.rows().iter().enumerate() {
        let mut line = format!(
            "{},{},{},{},{}",
            row.k,
            fmt(row.p_t),
            row.p0.map_or(String::new(), fmt),
            fmt(row.survival),
            fmt(row.p_c),
        );
        for value in &row.correlations {
            line.push(',');
            line.push_str(&fmt(*value));
        }
        for (_, series) in &smoothed {
            line.push(',');
            line.push_str(&fmt(series[idx]));
        }
        writeln!(writer, "{line}").map_err(io_error)?;
    }
    Ok(())
}

pub fn write_trace_json(
    trace: &RunTrace,
    columns: &TraceColumns,
    writer: &mut (impl Write + ?Sized),
) -> Result<()> {
    let smoothed = smoothed_columns(trace, columns)?;
    let rows: Vec<serde_json::Value> = trace
        .rows()
        .iter()
        .enumerate()
        .map(|(idx, row)| {
            let mut object = json!({
                "k": row.k,
                "P_t": row.p_t,
                "P0": row.p0,
                "survival": row.survival,
                "P_c": row.p_c,
            });
            let map = object.as_object_mut().unwrap();
            for (kind, value) in trace.kinds().iter().zip(&row.correlations) {
                map.insert(kind.label().into(), json!(value));
            }
            for (kind, series) in &smoothed {
                map.insert(format!("{}_smoothed", kind.label()), json!(series[idx]));
            }
            object
        })
        .collect();
    let document = json!({
        "schema": TRACE_SCHEMA,
        "rows": rows,
    });
    serde_json::to_writer_pretty(&mut *writer, &document)
        .map_err(|err| Error::Io(format!("JSON write failed: {err}")))?;
    writeln!(writer).map_err(io_error)
}

pub fn write_mc_csv(result: &MonteCarloResult, seed: u64, writer: &mut (impl Write + ?Sized)) -> Result<()> {
    writeln!(writer, "# schema: {MC_SCHEMA}").map_err(io_error)?;
    writeln!(
        writer,
        "trials,seed,successes_control,successes_position,frequency,std_error"
    )
    .map_err(io_error)?;
    writeln!(
        writer,
        "{},{},{},{},{},{}",
        result.trials,
        seed,
        result.successes_control,
        result.successes_position,
        fmt(result.frequency),
        fmt(result.std_error),
    )
    .map_err(io_error)
}

pub fn write_mc_json(result: &MonteCarloResult, seed: u64, writer: &mut (impl Write + ?Sized)) -> Result<()> {
    let document = json!({
        "schema": MC_SCHEMA,
        "trials": result.trials,
        "seed": seed,
        "successes_control": result.successes_control,
        "successes_position": result.successes_position,
        "frequency": result.frequency,
        "std_error": result.std_error,
    });
    serde_json::to_writer_pretty(&mut *writer, &document)
        .map_err(|err| Error::Io(format!("JSON write failed: {err}")))?;
    writeln!(writer).map_err(io_error)
}

pub fn write_sweep_csv(sweep: &SweepResult, writer: &mut (impl Write + ?Sized)) -> Result<()> {
    writeln!(writer, "# schema: {SWEEP_SCHEMA}").map_err(io_error)?;
    let mut header =
        String::from("N,n_qubits,lapse,m,k_max,P_c_final,TS,optimal_k,TS_at_optimal");
    for alpha in SWEEP_ALPHAS {
        header.push_str(&format!(",f_{alpha}"));
    }
    writeln!(writer, "{header}").map_err(io_error)?;
    for row in &sweep.rows {
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{}",
            row.n_positions,
            row.n_qubits,
            row.lapse
                .map_or_else(|| "unitary".to_string(), |l| l.to_string()),
            row.m.map_or(String::new(), fmt),
            row.k_max,
            fmt(row.p_c_final),
            fmt(row.total_steps),
            row.optimal_k,
            fmt(row.total_steps_at_optimal),
        );
        for alpha in SWEEP_ALPHAS {
            line.push(',');
            line.push_str(&fmt(row.order_fit_value(alpha)));
        }
        writeln!(writer, "{line}").map_err(io_error)?;
    }
    Ok(())
}

pub fn write_sweep_json(sweep: &SweepResult, writer: &mut (impl Write + ?Sized)) -> Result<()> {
    let rows: Vec<serde_json::Value> = sweep
        .rows
        .iter()
        .map(|row| {
            let mut object = json!({
                "N": row.n_positions,
                "n_qubits": row.n_qubits,
                "lapse": row.lapse,
                "rule": row.rule.label(),
                "m": row.m,
                "k_max": row.k_max,
                "P_c_final": row.p_c_final,
                "TS": row.total_steps,
                "optimal_k": row.optimal_k,
                "TS_at_optimal": row.total_steps_at_optimal,
            });
            let map = object.as_object_mut().unwrap();
            for alpha in SWEEP_ALPHAS {
                map.insert(format!("f_{alpha}"), json!(row.order_fit_value(alpha)));
            }
            object
        })
        .collect();
    let document = json!({
        "schema": SWEEP_SCHEMA,
        "rows": rows,
    });
    serde_json::to_writer_pretty(&mut *writer, &document)
        .map_err(|err| Error::Io(format!("JSON write failed: {err}")))?;
    writeln!(writer).map_err(io_error)
}

fn io_error(err: std::io::Error) -> Error {
    Error::Io(format!("output write failed: {err}"))
}
