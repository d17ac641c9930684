//! Geometric λ-sweeps with tail statistics.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{f_eval_with, EvalOptions, FunctionalEstimate};
use crate::bvcalc::{Bv1d, OpenSet1D};
use crate::error::{param, Error, Result};

/// One grid point of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub estimate: FunctionalEstimate,
    pub runtime_ms: f64,
}

/// Summary of the top quarter of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailStats {
    pub min: f64,
    pub max: f64,
    pub last: f64,
    /// Largest error bound among the tail rows.
    pub error_bound: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub tail: TailStats,
}

/// `points` geometrically spaced values from `start` to `stop`.
pub fn geometric_grid(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && start < stop && stop.is_finite()) || points < 2 {
        return param(format!("invalid λ-grid: start={start}, stop={stop}, points={points}"));
    }
    let r = (stop / start).ln() / (points - 1) as f64;
    let mut g: Vec<f64> = (0..points).map(|i| start * (r * i as f64).exp()).collect();
    g[points - 1] = stop;
    Ok(g)
}

/// Statistics over the top 25% of rows (at least one).
pub fn tail_stats(rows: &[SweepRow]) -> TailStats {
    let n = rows.len();
    let k = n.div_ceil(4).max(1).min(n);
    let tail = &rows[n - k..];
    TailStats {
        min: tail.iter().map(|r| r.estimate.value).fold(f64::INFINITY, f64::min),
        max: tail.iter().map(|r| r.estimate.value).fold(f64::NEG_INFINITY, f64::max),
        last: tail.last().map_or(f64::NAN, |r| r.estimate.value),
        error_bound: tail.iter().map(|r| r.estimate.error_bound).fold(0.0, f64::max),
        points: k,
    }
}

/// Evaluates `F_{γ,λ}(u, W)` on every grid point; rows in grid order.
pub fn lambda_sweep(u: &Bv1d, w: &OpenSet1D, gamma: f64, grid: &[f64], opts: &EvalOptions) -> Result<SweepResult> {
    if grid.len() < 2 || grid.windows(2).any(|p| !(p[0] < p[1])) {
        return param("λ-grid must be increasing with at least two points");
    }
    let rows: Result<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&lambda| {
            let t0 = Instant::now();
            let estimate = f_eval_with(u, w, gamma, lambda, opts)?;
            Ok(SweepRow { lambda, estimate, runtime_ms: t0.elapsed().as_secs_f64() * 1e3 })
        })
        .collect();
    let rows = rows?;
    let tail = tail_stats(&rows);
    Ok(SweepResult { rows, tail })
}

/// CSV with columns `lambda,value,error_bound,cells_inside,cells_boundary,runtime_ms`.
/// With `timing = false` the runtime column is written as 0 so output is
/// byte-identical across runs.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow], timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    w.write_record(["lambda", "value", "error_bound", "cells_inside", "cells_boundary", "runtime_ms"]).map_err(ser)?;
    for r in rows {
        let rt = if timing { r.runtime_ms } else { 0.0 };
        w.write_record([
            format!("{:e}", r.lambda),
            format!("{:.12e}", r.estimate.value),
            format!("{:.6e}", r.estimate.error_bound),
            r.estimate.cells_inside.to_string(),
            r.estimate.cells_boundary.to_string(),
            format!("{rt:.3}"),
        ])
        .map_err(ser)?;
    }
    w.flush()?;
    Ok(())
}
