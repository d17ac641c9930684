//! Verdict rows, CSV/JSON artifacts and gnuplot scripts.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::TailStats;
use crate::recovery::Stage;
use crate::slicer::SliceReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|computed - target| <= tolerance`
    Within,
    /// `computed >= target - tolerance`
    AtLeast,
    /// `computed <= target + tolerance`
    AtMost,
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub claim: String,
    /// Name of the mathematical statement the claim exercises.
    pub anchor: String,
    pub relation: Relation,
    pub computed: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(claim: &str, anchor: &str, relation: Relation, computed: f64, target: f64, tolerance: f64) -> Self {
        let pass = match relation {
            Relation::Within => (computed - target).abs() <= tolerance,
            Relation::AtLeast => computed >= target - tolerance,
            Relation::AtMost => computed <= target + tolerance,
        };
        Self { claim: claim.into(), anchor: anchor.into(), relation, computed, target, tolerance, pass: pass && computed.is_finite() }
    }

    pub fn within(claim: &str, anchor: &str, computed: f64, target: f64, tolerance: f64) -> Self {
        Self::new(claim, anchor, Relation::Within, computed, target, tolerance)
    }

    pub fn at_least(claim: &str, anchor: &str, computed: f64, target: f64, tolerance: f64) -> Self {
        Self::new(claim, anchor, Relation::AtLeast, computed, target, tolerance)
    }

    pub fn at_most(claim: &str, anchor: &str, computed: f64, target: f64, tolerance: f64) -> Self {
        Self::new(claim, anchor, Relation::AtMost, computed, target, tolerance)
    }
}

impl fmt::Display for ReportRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Within => "≈",
            Relation::AtLeast => "≥",
            Relation::AtMost => "≤",
        };
        write!(
            f,
            "{} {}: {:.6} {op} {:.6} (tol {:.3e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.claim,
            self.computed,
            self.target,
            self.tolerance
        )
    }
}

/// JSON summary written next to every CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub config: serde_json::Value,
    pub rows: serde_json::Value,
    pub tail: Option<TailStats>,
    pub certificates: Vec<Stage>,
    pub claims: Vec<ReportRow>,
}

fn ser<E: fmt::Display>(e: E) -> Error {
    Error::Serialization(e.to_string())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value).map_err(ser)?;
    writeln!(f)?;
    Ok(())
}

pub fn write_claims_csv<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["claim", "anchor", "relation", "computed", "target", "tolerance", "pass"]).map_err(ser)?;
    for r in rows {
        let rel = serde_json::to_value(r.relation).map_err(ser)?;
        w.write_record([
            r.claim.clone(),
            r.anchor.clone(),
            rel.as_str().unwrap_or_default().to_string(),
            format!("{:.12e}", r.computed),
            format!("{:.12e}", r.target),
            format!("{:.6e}", r.tolerance),
            r.pass.to_string(),
        ])
        .map_err(ser)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `k,slots,lambda,certificate,error_bound,target,l1_gap,area_gap,certified`.
pub fn write_recovery_csv<W: Write>(out: W, stages: &[Stage]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "slots", "lambda", "certificate", "error_bound", "target", "l1_gap", "area_gap", "certified"])
        .map_err(ser)?;
    for s in stages {
        w.write_record([
            s.k.to_string(),
            s.slots.to_string(),
            format!("{:e}", s.lambda),
            format!("{:.12e}", s.certificate),
            format!("{:.6e}", s.certificate_error),
            format!("{:.12e}", s.target),
            format!("{:.6e}", s.l1_gap),
            format!("{:.6e}", s.area_gap),
            s.certified.to_string(),
        ])
        .map_err(ser)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `lambda,value,error_bound,angular_error,n_directions,n_offsets`.
pub fn write_slice_csv<W: Write>(out: W, rows: &[(f64, SliceReport)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda", "value", "error_bound", "angular_error", "n_directions", "n_offsets"]).map_err(ser)?;
    for (lambda, r) in rows {
        w.write_record([
            format!("{lambda:e}"),
            format!("{:.12e}", r.estimate.value),
            format!("{:.6e}", r.estimate.error_bound),
            format!("{:.6e}", r.angular_error),
            r.n_directions.to_string(),
            r.n_offsets.to_string(),
        ])
        .map_err(ser)?;
    }
    w.flush()?;
    Ok(())
}

/// Gnuplot script plotting column `y` against column `x` of `csv`, with an
/// optional horizontal reference line.
pub fn gnuplot_script(csv: &str, x: usize, y: usize, xlabel: &str, ylabel: &str, logx: bool, reference: Option<f64>) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    if logx {
        s.push_str("set logscale x\n");
    }
    s.push_str(&format!("set xlabel '{xlabel}'\nset ylabel '{ylabel}'\n"));
    let mut plot = format!("plot '{csv}' using {x}:{y} with linespoints");
    if let Some(r) = reference {
        plot.push_str(&format!(", {r} title 'limit' with lines dashtype 2"));
    }
    s.push_str(&plot);
    s.push('\n');
    s
}
