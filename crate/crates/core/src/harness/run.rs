//! Executes one experiment configuration and writes its artifacts.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use super::config::{ExperimentConfig, Mode};
use super::report::{gnuplot_script, write_claims_csv, write_json, write_recovery_csv, write_slice_csv, ReportRow, Summary};
use crate::bvcalc::{variation_decomposition, Bv1d};
use crate::error::{Error, Result};
use crate::evaluator::{f_eval_mc, f_eval_with, lambda_sweep, tail_stats, write_sweep_csv, SweepRow};
use crate::recovery::family::limit_value;
use crate::recovery::{build_recovery_family, RecoveryOptions};
use crate::slicer::{c_n, f_eval_2d_mc, f_eval_2d_report};

pub struct RunOutcome {
    /// 0 when every claim passed and every stage was certified.
    pub exit_code: i32,
    pub rows: Vec<ReportRow>,
    pub artifacts: Vec<PathBuf>,
}

fn missing(what: &str) -> Error {
    Error::Config(format!("{what}: required in this mode"))
}

struct Artifacts {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Artifacts {
    fn file(&mut self, name: &str) -> Result<BufWriter<File>> {
        let p = self.dir.join(name);
        let f = File::create(&p)?;
        self.written.push(p);
        Ok(BufWriter::new(f))
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let p = self.dir.join(name);
        std::fs::write(&p, body)?;
        self.written.push(p);
        Ok(())
    }

    fn summary(&mut self, s: &Summary) -> Result<()> {
        let p = self.dir.join("summary.json");
        write_json(&p, s)?;
        self.written.push(p);
        Ok(())
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.output.dir)?;
    let mut art = Artifacts { dir: cfg.output.dir.clone(), written: vec![] };
    let mut summary = Summary { config: to_value(cfg)?, rows: serde_json::Value::Null, tail: None, certificates: vec![], claims: vec![] };
    let grid = cfg.lambda_grid.values()?;
    let opts = cfg.eval_options();
    let gamma = cfg.gamma;
    let mut uncertified = false;

    match cfg.mode {
        Mode::Sweep => {
            let u = cfg.build_function()?.ok_or_else(|| missing("function"))?;
            let s = lambda_sweep(&u, u.domain(), gamma, &grid, &opts)?;
            let rows = strip_timing(s.rows, cfg.output.timing);
            write_sweep_csv(art.file("sweep.csv")?, &rows, cfg.output.timing)?;
            if cfg.output.gnuplot {
                let lim = limit_value(&variation_decomposition(&u, u.domain())?, gamma);
                art.text("sweep.gp", &gnuplot_script("sweep.csv", 1, 2, "lambda", "F", true, Some(lim)))?;
            }
            summary.rows = to_value(&rows)?;
            summary.tail = Some(s.tail);
        }
        Mode::Recover => {
            let u = cfg.build_function()?.ok_or_else(|| missing("function"))?;
            let ro = RecoveryOptions { k_max: cfg.recover.k_max, mode: cfg.recover.mode, eval: opts, ..RecoveryOptions::default() };
            let fam = build_recovery_family(&u, gamma, &ro)?;
            write_recovery_csv(art.file("recovery.csv")?, &fam.stages)?;
            if cfg.output.gnuplot {
                art.text("recovery.gp", &gnuplot_script("recovery.csv", 1, 4, "k", "certificate", false, Some(fam.limit)))?;
            }
            uncertified = fam.stages.iter().any(|s| !s.certified);
            summary.rows = to_value(&fam.stages)?;
            summary.certificates = fam.stages;
        }
        Mode::Slice2d => {
            let u = cfg.build_function2d()?.ok_or_else(|| missing("function2d"))?;
            let reports = grid
                .iter()
                .map(|&l| f_eval_2d_report(&u, gamma, l, &cfg.slice).map(|r| (l, r)))
                .collect::<Result<Vec<_>>>()?;
            write_slice_csv(art.file("slice2d.csv")?, &reports)?;
            if cfg.output.gnuplot {
                art.text("slice2d.gp", &gnuplot_script("slice2d.csv", 1, 2, "lambda", "F", true, None))?;
            }
            let rows: Vec<SweepRow> =
                reports.iter().map(|(l, r)| SweepRow { lambda: *l, estimate: r.estimate, runtime_ms: 0.0 }).collect();
            summary.tail = Some(tail_stats(&rows));
            summary.rows = to_value(&reports.iter().map(|(l, r)| (l, r)).collect::<Vec<_>>())?;
        }
        Mode::Verify => {
            let u = cfg.build_function()?.ok_or_else(|| missing("function"))?;
            let (rows, certs) = verify(cfg, &u, &grid)?;
            summary.claims = rows;
            summary.certificates = certs;
        }
        Mode::Oracle => {
            summary.claims = oracle(cfg)?;
        }
    }
    if !summary.claims.is_empty() {
        write_claims_csv(art.file("claims.csv")?, &summary.claims)?;
    }
    art.summary(&summary)?;
    let failed = summary.claims.iter().any(|r| !r.pass);
    Ok(RunOutcome { exit_code: i32::from(failed || uncertified), rows: summary.claims, artifacts: art.written })
}

fn strip_timing(rows: Vec<SweepRow>, timing: bool) -> Vec<SweepRow> {
    rows.into_iter().map(|r| SweepRow { runtime_ms: if timing { r.runtime_ms } else { 0.0 }, ..r }).collect()
}

fn verify(cfg: &ExperimentConfig, u: &Bv1d, grid: &[f64]) -> Result<(Vec<ReportRow>, Vec<crate::recovery::Stage>)> {
    let gamma = cfg.gamma;
    let c1 = c_n(1)?;
    let d = variation_decomposition(u, u.domain())?;
    let s = lambda_sweep(u, u.domain(), gamma, grid, &cfg.eval_options())?;
    let tail = &s.rows[s.rows.len() - s.tail.points..];
    let lower = c1 / (gamma + 1.0) * d.total();
    let mut rows =
        vec![ReportRow::at_least("lower-bound", "sharp lower bound", s.tail.min, lower, s.tail.error_bound + 0.01 * lower)];
    let limit = limit_value(&d, gamma);
    if !u.has_cantor() {
        let worst = tail.iter().map(|r| r.estimate.value).fold(limit, |w, v| if (v - limit).abs() > (w - limit).abs() { v } else { w });
        rows.push(ReportRow::within("sbv-limit", "SBV limit", worst, limit, 0.02 * limit.max(1e-12)));
    }
    let ro = RecoveryOptions { k_max: cfg.recover.k_max, mode: cfg.recover.mode, eval: cfg.eval_options(), ..RecoveryOptions::default() };
    let fam = build_recovery_family(u, gamma, &ro)?;
    let excess = fam.stages.iter().map(|s| s.certificate - s.certificate_error - 1.0 / s.k as f64).fold(f64::NEG_INFINITY, f64::max);
    rows.push(ReportRow::at_most("recovery-limsup", "area-strict upper bound", excess, fam.limit, 0.0));
    Ok((rows, fam.stages))
}

fn oracle(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let (lambda, n, seed, gamma) = (cfg.oracle.lambda, cfg.oracle.samples, cfg.seed, cfg.gamma);
    let mut rows = Vec::new();
    if let Some(u) = cfg.build_function()? {
        let q = f_eval_with(&u, u.domain(), gamma, lambda, &cfg.eval_options())?;
        let (mc, se) = f_eval_mc(&u, u.domain(), gamma, lambda, n, seed)?;
        rows.push(ReportRow::within("oracle-1d", "quadtree vs Monte Carlo", q.value, mc, 3.0 * se + q.error_bound));
    }
    if let Some(u) = cfg.build_function2d()? {
        let q = f_eval_2d_report(&u, gamma, lambda, &cfg.slice)?;
        let (mc, se) = f_eval_2d_mc(&u, gamma, lambda, n, seed)?;
        rows.push(ReportRow::within("oracle-2d", "slicing vs Monte Carlo", q.estimate.value, mc, 3.0 * se + q.estimate.error_bound));
    }
    Ok(rows)
}
