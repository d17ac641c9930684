//! Recovery families `u_k → u` with certified thresholds `λ_k`.

use serde::{Deserialize, Serialize};

use super::staircase::{staircase, StaircaseParams};
use crate::bvcalc::{area_strict_gap, variation_decomposition, Bv1d, DerivDecomp};
use crate::error::{param, Error, Result};
use crate::evaluator::{f_eval_with, EvalOptions};
use crate::slicer::c_n;

/// Which part of `u` is replaced by staircases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMode {
    /// Keep the AC and jump parts, staircase the Cantor part only.
    Sbv,
    /// Staircase the whole function; jump-only approximants.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryOptions {
    pub k_max: usize,
    pub level_samples: usize,
    pub lambda_cap: f64,
    pub mode: RecoveryMode,
    pub eval: EvalOptions,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self { k_max: 64, level_samples: 33, lambda_cap: 1e9, mode: RecoveryMode::Sbv, eval: EvalOptions::default() }
    }
}

/// One member `u_k` of the family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub k: usize,
    /// Number of staircase slots.
    pub slots: usize,
    pub lambda: f64,
    pub decomposition: DerivDecomp,
    /// `C/γ |D^a u_k| + C/(γ+1) |D^s u_k|`.
    pub target: f64,
    /// `F_{λ_k}(u_k)` and its error bound.
    pub certificate: f64,
    pub certificate_error: f64,
    /// Whether `certificate + error <= target + 1/k` was reached below the cap.
    pub certified: bool,
    pub l1_gap: f64,
    pub area_gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecoveryFamily {
    pub gamma: f64,
    pub mode: RecoveryMode,
    pub decomposition: DerivDecomp,
    /// `C/γ |D^a u| + C/(γ+1) |D^s u|`.
    pub limit: f64,
    pub stages: Vec<Stage>,
    #[serde(skip)]
    pub functions: Vec<Bv1d>,
}

impl RecoveryFamily {
    /// Stage active at `lambda`: the last `k` with `λ_k <= lambda`.
    pub fn lookup(&self, lambda: f64) -> Option<&Stage> {
        let i = self.stages.partition_point(|s| s.lambda <= lambda);
        i.checked_sub(1).map(|i| &self.stages[i])
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }
}

pub(crate) fn limit_value(d: &DerivDecomp, gamma: f64) -> f64 {
    let c = c_n(1).expect("c_1 is defined");
    c / gamma * d.abs + c / (gamma + 1.0) * d.singular()
}

/// Smallest power of two `>= x`, at least 8.
fn slots_for(x: f64) -> usize {
    let mut k = 8usize;
    while (k as f64) < x {
        k *= 2;
    }
    k
}

pub fn build_recovery_family(u: &Bv1d, gamma: f64, opts: &RecoveryOptions) -> Result<RecoveryFamily> {
    if !(gamma > 0.0) {
        return param(format!("gamma must be positive, got {gamma}"));
    }
    if opts.k_max == 0 || !(opts.lambda_cap > 1.0) {
        return param("recovery needs k_max >= 1 and a cap above 1");
    }
    let dom = u.domain().clone();
    if !dom.is_bounded() {
        return param("recovery families need a bounded domain");
    }
    let measure = dom.measure();
    let decomposition = variation_decomposition(u, &dom)?;
    let (keep, approx) = match opts.mode {
        RecoveryMode::Sbv => {
            let (sbv, c) = u.split_cantor();
            (Some(sbv), c)
        }
        RecoveryMode::Full => (None, u.clone()),
    };
    let (rlo, rhi) = approx.range_open(dom.inf(), dom.sup());
    let m = rlo.abs().max(rhi.abs()) + 1.0;
    let has_part = match opts.mode {
        RecoveryMode::Sbv => u.has_cantor(),
        RecoveryMode::Full => true,
    };

    let mut stages: Vec<Stage> = Vec::with_capacity(opts.k_max);
    let mut functions = Vec::with_capacity(opts.k_max);
    for k in 1..=opts.k_max {
        let slots = slots_for(8.0 * m * k as f64 * measure);
        let uk = if has_part {
            let params = StaircaseParams { level_samples: opts.level_samples, ..StaircaseParams::new(m, slots) };
            let stair = staircase(&approx, &params)?;
            match &keep {
                Some(sbv) => sbv.add(&stair)?,
                None => stair,
            }
        } else {
            u.clone()
        };
        let d = variation_decomposition(&uk, &dom)?;
        let target = limit_value(&d, gamma);
        let goal = target + 1.0 / k as f64;
        let mut lambda = (k as f64 + 1.0).max(stages.last().map_or(0.0, |s| s.lambda * (1.0 + 1e-9)));
        let (est, certified) = loop {
            let est = f_eval_with(&uk, &dom, gamma, lambda, &opts.eval)?;
            if est.value + est.error_bound <= goal {
                break (est, true);
            }
            if 2.0 * lambda > opts.lambda_cap {
                break (est, false);
            }
            lambda *= 2.0;
        };
        let (l1_gap, area_gap) = area_strict_gap(&uk, u, &dom)?;
        stages.push(Stage {
            k,
            slots,
            lambda,
            decomposition: d,
            target,
            certificate: est.value,
            certificate_error: est.error_bound,
            certified,
            l1_gap,
            area_gap,
        });
        functions.push(uk);
    }
    Ok(RecoveryFamily { gamma, mode: opts.mode, decomposition, limit: limit_value(&decomposition, gamma), stages, functions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvcalc::OpenSet1D;

    #[test]
    fn cantor_family_is_sbv_and_certified() {
        let u = Bv1d::cantor(0.0, 1.0, 1.0, OpenSet1D::unit()).unwrap();
        let fam = build_recovery_family(&u, 1.0, &RecoveryOptions { k_max: 6, ..Default::default() }).unwrap();
        assert!((fam.limit - 1.0).abs() < 1e-12);
        for (s, w) in fam.stages.iter().zip(fam.stages.iter().skip(1)) {
            assert!(w.lambda > s.lambda && w.l1_gap <= s.l1_gap);
        }
        for s in &fam.stages {
            assert!(s.certified && s.decomposition.cantor == 0.0);
            assert!(s.certificate <= s.target + 1.0 / s.k as f64);
        }
        assert!(fam.functions.iter().all(|f| !f.has_cantor()));
        let back = RecoveryFamily::from_json(&fam.to_json().unwrap()).unwrap();
        assert_eq!(back.stages, fam.stages);
        assert_eq!(fam.lookup(0.5), None);
        assert_eq!(fam.lookup(fam.stages[2].lambda).unwrap().k, 3);
    }
}
