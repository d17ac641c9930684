//! Experiment configuration, read from TOML or JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bvcalc::Bv1d;
use crate::catalog::{Function2DSpec, FunctionSpec};
use crate::error::{Error, Result};
use crate::evaluator::{geometric_grid, EvalOptions, Tolerance};
use crate::recovery::RecoveryMode;
use crate::slicer::{Bv2d, SliceQuadrature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Sweep,
    Recover,
    Slice2d,
    Verify,
    Oracle,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Sweep => "sweep",
            Mode::Recover => "recover",
            Mode::Slice2d => "slice2d",
            Mode::Verify => "verify",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    #[default]
    Geometric,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: GridScale,
}

impl LambdaGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self.scale {
            GridScale::Geometric => geometric_grid(self.start, self.stop, self.points),
            GridScale::Linear => {
                let n = self.points - 1;
                Ok((0..=n).map(|i| self.start + (self.stop - self.start) * i as f64 / n as f64).collect())
            }
        }
    }
}

/// A catalog function given by name or inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionRef {
    Named { name: String },
    Inline(FunctionSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Function2DRef {
    Named { name: String },
    Inline(Function2DSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Emit a `runtime_ms` column; off keeps CSVs byte-identical across runs.
    pub timing: bool,
    pub gnuplot: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), timing: false, gnuplot: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RecoverConfig {
    pub k_max: usize,
    pub mode: RecoveryMode,
}

impl Default for RecoverConfig {
    fn default() -> Self {
        Self { k_max: 8, mode: RecoveryMode::Sbv }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    pub samples: u64,
    pub lambda: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { samples: 1_000_000, lambda: 100.0 }
    }
}

fn default_tol() -> f64 {
    1e-4
}

fn default_gamma() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub function: Option<FunctionRef>,
    #[serde(default)]
    pub function2d: Option<Function2DRef>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    pub lambda_grid: LambdaGrid,
    /// Relative tolerance of each evaluation.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub recover: RecoverConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub slice: SliceQuadrature,
}

impl ExperimentConfig {
    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Field-level diagnostics for everything the runner relies on.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let g = &self.lambda_grid;
        if !(g.start > 0.0 && g.start < g.stop && g.stop.is_finite()) {
            errs.push(format!("lambda_grid: need 0 < start < stop, got start={} stop={}", g.start, g.stop));
        }
        if g.points < 2 {
            errs.push(format!("lambda_grid.points: need at least 2, got {}", g.points));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            errs.push(format!("tol: must be positive, got {}", self.tol));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            errs.push(format!("gamma: must be positive, got {}", self.gamma));
        }
        match self.mode {
            Mode::Slice2d if self.function2d.is_none() => errs.push("function2d: required in slice2d mode".into()),
            Mode::Slice2d => {}
            _ if self.function.is_none() && !(self.mode == Mode::Oracle && self.function2d.is_some()) => {
                errs.push(format!("function: required in {} mode", self.mode.name()))
            }
            _ => {}
        }
        if self.recover.k_max == 0 {
            errs.push("recover.k_max: must be at least 1".into());
        }
        if self.oracle.samples == 0 || !(self.oracle.lambda > 0.0) {
            errs.push("oracle: samples and lambda must be positive".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs.join("; ")))
        }
    }

    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions { tol: Tolerance::Relative(self.tol), ..EvalOptions::default() }
    }

    pub fn build_function(&self) -> Result<Option<Bv1d>> {
        self.function
            .as_ref()
            .map(|f| match f {
                FunctionRef::Named { name } => FunctionSpec::named(name)?.build(),
                FunctionRef::Inline(spec) => spec.build(),
            })
            .transpose()
    }

    pub fn build_function2d(&self) -> Result<Option<Bv2d>> {
        self.function2d
            .as_ref()
            .map(|f| match f {
                Function2DRef::Named { name } => Function2DSpec::named(name)?.build(),
                Function2DRef::Inline(spec) => spec.build(),
            })
            .transpose()
    }
}
