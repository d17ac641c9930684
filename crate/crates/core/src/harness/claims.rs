//! The acceptance matrix as machine-checkable claims.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::ReportRow;
use crate::bvcalc::ops::l1_distance;
use crate::bvcalc::{variation_decomposition, Bv1d, JumpSet, OpenSet1D, PieceForm, SmoothPiece};
use crate::error::Result;
use crate::evaluator::{f_eval_with, geometric_grid, lambda_sweep, EvalOptions, Tolerance};
use crate::kernel::{nu_gamma_cell, Cell};
use crate::recovery::{build_recovery_family, staircase, RecoveryMode, RecoveryOptions, StaircaseParams};
use crate::slicer::{c_n, f_eval_2d, f_eval_2d_mc, Bv2d, Form2D, Region, SliceQuadrature};

/// Constants used for the targets; overriding them is the negative control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClaimContext {
    pub c1: f64,
    pub c2: f64,
    pub seed: u64,
}

impl Default for ClaimContext {
    fn default() -> Self {
        Self { c1: c_n(1).expect("c_1"), c2: c_n(2).expect("c_2"), seed: 20_240_607 }
    }
}

/// One acceptance criterion with its runtime budget.
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget_s: f64,
    pub run: fn(&ClaimContext) -> Result<Vec<ReportRow>>,
}

pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub rows: Vec<ReportRow>,
    pub runtime_s: f64,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "absolutely continuous limit", budget_s: 15.0, run: ac_limit },
        Criterion { id: 2, name: "jump limit", budget_s: 5.0, run: jump_limit },
        Criterion { id: 3, name: "mixed SBV limit", budget_s: 30.0, run: mixed_limit },
        Criterion { id: 4, name: "Cantor lower bound", budget_s: 60.0, run: cantor_lower_bound },
        Criterion { id: 5, name: "area-strict recovery of the Cantor function", budget_s: 300.0, run: cantor_recovery },
        Criterion { id: 6, name: "full staircase family of a ramp", budget_s: 120.0, run: ramp_staircase_family },
        Criterion { id: 7, name: "planar slicing of a disk", budget_s: 300.0, run: disk_slicing },
        Criterion { id: 8, name: "property suites", budget_s: 120.0, run: property_suites },
    ]
}

/// Runs one criterion and appends its runtime row.
pub fn run_criterion(c: &Criterion, ctx: &ClaimContext) -> Outcome {
    let t = Instant::now();
    let mut rows = match (c.run)(ctx) {
        Ok(rows) => rows,
        Err(e) => vec![ReportRow::within(&format!("c{}.error: {e}", c.id), c.name, f64::NAN, 0.0, 0.0)],
    };
    let runtime_s = t.elapsed().as_secs_f64();
    rows.push(ReportRow::at_most(&format!("c{}.runtime_s", c.id), "runtime budget", runtime_s, c.budget_s, 0.0));
    Outcome { id: c.id, name: c.name, rows, runtime_s }
}

/// Every criterion, in order.
pub fn claim_suite(ctx: &ClaimContext) -> Vec<Outcome> {
    criteria().iter().map(|c| run_criterion(c, ctx)).collect()
}

fn unit() -> OpenSet1D {
    OpenSet1D::unit()
}

fn relative(tol: f64) -> EvalOptions {
    EvalOptions { tol: Tolerance::Relative(tol), ..EvalOptions::default() }
}

/// Largest deviation of the tail from `target`, signed as the worst side.
fn worst(values: impl Iterator<Item = f64>, target: f64) -> f64 {
    values.fold(target, |w, v| if (v - target).abs() > (w - target).abs() { v } else { w })
}

fn ac_limit(ctx: &ClaimContext) -> Result<Vec<ReportRow>> {
    let u = Bv1d::affine(1.0, 0.0, unit())?;
    let grid = geometric_grid(1e2, 1e6, 9)?;
    let mut rows = Vec::new();
    for g in [0.5, 1.0, 2.0] {
        let t = Instant::now();
        let lambda: f64 = 1e4;
        let e = f_eval_with(&u, &unit(), g, lambda, &EvalOptions::default())?;
        let closed = ctx.c1 / g * (1.0 - g * lambda.powf(-1.0 / g) / (g + 1.0));
        rows.push(ReportRow::within(&format!("c1.value(gamma={g})"), "AC limit closed form", e.value, closed, e.error_bound + 0.005 * closed));
        let s = lambda_sweep(&u, &unit(), g, &grid, &EvalOptions::default())?;
        let lim = ctx.c1 / g;
        let w = worst(s.rows[s.rows.len() - s.tail.points..].iter().map(|r| r.estimate.value), lim);
        rows.push(ReportRow::within(&format!("c1.tail(gamma={g})"), "AC limit", w, lim, 0.01 * lim));
        rows.push(ReportRow::at_most(&format!("c1.runtime_s(gamma={g})"), "runtime budget", t.elapsed().as_secs_f64(), 5.0, 0.0));
    }
    Ok(rows)
}

fn jump_limit(ctx: &ClaimContext) -> Result<Vec<ReportRow>> {
    let u = Bv1d::step(0.5, 1.0, unit())?;
    let mut rows = Vec::new();
    for g in [0.5, 1.0, 2.0] {
        let e = f_eval_with(&u, &unit(), g, 1e4, &EvalOptions::default())?;
        let t = ctx.c1 / (g + 1.0);
        rows.push(ReportRow::within(&format!("c2.value(gamma={g})"), "jump limit", e.value, t, e.error_bound + 0.005 * t));
    }
    Ok(rows)
}

fn mixed_limit(ctx: &ClaimContext) -> Result<Vec<ReportRow>> {
    let u = Bv1d::affine(1.0, 0.0, unit())?.add(&Bv1d::step(0.5, 1.0, unit())?)?;
    let s = lambda_sweep(&u, &unit(), 1.0, &geometric_grid(1e2, 1e6, 9)?, &EvalOptions::default())?;
    let lim = ctx.c1 + ctx.c1 / 2.0;
    let w = worst(s.rows[s.rows.len() - s.tail.points..].iter().map(|r| r.estimate.value), lim);
    Ok(vec![ReportRow::within("c3.tail", "SBV limit", w, lim, 0.02 * lim)])
}

fn cantor_lower_bound(ctx: &ClaimContext) -> Result<Vec<ReportRow>> {
    let u = Bv1d::cantor(0.0, 1.0, 1.0, unit())?;
    let s = lambda_sweep(&u, &unit(), 1.0, &geometric_grid(1e4, 1e6, 5)?, &relative(1e-3))?;
    let min = s.rows.iter().map(|r| r.estimate.value).fold(f64::INFINITY, f64::min);
    let max = s.rows.iter().map(|r| r.estimate.value).fold(f64::NEG_INFINITY, f64::max);
    let eb = s.rows.iter().map(|r| r.estimate.error_bound).fold(0.0, f64::max);
    let bound = ctx.c1 / 2.0;
    Ok(vec![
        ReportRow::at_least("c4.tail_min", "sharp lower bound", min, bound, eb + 0.01 * bound),
        ReportRow::at_most("c4.tail_max", "uniform upper bound", max, 5.0, 0.0),
    ])
}

fn cantor_recovery(ctx: &ClaimContext) -> Result<Vec<ReportRow>> {
    let u = Bv1d::cantor(0.0, 1.0, 1.0, unit())?;
    let fam = build_recovery_family(&u, 1.0, &RecoveryOptions { k_max: 32, ..RecoveryOptions::default() })?;
    let limit = ctx.c1 / 2.0 * fam.decomposition.total();
    let excess = fam.stages.iter().map(|s| s.certificate - s.certificate_error - 1.0 / s.k as f64).fold(f64::NEG_INFINITY, f64::max);
    let gaps: Vec<f64> = fam.stages.iter().map(|s| s.l1_gap + s.area_gap).collect();
    let rise = gaps.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let uncertified = fam.stages.iter().filter(|s| !s.certified).count();
    Ok(vec![
        ReportRow::at_most("c5.certificate_minus_1/k", "area-strict upper bound", excess, limit, 0.0),
        ReportRow::at_most("c5.uncertified_stages", "area-strict upper bound", uncertified as f64, 0.0, 0.0),
        ReportRow::at_most("c5.gap_increase", "area-strict convergence", rise, 0.0, 0.0),
        ReportRow::at_most("c5.gap(k=32)", "area-strict convergence", *gaps.last().unwrap_or(&f64::NAN), 1e-2, 0.0),
    ])
}

fn ramp_staircase_family(ctx: &ClaimContext) -> Result<Vec<ReportRow>> {
    let u = Bv1d::affine(1.0, 0.0, unit())?;
    let opts = RecoveryOptions { k_max: 16, mode: RecoveryMode::Full, ..RecoveryOptions::default() };
    let fam = build_recovery_family(&u, 1.0, &opts)?;
    let jump_value = ctx.c1 / 2.0;
    let excess = fam.stages.iter().map(|s| s.certificate - s.certificate_error - 1.0 / s.k as f64).fold(f64::NEG_INFINITY, f64::max);
    let top = fam.stages.iter().map(|s| s.certificate + s.certificate_error).fold(f64::NEG_INFINITY, f64::max);
    let last = fam.stages.last().expect("k_max >= 1");
    Ok(vec![
        ReportRow::at_most("c6.certificate_minus_1/k", "jump-only recovery", excess, jump_value, 0.0),
        ReportRow::at_most("c6.max_certificate", "below the pointwise limit", top, ctx.c1, -1e-9),
        ReportRow::at_most("c6.l1_gap(k=16)", "L1 convergence", last.l1_gap, 1e-2, 0.0),
        ReportRow::within("c6.area_gap(k=16)", "no area-strict convergence", last.area_gap, 2.0 - 2f64.sqrt(), 1e-6),
    ])
}

fn disk_slicing(ctx: &ClaimContext) -> Result<Vec<ReportRow>> {
    let region = Region::disk([0.0, 0.0], 0.3)?;
    let u = Bv2d::new(Form2D::indicator(region, 1.0), Region::centered_square(1.0)?);
    let q = f_eval_2d(&u, 1.0, 1e3, &SliceQuadrature::default())?;
    let target = ctx.c2 / 2.0 * 2.0 * std::f64::consts::PI * 0.3;
    let (mc, se) = f_eval_2d_mc(&u, 1.0, 1e3, 10_000_000, ctx.seed)?;
    Ok(vec![
        ReportRow::within("c7.value", "slicing limit", q.value, target, 0.05 * target),
        ReportRow::within("c7.mc_agreement", "direct Monte Carlo", q.value, mc, 3.0 * se + q.error_bound),
    ])
}

/// Random SBV catalog function on `(0, 1)`: ramp plus steps plus one
/// polynomial or sine piece.
pub fn random_sbv(rng: &mut ChaCha8Rng) -> Result<Bv1d> {
    let dom = unit();
    let mut u = Bv1d::affine(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), dom.clone())?;
    for _ in 0..rng.random_range(0..3) {
        u = u.add(&Bv1d::step(rng.random_range(0.05..0.95), rng.random_range(-1.0..1.0), dom.clone())?)?;
    }
    let form = if rng.random_bool(0.5) {
        PieceForm::Polynomial { coefficients: vec![0.0, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)] }
    } else {
        PieceForm::ScaledSine { amplitude: rng.random_range(0.05..0.3), frequency: rng.random_range(1.0..8.0), phase: rng.random_range(0.0..3.0) }
    };
    let a = rng.random_range(0.0..0.5);
    let piece = SmoothPiece::new((a, a + 0.5), form)?;
    u.add(&Bv1d::new(0.0, vec![piece], JumpSet::empty(), vec![], dom)?)
}

fn property_suites(ctx: &ClaimContext) -> Result<Vec<ReportRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut rows = Vec::new();

    // kernel symmetry and additivity
    let mut defect: f64 = 0.0;
    for _ in 0..100 {
        let g = rng.random_range(0.2..3.0);
        let x0 = rng.random_range(-1.0..1.0);
        let y0 = rng.random_range(-1.0..1.0);
        let cell = Cell::new((x0, x0 + rng.random_range(0.01..1.0)), (y0, y0 + rng.random_range(0.01..1.0)))?;
        let v = nu_gamma_cell(&cell, g)?;
        defect = defect.max((v - nu_gamma_cell(&cell.transposed(), g)?).abs() / v.max(1.0));
        let m = rng.random_range(cell.x.0..cell.x.1);
        let parts = nu_gamma_cell(&Cell::new((cell.x.0, m), cell.y)?, g)? + nu_gamma_cell(&Cell::new((m, cell.x.1), cell.y)?, g)?;
        defect = defect.max((v - parts).abs() / v.max(1.0));
    }
    rows.push(ReportRow::at_most("c8.kernel_symmetry_additivity", "kernel identities", defect, 0.0, 1e-12));

    // scaling F(cu, λ) = c F(u, λ/c)
    let mut excess = f64::NEG_INFINITY;
    for _ in 0..10 {
        let u = random_sbv(&mut rng)?;
        let c = rng.random_range(0.2..5.0);
        let g = rng.random_range(0.5..2.0);
        let lambda = 10f64.powf(rng.random_range(1.0..3.0));
        let a = f_eval_with(&u.scale(c), &unit(), g, lambda, &EvalOptions::default())?;
        let b = f_eval_with(&u, &unit(), g, lambda / c, &EvalOptions::default())?;
        excess = excess.max((a.value - c * b.value).abs() - a.error_bound - c * b.error_bound);
    }
    rows.push(ReportRow::at_most("c8.scaling_identity", "homogeneity", excess, 0.0, 1e-12));

    // ν_γ(E_λ) non-increasing in λ
    let mut rise = f64::NEG_INFINITY;
    for _ in 0..3 {
        let u = random_sbv(&mut rng)?;
        let g = rng.random_range(0.5..2.0);
        let grid = geometric_grid(1.0, 1e4, 9)?;
        let nus: Vec<(f64, f64)> = grid
            .iter()
            .map(|&l| f_eval_with(&u, &unit(), g, l, &EvalOptions::default()).map(|e| (e.value / l, e.error_bound / l)))
            .collect::<Result<_>>()?;
        for w in nus.windows(2) {
            rise = rise.max(w[1].0 - w[0].0 - w[0].1 - w[1].1);
        }
    }
    rows.push(ReportRow::at_most("c8.lambda_monotonicity", "monotone superlevel sets", rise, 0.0, 1e-12));

    // staircase invariants
    let mut worst_l1 = f64::NEG_INFINITY;
    let mut worst_var = f64::NEG_INFINITY;
    for _ in 0..10 {
        let u = random_sbv(&mut rng)?;
        let (lo, hi) = u.range_open(0.0, 1.0);
        let m = lo.abs().max(hi.abs()) + 0.5;
        let k = rng.random_range(8..64);
        let eps = 2.0 * m / k as f64 * 1.001;
        let s = staircase(&u, &StaircaseParams { target_eps: Some(eps), ..StaircaseParams::new(m, k) })?;
        worst_l1 = worst_l1.max(l1_distance(&s, &u, &unit())? - 4.0 * eps);
        let dv = variation_decomposition(&s, &unit())?.total() - variation_decomposition(&u, &unit())?.total();
        worst_var = worst_var.max(dv);
    }
    rows.push(ReportRow::at_most("c8.staircase_l1", "staircase approximation", worst_l1, 0.0, 0.0));
    rows.push(ReportRow::at_most("c8.staircase_variation", "coarea", worst_var, 0.0, 1e-12));

    // monotone transitions
    let mut slack = f64::INFINITY;
    for _ in 0..5 {
        let g = rng.random_range(0.5..2.0);
        let l1 = rng.random_range(-1.0..0.0);
        let l2 = l1 + rng.random_range(0.1..1.0);
        let b1 = rng.random_range(-1.0..1.0);
        let rise_total = rng.random_range(0.1..2.0);
        let delta = rng.random_range(0.05..0.5);
        let dom = OpenSet1D::interval(l1 - delta, l2 + delta)?;
        let share = rng.random_range(0.0..1.0);
        let slope = rise_total * (1.0 - share) / (l2 - l1);
        let ramp = SmoothPiece::affine(l1, l2, slope, -slope * l1)?;
        let jumps = JumpSet::single(rng.random_range(l1..l2), rise_total * share);
        let u = Bv1d::new(b1, vec![ramp], jumps, vec![], dom.clone())?;
        let lambda = 2.0 * rise_total / delta.powf(1.0 + g);
        let e = f_eval_with(&u, &dom, g, lambda, &EvalOptions::default())?;
        slack = slack.min(e.value + e.error_bound - ctx.c1 * rise_total / (g + 1.0));
    }
    rows.push(ReportRow::at_least("c8.monotone_transition", "monotone transition bound", slack, 0.0, 0.0));
    Ok(rows)
}
