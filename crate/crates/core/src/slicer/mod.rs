//! Planar functions reduced to one dimension by slicing.
//!
//! `F_{γ,λ}(u, Ω) = ½ ∫_{S¹} ∫_{⟨σ⟩⊥} F_{γ,λ}(u_{σ,z}, Ω_{σ,z}) dz dσ`, with
//! the 1D functional evaluated exactly on every slice. Slices are invariant
//! under `σ → -σ`, so angles run over `[0, π)` with the trapezoid rule.

pub mod bv2d;
pub mod geometry;

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bvcalc::{variation_decomposition, DerivDecomp, OpenSet1D};
use crate::error::{param, Result};
use crate::evaluator::mc::sharded;
use crate::evaluator::{f_eval_with, EvalOptions, FunctionalEstimate, Tolerance};
use crate::quad::simpson_aux;
pub use bv2d::{Bv2d, Form2D};
pub use geometry::{direction, Point, Region};

/// `C_n = ∫_{S^{n-1}} |x_1| = 2 ω_{n-1}`, with `ω_k` the volume of the unit
/// `k`-ball.
pub fn c_n(n: u32) -> Result<f64> {
    if n < 1 {
        return param("dimension must be at least 1");
    }
    Ok(2.0 * ball_volume(n - 1))
}

fn ball_volume(k: u32) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => ball_volume(k - 2) * 2.0 * PI / k as f64,
    }
}

/// Angular and offset quadrature parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SliceQuadrature {
    pub n_directions: usize,
    /// Absolute tolerance for the offset integrals and the slices combined.
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for SliceQuadrature {
    fn default() -> Self {
        Self { n_directions: 64, tol: 1e-3, max_depth: 14 }
    }
}

impl SliceQuadrature {
    fn validate(&self) -> Result<()> {
        if self.n_directions < 4 {
            return param("at least 4 directions are required");
        }
        if !(self.tol > 0.0) {
            return param("slice tolerance must be positive");
        }
        Ok(())
    }
}

/// Result of a 2D evaluation with quadrature counters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceReport {
    pub estimate: FunctionalEstimate,
    pub n_directions: usize,
    pub n_offsets: usize,
    /// Difference between the full and the half angular rule.
    pub angular_error: f64,
}

fn offset_breaks(u: &Bv2d, sigma: Point, normal: Point) -> Vec<f64> {
    let (lo, hi) = u.domain.projection(normal);
    let mut zs = vec![lo, hi];
    zs.extend(u.form.critical_offsets(sigma, normal, &u.domain));
    zs.extend(u.domain.critical_offsets(normal));
    zs.retain(|&z| z >= lo && z <= hi);
    zs.sort_by(f64::total_cmp);
    zs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    zs
}

/// Integrates `g(z)` (value and auxiliary channel) over all offsets for
/// direction `theta`.
fn offset_integral<G>(u: &Bv2d, theta: f64, tol: f64, max_depth: u32, g: G) -> (f64, f64, f64, usize)
where
    G: Fn(Point, f64) -> (f64, f64),
{
    let (sigma, normal) = direction(theta);
    let zs = offset_breaks(u, sigma, normal);
    let width = zs.last().unwrap() - zs[0];
    let mut acc = (0.0, 0.0, 0.0, 0);
    for w in zs.windows(2) {
        let t = tol * (w[1] - w[0]) / width;
        let r = simpson_aux(&|z| g(sigma, z), w[0], w[1], t, max_depth);
        acc = (acc.0 + r.0, acc.1 + r.1, acc.2 + r.2, acc.3 + r.3);
    }
    acc
}

/// `F_{γ,λ}(u, Ω)` for a planar catalog function.
pub fn f_eval_2d(u: &Bv2d, gamma: f64, lambda: f64, quad: &SliceQuadrature) -> Result<FunctionalEstimate> {
    Ok(f_eval_2d_report(u, gamma, lambda, quad)?.estimate)
}

/// [`f_eval_2d`] with quadrature counters.
pub fn f_eval_2d_report(u: &Bv2d, gamma: f64, lambda: f64, quad: &SliceQuadrature) -> Result<SliceReport> {
    quad.validate()?;
    if !(gamma > 0.0 && lambda > 0.0) {
        return param("gamma and lambda must be positive");
    }
    let n = quad.n_directions;
    let diam = u.domain.diameter();
    let slice_tol = 0.25 * quad.tol / (PI * diam);
    let opts = EvalOptions { tol: Tolerance::Absolute(slice_tol), max_depth: 40, max_cells: 400_000 };
    let per_angle: Vec<(f64, f64, f64, usize, FunctionalEstimate)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let theta = PI * i as f64 / n as f64;
            let stats = std::sync::Mutex::new(FunctionalEstimate { converged: true, ..Default::default() });
            let g = |sigma: Point, z: f64| match u.slice(sigma, z) {
                Ok((s, chord)) => match f_eval_with(&s, &chord, gamma, lambda, &opts) {
                    Ok(e) => {
                        let mut st = stats.lock().unwrap();
                        st.cells_inside += e.cells_inside;
                        st.cells_boundary += e.cells_boundary;
                        st.depth_max = st.depth_max.max(e.depth_max);
                        st.converged &= e.converged;
                        (e.value, e.error_bound)
                    }
                    Err(_) => (0.0, 0.0),
                },
                Err(_) => (0.0, 0.0),
            };
            let (v, aux, err, evals) = offset_integral(u, theta, 0.5 * quad.tol / PI, quad.max_depth, g);
            (v, aux, err, evals, stats.into_inner().unwrap())
        })
        .collect();
    let h = PI / n as f64;
    let value: f64 = h * per_angle.iter().map(|r| r.0).sum::<f64>();
    let half: f64 = 2.0 * h * per_angle.iter().step_by(2).map(|r| r.0).sum::<f64>();
    let angular_error = (value - half).abs();
    let quad_err: f64 = h * per_angle.iter().map(|r| r.1 + r.2).sum::<f64>();
    let mut est = FunctionalEstimate { value, error_bound: quad_err + angular_error, converged: true, ..Default::default() };
    for r in &per_angle {
        est.cells_inside += r.4.cells_inside;
        est.cells_boundary += r.4.cells_boundary;
        est.depth_max = est.depth_max.max(r.4.depth_max);
        est.converged &= r.4.converged;
    }
    est.converged &= est.error_bound <= quad.tol;
    Ok(SliceReport {
        estimate: est,
        n_directions: n,
        n_offsets: per_angle.iter().map(|r| r.3).sum(),
        angular_error,
    })
}

fn axis_aligned(v: Point) -> bool {
    v[0].abs() < 1e-15 || v[1].abs() < 1e-15
}

/// `|D^a u|(Ω)`, `|D^j u|(Ω)`, `|D^c u|(Ω)`: exact for indicators inside the
/// domain, radial jumps inside the domain and axis-aligned ridges on
/// rectangles, otherwise by slicing divided by `C_2`.
pub fn variation_decomposition_2d(u: &Bv2d) -> Result<DerivDecomp> {
    if let Some(d) = exact_decomposition(&u.form, &u.domain)? {
        return Ok(d);
    }
    sliced_decomposition(u, &SliceQuadrature::default())
}

fn exact_decomposition(form: &Form2D, dom: &Region) -> Result<Option<DerivDecomp>> {
    Ok(match form {
        Form2D::Indicator { region, height } if region.is_inside(dom) => {
            Some(DerivDecomp { jump: height.abs() * region.perimeter(), ..Default::default() })
        }
        Form2D::Radial { profile, center } => {
            let inside = profile
                .jumps()
                .locations()
                .iter()
                .all(|&r| r <= 0.0 || Region::Disk { center: *center, radius: r }.is_inside(dom));
            inside.then(|| DerivDecomp {
                jump: profile.jumps().iter().filter(|p| p.0 > 0.0).map(|(r, h)| h.abs() * 2.0 * PI * r).sum(),
                ..Default::default()
            })
        }
        Form2D::Ridge { profile, direction } if axis_aligned(*direction) => match dom.as_rect() {
            Some((x0, x1, y0, y1)) => {
                let (a, b) = dom.projection(*direction);
                let extent = if direction[0].abs() > 0.5 { y1 - y0 } else { x1 - x0 };
                let w = OpenSet1D::interval(a, b)?;
                let d = variation_decomposition(&profile.with_domain(w.clone()), &w)?;
                Some(DerivDecomp { abs: d.abs * extent, jump: d.jump * extent, cantor: d.cantor * extent })
            }
            None => None,
        },
        Form2D::CantorSheet { mass, axis } if axis_aligned(*axis) => match dom.as_rect() {
            Some((x0, x1, y0, y1)) => {
                let (a, b) = dom.projection(*axis);
                let extent = if axis[0].abs() > 0.5 { y1 - y0 } else { x1 - x0 };
                let frac = crate::bvcalc::cantor(b) - crate::bvcalc::cantor(a);
                Some(DerivDecomp { cantor: mass.abs() * frac * extent, ..Default::default() })
            }
            None => None,
        },
        _ => None,
    })
}

/// Variation masses by slicing, for any catalog form.
pub fn sliced_decomposition(u: &Bv2d, quad: &SliceQuadrature) -> Result<DerivDecomp> {
    quad.validate()?;
    let n = quad.n_directions;
    let c2 = c_n(2)?;
    let channel = |pick: fn(&DerivDecomp) -> f64| -> f64 {
        let parts: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let theta = PI * i as f64 / n as f64;
                let g = |sigma: Point, z: f64| match u.slice(sigma, z) {
                    Ok((s, chord)) => (variation_decomposition(&s, &chord).map(|d| pick(&d)).unwrap_or(0.0), 0.0),
                    Err(_) => (0.0, 0.0),
                };
                offset_integral(u, theta, quad.tol, quad.max_depth, g).0
            })
            .collect();
        2.0 * PI / n as f64 * parts.iter().sum::<f64>() / c2
    };
    Ok(DerivDecomp { abs: channel(|d| d.abs), jump: channel(|d| d.jump), cantor: channel(|d| d.cantor) })
}

/// Direct Monte Carlo estimate of `λ ∬_{Ω×Ω} |x - y|^{γ-2} 1_E`, with the
/// displacement drawn in polar form so the kernel singularity is sampled
/// exactly. Returns mean and standard error.
pub fn f_eval_2d_mc(u: &Bv2d, gamma: f64, lambda: f64, samples: u64, seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return param("sample count must be positive");
    }
    if !(gamma > 0.0 && lambda > 0.0) {
        return param("gamma and lambda must be positive");
    }
    let osc = u.form.oscillation(&u.domain);
    if osc == 0.0 {
        return Ok((0.0, 0.0));
    }
    let r_max = (osc / lambda).powf(1.0 / (1.0 + gamma)).min(u.domain.diameter());
    let (bx, by) = (u.domain.projection([1.0, 0.0]), u.domain.projection([0.0, 1.0]));
    let area = u.domain.area();
    let weight = lambda * area * 2.0 * PI * r_max.powf(gamma) / gamma;
    let (s1, s2) = sharded(samples, seed, |rng, n| {
        let mut hits = 0u64;
        for _ in 0..n {
            let x = loop {
                let p = [bx.0 + (bx.1 - bx.0) * rng.random::<f64>(), by.0 + (by.1 - by.0) * rng.random::<f64>()];
                if u.domain.contains(p) {
                    break p;
                }
            };
            let rho = r_max * rng.random::<f64>().powf(1.0 / gamma);
            let phi = 2.0 * PI * rng.random::<f64>();
            let y = [x[0] + rho * phi.cos(), x[1] + rho * phi.sin()];
            if rho > 0.0 && u.domain.contains(y) && (u.value(x) - u.value(y)).abs() > lambda * rho.powf(1.0 + gamma) {
                hits += 1;
            }
        }
        (hits as f64, 0.0)
    });
    let _ = s2;
    let n = samples as f64;
    let p = s1 / n;
    Ok((weight * p, weight * (p * (1.0 - p) / n).sqrt()))
}
