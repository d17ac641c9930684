//! Closed-form integrals of `|x - y|^{γ-1}` over axis-aligned cells.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::quad::{gauss_legendre, GL10};

/// Exponent `γ` and ambient dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub gamma: f64,
    pub n: u32,
}

impl KernelParams {
    pub fn new(gamma: f64, n: u32) -> Result<Self> {
        check_gamma(gamma)?;
        if n == 0 {
            return param("dimension must be at least 1");
        }
        Ok(Self { gamma, n })
    }
}

/// `[a, b] × [c, d]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Cell {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        if !(x.0 <= x.1 && y.0 <= y.1) {
            return param(format!("cell {x:?} × {y:?} has reversed ranges"));
        }
        if ![x.0, x.1, y.0, y.1].iter().all(|v| v.is_finite()) {
            return param("cell ranges must be finite");
        }
        Ok(Self { x, y })
    }

    pub fn transposed(&self) -> Self {
        Self { x: self.y, y: self.x }
    }

    pub fn area(&self) -> f64 {
        (self.x.1 - self.x.0) * (self.y.1 - self.y.0)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return param(format!("gamma must be positive and finite, got {gamma}"));
    }
    Ok(())
}

/// `G(t) = |t|^{γ+1} / (γ(γ+1))`, so that `G'' = |t|^{γ-1}`.
pub fn second_antiderivative(t: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(g(t, gamma))
}

fn g(t: f64, gamma: f64) -> f64 {
    let a = t.abs();
    if a == 0.0 {
        return 0.0;
    }
    pow(a, gamma + 1.0) / (gamma * (gamma + 1.0))
}

fn pow(a: f64, e: f64) -> f64 {
    if e == e.trunc() && e.abs() < 64.0 {
        a.powi(e as i32)
    } else {
        a.powf(e)
    }
}

/// `ν_γ(cell) = ∬_cell |x - y|^{γ-1} dy dx`.
///
/// Four-term closed form; cells far from the diagonal relative to their
/// size go through the band integral with Gauss–Legendre pieces instead to
/// avoid cancellation.
pub fn nu_gamma_cell(cell: &Cell, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(nu_cell(cell, gamma))
}

pub(crate) fn nu_cell(cell: &Cell, gamma: f64) -> f64 {
    let (a, b) = cell.x;
    let (c, d) = cell.y;
    if a == b || c == d {
        return 0.0;
    }
    let gap = if b <= c { c - b } else if d <= a { a - d } else { 0.0 };
    let size = (b - a).max(d - c);
    if gap > 10.0 * size {
        return far_cell(cell, gamma);
    }
    let v = g(b - c, gamma) - g(a - c, gamma) - g(b - d, gamma) + g(a - d, gamma);
    v.max(0.0)
}

/// Tensor Gauss–Legendre on a cell well separated from the diagonal, where
/// the integrand is analytic. Node offsets are taken from the cell's own
/// corners so no difference of nearby large numbers enters the weights.
fn far_cell(cell: &Cell, gamma: f64) -> f64 {
    let (a, b) = cell.x;
    let (c, d) = cell.y;
    let (hx, hy) = (0.5 * (b - a), 0.5 * (d - c));
    let centre = 0.5 * (c + d) - 0.5 * (a + b);
    let mut total = 0.0;
    for &(sx, wx) in GL10.iter() {
        for &(sy, wy) in GL10.iter() {
            let t = (centre + hy * sy - hx * sx).abs();
            total += wx * wy * pow(t, gamma - 1.0);
        }
    }
    total * hx * hy
}

/// `∫_{s0}^{s1} s^{γ-1} (α + β s) ds` for `0 <= s0 < s1`.
fn linear_piece(alpha: f64, beta: f64, s0: f64, s1: f64, gamma: f64) -> f64 {
    if s1 <= s0 {
        return 0.0;
    }
    if s0 > 10.0 * (s1 - s0) {
        return gauss_legendre(|s| pow(s, gamma - 1.0) * (alpha + beta * s), s0, s1);
    }
    let (p0, p1) = (pow(s0, gamma), pow(s1, gamma));
    alpha * (p1 - p0) / gamma + beta * (p1 * s1 - p0 * s0) / (gamma + 1.0)
}

/// Overlap weight of the cell along `D = y - x`: piecewise linear on the
/// returned breakpoints with values `[0, h, h, 0]`.
fn trapezoid(cell: &Cell) -> ([f64; 4], f64) {
    let (a, b) = cell.x;
    let (c, d) = cell.y;
    let (m1, m2) = ((c - a).min(d - b), (c - a).max(d - b));
    ([c - b, m1, m2, d - a], (b - a).min(d - c))
}

/// `ν_γ({(x, y) ∈ cell : d1 < |x - y| < d2})`.
pub fn band(cell: &Cell, gamma: f64, d1: f64, d2: f64) -> f64 {
    let d1 = d1.max(0.0);
    if !(d2 > d1) || cell.area() == 0.0 {
        return 0.0;
    }
    let (br, h) = trapezoid(cell);
    let vals = [0.0, h, h, 0.0];
    let mut total = 0.0;
    for k in 0..3 {
        let (u0, u1) = (br[k], br[k + 1]);
        if u1 <= u0 {
            continue;
        }
        let slope = (vals[k + 1] - vals[k]) / (u1 - u0);
        // weight(D) = vals[k] + slope (D - u0)
        // D > 0 side: s = D
        let (s0, s1) = (u0.max(d1), u1.min(d2));
        if s0 < s1 {
            total += linear_piece(vals[k] - slope * u0, slope, s0, s1, gamma);
        }
        // D < 0 side: s = -D, weight = vals[k] + slope (-s - u0)
        let (s0, s1) = ((-u1).max(d1), (-u0).min(d2));
        if s0 < s1 {
            total += linear_piece(vals[k] - slope * u0, -slope, s0, s1, gamma);
        }
    }
    total.max(0.0)
}

/// Sum of [`band`] over disjoint `|x - y|` ranges.
pub fn band_union(cell: &Cell, gamma: f64, ranges: &[(f64, f64)]) -> f64 {
    ranges.iter().map(|&(d1, d2)| band(cell, gamma, d1, d2)).sum()
}
