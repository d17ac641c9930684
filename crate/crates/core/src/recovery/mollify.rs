//! Convolution with a standard bump, resampled as a monotone cubic spline.

use std::sync::OnceLock;

use crate::bvcalc::smooth::pchip_segments;
use crate::bvcalc::{Bv1d, CantorComponent, JumpSet, OpenSet1D};
use crate::error::{param, Result};
use crate::quad::gauss_legendre;

/// Spline nodes per `δ`-window of width `2δ`.
pub const SAMPLES_PER_WINDOW: usize = 2048;

const TABLE: usize = 8192;

fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// Normalised bump and its cumulative distribution on `[-1, 1]`, tabulated.
struct BumpTable {
    norm: f64,
    cdf: Vec<f64>,
}

fn table() -> &'static BumpTable {
    static T: OnceLock<BumpTable> = OnceLock::new();
    T.get_or_init(|| {
        let h = 2.0 / TABLE as f64;
        let mut cdf = vec![0.0; TABLE + 1];
        for i in 0..TABLE {
            let a = -1.0 + i as f64 * h;
            cdf[i + 1] = cdf[i] + gauss_legendre(bump, a, a + h);
        }
        let norm = cdf[TABLE];
        cdf.iter_mut().for_each(|c| *c /= norm);
        BumpTable { norm, cdf }
    })
}

/// Normalised density `φ(s)` on `[-1, 1]`.
pub fn bump_density(s: f64) -> f64 {
    bump(s) / table().norm
}

/// `Φ(s) = ∫_{-1}^s φ`, cubic Hermite on the table.
pub fn bump_cdf(s: f64) -> f64 {
    if s <= -1.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let t = table();
    let h = 2.0 / TABLE as f64;
    let pos = (s + 1.0) / h;
    let i = (pos.floor() as usize).min(TABLE - 1);
    let r = pos - i as f64;
    let (x0, x1) = (-1.0 + i as f64 * h, -1.0 + (i + 1) as f64 * h);
    let (y0, y1) = (t.cdf[i], t.cdf[i + 1]);
    let (m0, m1) = (bump(x0) / t.norm * h, bump(x1) / t.norm * h);
    let r2 = r * r;
    let r3 = r2 * r;
    (2.0 * r3 - 3.0 * r2 + 1.0) * y0 + (r3 - 2.0 * r2 + r) * m0 + (-2.0 * r3 + 3.0 * r2) * y1 + (r3 - r2) * m1
}

/// `u * φ_δ` with `u` extended by its one-sided boundary values outside
/// its bounded domain. The result lives on the domain enlarged by `δ`.
pub fn mollify(u: &Bv1d, delta: f64) -> Result<Bv1d> {
    let dom = u.domain();
    if !dom.is_bounded() {
        return param("mollify needs a bounded domain");
    }
    let (lo, hi) = (dom.inf(), dom.sup());
    if !(delta > 0.0 && delta.is_finite()) {
        return param(format!("mollifier radius must be positive, got {delta}"));
    }
    if delta > hi - lo {
        return param(format!("mollifier radius {delta} exceeds the domain width {}", hi - lo));
    }
    let (a, b) = (lo - delta, hi + delta);
    let spacing = 2.0 * delta / SAMPLES_PER_WINDOW as f64;
    let n = ((b - a) / spacing).ceil() as usize;
    let mut xs: Vec<f64> = (0..n).map(|i| a + i as f64 * spacing).filter(|&x| x < b - 1e-3 * spacing).collect();
    xs.push(b);
    let conv = Convolver::new(u, lo, hi, delta);
    let ys: Vec<f64> = xs.iter().map(|&x| conv.at(x)).collect();
    let raw = pchip_segments(&xs, &ys);
    let out = Bv1d::from_raw(0.0, raw, JumpSet::empty(), vec![], OpenSet1D::interval(a, b)?)?;
    Ok(out.with_truncation(u.truncation()))
}

struct Convolver<'a> {
    u: &'a Bv1d,
    lo: f64,
    hi: f64,
    delta: f64,
    ac_breaks: Vec<f64>,
    left_ac: f64,
    right_ac: f64,
    jump_base: f64,
}

impl<'a> Convolver<'a> {
    fn new(u: &'a Bv1d, lo: f64, hi: f64, delta: f64) -> Self {
        let mut ac_breaks: Vec<f64> = u.ac.breakpoints().into_iter().filter(|&x| lo < x && x < hi).collect();
        ac_breaks.push(lo);
        ac_breaks.push(hi);
        ac_breaks.sort_by(f64::total_cmp);
        let jump_base = u.jumps().iter().filter(|&(p, _)| p <= lo).map(|(_, h)| h).sum();
        Self { u, lo, hi, delta, ac_breaks, left_ac: u.ac_value(lo), right_ac: u.ac_value(hi), jump_base }
    }

    fn at(&self, x: f64) -> f64 {
        self.u.base() + self.jump_base + self.ac(x) + self.jumps(x) + self.cantor(x)
    }

    /// `∫ ũ_ac(s) φ_δ(x - s) ds` on eight panels, split at the kinks of the
    /// extended AC part, divided by the same rule applied to `φ_δ` so that
    /// constants are reproduced exactly.
    fn ac(&self, x: f64) -> f64 {
        let (p, q) = (x - self.delta, x + self.delta);
        let mut cuts: Vec<f64> = (0..=8).map(|i| p + (q - p) * i as f64 / 8.0).collect();
        cuts.extend(self.ac_breaks.iter().copied().filter(|&c| p < c && c < q));
        cuts.sort_by(f64::total_cmp);
        let v = |s: f64| {
            if s <= self.lo {
                self.left_ac
            } else if s >= self.hi {
                self.right_ac
            } else {
                self.u.ac_value(s)
            }
        };
        let k = |s: f64| bump((x - s) / self.delta);
        let num: f64 = cuts.windows(2).map(|w| gauss_legendre(|s| v(s) * k(s), w[0], w[1])).sum();
        let den: f64 = cuts.windows(2).map(|w| gauss_legendre(k, w[0], w[1])).sum();
        num / den
    }

    fn jumps(&self, x: f64) -> f64 {
        self.u
            .jumps()
            .iter()
            .filter(|&(p, _)| self.lo < p && p < self.hi)
            .map(|(p, h)| h * bump_cdf((x - p) / self.delta))
            .sum()
    }

    /// Cantor part as `c(lo) + ∫ Φ_δ(x - s) dμ(s)` with `μ` restricted to
    /// `[lo, hi]`, by triadic recursion and a two-point rule matching the
    /// first three moments on small intervals.
    fn cantor(&self, x: f64) -> f64 {
        self.u
            .cantor_components()
            .iter()
            .map(|c| c.value(self.lo) + self.cantor_rec(c, x, c.support.0, c.support.1, 0))
            .sum()
    }

    fn cantor_rec(&self, c: &CantorComponent, x: f64, a: f64, b: f64, level: u32) -> f64 {
        let mass = c.measure(a.max(self.lo), b.min(self.hi));
        if mass == 0.0 {
            return 0.0;
        }
        if b <= x - self.delta {
            return mass;
        }
        if a >= x + self.delta {
            return 0.0;
        }
        let w = b - a;
        if w <= 1e-2 * self.delta || level >= 30 {
            let m = 0.5 * (a + b);
            let r = w / 8f64.sqrt();
            return 0.5 * mass * (bump_cdf((x - m + r) / self.delta) + bump_cdf((x - m - r) / self.delta));
        }
        let t = w / 3.0;
        self.cantor_rec(c, x, a, a + t, level + 1) + self.cantor_rec(c, x, b - t, b, level + 1)
    }
}
