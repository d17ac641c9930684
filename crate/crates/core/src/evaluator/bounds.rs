//! Enclosures of `u(y) - u(x)` over a cell as affine functions of `D = |x - y|`.

use crate::bvcalc::Bv1d;
use crate::kernel::{band, Cell};

/// `u(y) - u(x) ∈ [s_lo + m_lo D, s_hi + m_hi D]` for `(x, y)` in the cell
/// with `x < y`, and `D ∈ [d_min, d_max]`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DeltaBounds {
    pub s_lo: f64,
    pub s_hi: f64,
    pub m_lo: f64,
    pub m_hi: f64,
    pub d_min: f64,
    pub d_max: f64,
}

fn singular_open(u: &Bv1d, p: f64, q: f64) -> (f64, f64) {
    if p >= q {
        return (0.0, 0.0);
    }
    let j = u.jumps_open(p, q);
    let c = u.cantor_mass(p, q);
    (j.0 + c.0, j.1 + c.1)
}

impl DeltaBounds {
    /// Cell `[a, b] × [c, d]` with `b <= c`. The increment over the core
    /// `[b, c]` is exact; only the sides contribute uncertainty, with slopes
    /// taken over the sides and applied to `D - (c - b)`.
    pub fn off_diagonal(u: &Bv1d, a: f64, b: f64, c: f64, d: f64) -> Self {
        let core = u.right_limit(c) - u.left_limit(b);
        let l = singular_open(u, a, b);
        let r = singular_open(u, c, d);
        let (l_lo, l_hi) = u.ac.deriv_range(a, b);
        let (r_lo, r_hi) = u.ac.deriv_range(c, d);
        let (m_lo, m_hi) = (l_lo.min(r_lo), l_hi.max(r_hi));
        let g = c - b;
        Self {
            s_lo: core - l.1 - r.1 - m_lo * g,
            s_hi: core + l.0 + r.0 - m_hi * g,
            m_lo,
            m_hi,
            d_min: g,
            d_max: d - a,
        }
    }

    /// Square `[a, b]²`; both orientations share the same bounds.
    pub fn diagonal(u: &Bv1d, a: f64, b: f64) -> Self {
        let (p, n) = singular_open(u, a, b);
        let (m_lo, m_hi) = u.ac.deriv_range(a, b);
        Self { s_lo: -n, s_hi: p, m_lo, m_hi, d_min: 0.0, d_max: b - a }
    }

    /// Bounds for an arbitrary cell: off-diagonal when the ranges are
    /// separated, otherwise through the hull square.
    pub fn for_cell(u: &Bv1d, cell: &Cell) -> Self {
        let (a, b) = cell.x;
        let (c, d) = cell.y;
        if b <= c {
            Self::off_diagonal(u, a, b, c, d)
        } else if d <= a {
            Self::off_diagonal(u, c, d, a, b)
        } else {
            Self::diagonal(u, a.min(c), b.max(d))
        }
    }
}

/// `{D ∈ [d0, d1] : α + βD > λ D^{1+γ}}`, an interval because the left side
/// minus the right is concave in `D >= 0`.
pub(crate) fn positive_interval(alpha: f64, beta: f64, lambda: f64, gamma: f64, d0: f64, d1: f64) -> Option<(f64, f64)> {
    if !(d1 > d0) {
        return None;
    }
    let p = 1.0 + gamma;
    let h = |d: f64| alpha + beta * d - lambda * d.powf(p);
    if alpha <= 0.0 && beta <= 0.0 {
        return None;
    }
    let peak = if beta > 0.0 { (beta / (lambda * p)).powf(1.0 / gamma) } else { 0.0 };
    let dc = peak.clamp(d0, d1);
    if h(dc) <= 0.0 {
        return None;
    }
    let left = if h(d0) >= 0.0 { d0 } else { root(&h, beta, lambda, gamma, d0, dc) };
    let right = if h(d1) >= 0.0 {
        d1
    } else if beta == 0.0 {
        (alpha / lambda).powf(1.0 / p).clamp(dc, d1)
    } else if alpha == 0.0 {
        (beta / lambda).powf(1.0 / gamma).clamp(dc, d1)
    } else {
        root(&h, beta, lambda, gamma, dc, d1)
    };
    (right > left).then_some((left, right))
}

/// Root of `h` bracketed in `[lo, hi]` with `h(lo)`, `h(hi)` of opposite sign;
/// safeguarded Newton.
fn root<H: Fn(f64) -> f64>(h: &H, beta: f64, lambda: f64, gamma: f64, lo: f64, hi: f64) -> f64 {
    let p = 1.0 + gamma;
    let (mut a, mut b) = (lo, hi);
    // h(lo) and h(hi) have opposite signs; only one may vanish
    let rising = h(b) > 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..100 {
        let hx = h(x);
        if hx == 0.0 {
            return x;
        }
        if (hx < 0.0) == rising {
            a = x;
        } else {
            b = x;
        }
        if b - a <= 4.0 * f64::EPSILON * b.abs() {
            break;
        }
        let dh = beta - lambda * p * x.powf(gamma);
        let nx = x - hx / dh;
        x = if dh != 0.0 && nx > a && nx < b { nx } else { 0.5 * (a + b) };
    }
    x
}

/// Lower and upper bounds of `ν_γ(E ∩ cell)` for a cell with the given
/// bounds (the band integral accounts for both orientations of a square).
pub(crate) fn nu_bounds(cell: &Cell, db: &DeltaBounds, gamma: f64, lambda: f64) -> (f64, f64) {
    let (d0, d1) = (db.d_min, db.d_max);
    let mut lower = 0.0;
    // certainly in E: ℓ > thr or -υ > thr (disjoint)
    for iv in [
        positive_interval(db.s_lo, db.m_lo, lambda, gamma, d0, d1),
        positive_interval(-db.s_hi, -db.m_hi, lambda, gamma, d0, d1),
    ]
    .into_iter()
    .flatten()
    {
        lower += band(cell, gamma, iv.0, iv.1);
    }
    let a = positive_interval(db.s_hi, db.m_hi, lambda, gamma, d0, d1);
    let b = positive_interval(-db.s_lo, -db.m_lo, lambda, gamma, d0, d1);
    let upper = match (a, b) {
        (None, None) => 0.0,
        (Some(x), None) | (None, Some(x)) => band(cell, gamma, x.0, x.1),
        (Some(x), Some(y)) => {
            let (x, y) = if x.0 <= y.0 { (x, y) } else { (y, x) };
            if y.0 <= x.1 {
                band(cell, gamma, x.0, x.1.max(y.1))
            } else {
                band(cell, gamma, x.0, x.1) + band(cell, gamma, y.0, y.1)
            }
        }
    };
    (lower, upper.max(lower))
}
