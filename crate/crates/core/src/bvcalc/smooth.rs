//! Smooth building blocks for the absolutely continuous part: shifted
//! polynomials, scaled sines, their sums, and the closed catalog of piece
//! forms that can be serialized.
//!
//! Every form supports evaluation, differentiation, antiderivatives, a
//! rigorous (possibly loose) interval enclosure, and root isolation. Exact
//! ranges are obtained by evaluating at endpoints and critical points.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// `Σ c_k (x - center)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub center: f64,
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(center: f64, coeffs: Vec<f64>) -> Self {
        let mut p = Self { center, coeffs };
        p.trim();
        p
    }

    pub fn constant(c: f64) -> Self {
        Self::new(0.0, vec![c])
    }

    pub fn zero() -> Self {
        Self { center: 0.0, coeffs: vec![] }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(&c) if c == 0.0) {
            self.coeffs.pop();
        }
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = x - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn deriv(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Poly::new(self.center, coeffs)
    }

    /// Antiderivative vanishing at `center`.
    pub fn antideriv(&self) -> Poly {
        let mut coeffs = vec![0.0];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, &c)| c / (k + 1) as f64));
        Poly::new(self.center, coeffs)
    }

    /// Same polynomial expanded about `c`.
    pub fn recenter(&self, c: f64) -> Poly {
        if c == self.center || self.coeffs.len() <= 1 {
            return Poly { center: c, coeffs: self.coeffs.clone() };
        }
        // repeated synthetic division by (t - s), with t = x - center
        let s = c - self.center;
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                a[j] += s * a[j + 1];
            }
        }
        Poly::new(c, a)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let o = other.recenter(self.center);
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + o.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        Poly::new(self.center, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let o = other.recenter(self.center);
        let mut coeffs = vec![0.0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(self.center, coeffs)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.center, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `t ↦ p(alpha t + beta)`, `alpha != 0`.
    pub fn compose_affine(&self, alpha: f64, beta: f64) -> Poly {
        let mut pw = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * pw;
                pw *= alpha;
                v
            })
            .collect();
        Poly::new((self.center - beta) / alpha, coeffs)
    }

    /// Interval Horner enclosure over `[p, q]`.
    pub fn enclose(&self, p: f64, q: f64) -> (f64, f64) {
        let (tl, th) = (p - self.center, q - self.center);
        let mut lo = 0.0;
        let mut hi = 0.0;
        for &c in self.coeffs.iter().rev() {
            let cands = [lo * tl, lo * th, hi * tl, hi * th];
            let mn = cands.iter().copied().fold(f64::INFINITY, f64::min);
            let mx = cands.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            lo = mn + c;
            hi = mx + c;
        }
        (lo, hi)
    }
}

/// `amplitude · sin(frequency · x + phase)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sine {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl Sine {
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude * (self.frequency * x + self.phase).sin()
    }

    pub fn deriv(&self) -> Sine {
        Sine {
            amplitude: self.amplitude * self.frequency,
            frequency: self.frequency,
            phase: self.phase + FRAC_PI_2,
        }
    }

    /// Requires nonzero frequency.
    pub fn antideriv(&self) -> Sine {
        Sine {
            amplitude: -self.amplitude / self.frequency,
            frequency: self.frequency,
            phase: self.phase + FRAC_PI_2,
        }
    }

    pub fn enclose(&self, p: f64, q: f64) -> (f64, f64) {
        let (mut a, mut b) = (self.frequency * p + self.phase, self.frequency * q + self.phase);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let (sa, sb) = (a.sin(), b.sin());
        let mut lo = sa.min(sb);
        let mut hi = sa.max(sb);
        // maxima at π/2 + 2kπ, minima at -π/2 + 2kπ
        let kmax = ((a - FRAC_PI_2) / (2.0 * PI)).ceil();
        if FRAC_PI_2 + 2.0 * PI * kmax <= b {
            hi = 1.0;
        }
        let kmin = ((a + FRAC_PI_2) / (2.0 * PI)).ceil();
        if -FRAC_PI_2 + 2.0 * PI * kmin <= b {
            lo = -1.0;
        }
        let amp = self.amplitude;
        if amp >= 0.0 {
            (amp * lo, amp * hi)
        } else {
            (amp * hi, amp * lo)
        }
    }
}

/// Polynomial plus finitely many sines.
#[derive(Clone, Debug, PartialEq)]
pub struct Smooth {
    pub poly: Poly,
    pub sines: Vec<Sine>,
}

impl Smooth {
    pub fn from_poly(poly: Poly) -> Self {
        Self { poly, sines: vec![] }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn is_poly(&self) -> bool {
        self.sines.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x) + self.sines.iter().map(|s| s.eval(x)).sum::<f64>()
    }

    pub fn deriv(&self) -> Smooth {
        Smooth {
            poly: self.poly.deriv(),
            sines: self.sines.iter().map(Sine::deriv).collect(),
        }
    }

    pub fn antideriv(&self) -> Smooth {
        let mut poly = self.poly.antideriv();
        let mut sines = Vec::with_capacity(self.sines.len());
        for s in &self.sines {
            if s.frequency == 0.0 {
                poly = poly.add(&Poly::new(0.0, vec![0.0, s.amplitude * s.phase.sin()]));
            } else {
                sines.push(s.antideriv());
            }
        }
        Smooth { poly, sines }
    }

    pub fn add(&self, other: &Smooth) -> Smooth {
        let mut sines = self.sines.clone();
        sines.extend_from_slice(&other.sines);
        Smooth { poly: self.poly.add(&other.poly), sines }
    }

    pub fn add_const(&self, c: f64) -> Smooth {
        Smooth { poly: self.poly.add(&Poly::constant(c)), sines: self.sines.clone() }
    }

    pub fn scale(&self, s: f64) -> Smooth {
        Smooth {
            poly: self.poly.scale(s),
            sines: self
                .sines
                .iter()
                .map(|x| Sine { amplitude: x.amplitude * s, ..*x })
                .collect(),
        }
    }

    /// Product, defined when at most one factor carries sines and the other
    /// is constant.
    pub fn mul(&self, other: &Smooth) -> Option<Smooth> {
        if self.is_poly() && other.is_poly() {
            return Some(Smooth::from_poly(self.poly.mul(&other.poly)));
        }
        let const_of = |s: &Smooth| -> Option<f64> {
            (s.is_poly() && s.poly.degree().unwrap_or(0) == 0)
                .then(|| s.poly.coeffs.first().copied().unwrap_or(0.0))
        };
        if let Some(c) = const_of(self) {
            return Some(other.scale(c));
        }
        const_of(other).map(|c| self.scale(c))
    }

    pub fn compose_affine(&self, alpha: f64, beta: f64) -> Smooth {
        Smooth {
            poly: self.poly.compose_affine(alpha, beta),
            sines: self
                .sines
                .iter()
                .map(|s| Sine {
                    amplitude: s.amplitude,
                    frequency: s.frequency * alpha,
                    phase: s.phase + s.frequency * beta,
                })
                .collect(),
        }
    }

    pub fn enclose(&self, p: f64, q: f64) -> (f64, f64) {
        let (mut lo, mut hi) = self.poly.enclose(p, q);
        for s in &self.sines {
            let (a, b) = s.enclose(p, q);
            lo += a;
            hi += b;
        }
        (lo, hi)
    }

    /// Roots strictly inside `(p, q)`, sorted.
    pub fn roots_in(&self, p: f64, q: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if !(p < q) {
            return out;
        }
        if self.is_poly() {
            let pc = self.poly.recenter(0.5 * (p + q));
            match pc.degree() {
                None | Some(0) => return out,
                Some(1) => {
                    let r = pc.center - pc.coeffs[0] / pc.coeffs[1];
                    if p < r && r < q {
                        out.push(r);
                    }
                    return out;
                }
                Some(2) => {
                    let (c, b, a) = (pc.coeffs[0], pc.coeffs[1], pc.coeffs[2]);
                    let disc = b * b - 4.0 * a * c;
                    if disc >= 0.0 {
                        let sq = disc.sqrt();
                        let qq = -0.5 * (b + b.signum() * sq);
                        let mut rs = vec![];
                        if qq != 0.0 {
                            rs.push(qq / a);
                            rs.push(c / qq);
                        } else {
                            rs.push(0.0);
                        }
                        for r in rs {
                            let x = pc.center + r;
                            if p < x && x < q {
                                out.push(x);
                            }
                        }
                    }
                    out.sort_by(f64::total_cmp);
                    out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
                    return out;
                }
                _ => {}
            }
        }
        let d = self.deriv();
        isolate(self, &d, p, q, 0, &mut out);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
        out.retain(|&x| p < x && x < q);
        out
    }
}

fn isolate(f: &Smooth, df: &Smooth, p: f64, q: f64, depth: u32, out: &mut Vec<f64>) {
    let (lo, hi) = f.enclose(p, q);
    if lo > 0.0 || hi < 0.0 {
        return;
    }
    let (dlo, dhi) = df.enclose(p, q);
    if dlo > 0.0 || dhi < 0.0 {
        let (fp, fq) = (f.eval(p), f.eval(q));
        if fp == 0.0 || fq == 0.0 || fp.signum() == fq.signum() {
            return;
        }
        out.push(bisect_root(f, p, q, fp));
        return;
    }
    let mid = 0.5 * (p + q);
    if depth >= 64 || q - p <= 1e-13 * (1.0 + p.abs()) {
        out.push(mid);
        return;
    }
    isolate(f, df, p, mid, depth + 1, out);
    if f.eval(mid) == 0.0 {
        out.push(mid);
    }
    isolate(f, df, mid, q, depth + 1, out);
}

fn bisect_root(f: &Smooth, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sa = fa.signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f.eval(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Serializable piece forms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum PieceForm {
    Affine { slope: f64, intercept: f64 },
    /// Coefficients of powers of `x`, lowest first.
    Polynomial { coefficients: Vec<f64> },
    ScaledSine { amplitude: f64, frequency: f64, phase: f64 },
    /// Monotone (Fritsch–Carlson) cubic Hermite interpolant through the samples.
    Spline { knots: Vec<f64>, values: Vec<f64> },
}

/// One smooth piece on a closed support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothPiece {
    pub support: (f64, f64),
    pub form: PieceForm,
}

impl SmoothPiece {
    pub fn new(support: (f64, f64), form: PieceForm) -> Result<Self> {
        let piece = Self { support, form };
        piece.validate()?;
        Ok(piece)
    }

    pub fn affine(lo: f64, hi: f64, slope: f64, intercept: f64) -> Result<Self> {
        Self::new((lo, hi), PieceForm::Affine { slope, intercept })
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = self.support;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return param(format!("piece support ({a}, {b}) must be a bounded interval"));
        }
        if let PieceForm::Spline { knots, values } = &self.form {
            if knots.len() < 2 || knots.len() != values.len() {
                return param("spline needs at least two knots and matching values");
            }
            if knots.windows(2).any(|w| w[0] >= w[1]) {
                return param("spline knots must be strictly increasing");
            }
            if knots[0] != a || knots[knots.len() - 1] != b {
                return param("spline knots must span the piece support");
            }
        }
        Ok(())
    }

    /// Elementary smooth segments `(lo, hi, f)` covering the support.
    pub(crate) fn segments(&self) -> Vec<(f64, f64, Smooth)> {
        let (a, b) = self.support;
        match &self.form {
            PieceForm::Affine { slope, intercept } => {
                vec![(a, b, Smooth::from_poly(Poly::new(0.0, vec![*intercept, *slope])))]
            }
            PieceForm::Polynomial { coefficients } => {
                vec![(a, b, Smooth::from_poly(Poly::new(0.0, coefficients.clone())))]
            }
            PieceForm::ScaledSine { amplitude, frequency, phase } => vec![(
                a,
                b,
                Smooth {
                    poly: Poly::zero(),
                    sines: vec![Sine { amplitude: *amplitude, frequency: *frequency, phase: *phase }],
                },
            )],
            PieceForm::Spline { knots, values } => pchip_segments(knots, values),
        }
    }
}

/// Fritsch–Carlson slopes, with the shape-preserving three-point end rule.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![del[0], del[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if del[k - 1] * del[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let mut d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if d.signum() != d0.signum() || d0 == 0.0 {
            d = 0.0;
        } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
            d = 3.0 * d0;
        }
        d
    };
    m[0] = end(h[0], h[1], del[0], del[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    m
}

pub(crate) fn pchip_segments(x: &[f64], y: &[f64]) -> Vec<(f64, f64, Smooth)> {
    let m = pchip_slopes(x, y);
    (0..x.len() - 1)
        .map(|i| {
            let h = x[i + 1] - x[i];
            let d = (y[i + 1] - y[i]) / h;
            let c2 = (3.0 * d - 2.0 * m[i] - m[i + 1]) / h;
            let c3 = (m[i] + m[i + 1] - 2.0 * d) / (h * h);
            (x[i], x[i + 1], Smooth::from_poly(Poly::new(x[i], vec![y[i], m[i], c2, c3])))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recenter_preserves_values() {
        let p = Poly::new(0.3, vec![1.0, -2.0, 0.5, 3.0]);
        let q = p.recenter(-1.2);
        for x in [-2.0, 0.0, 0.7, 1.9] {
            assert!((p.eval(x) - q.eval(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn compose_and_mul() {
        let p = Poly::new(0.0, vec![1.0, 2.0, -1.0]);
        let c = p.compose_affine(-2.0, 0.5);
        for t in [-1.0, 0.2, 3.0] {
            assert!((c.eval(t) - p.eval(-2.0 * t + 0.5)).abs() < 1e-12);
        }
        let m = p.mul(&Poly::new(1.0, vec![0.0, 1.0]));
        assert!((m.eval(2.0) - p.eval(2.0) * 1.0).abs() < 1e-12);
    }

    #[test]
    fn enclosures_contain_samples() {
        let f = Smooth {
            poly: Poly::new(0.1, vec![0.2, -1.0, 0.0, 4.0]),
            sines: vec![Sine { amplitude: 0.7, frequency: 9.0, phase: 0.3 }],
        };
        for (p, q) in [(-1.0, 1.0), (0.1, 0.2), (0.45, 0.451)] {
            let (lo, hi) = f.enclose(p, q);
            for i in 0..=100 {
                let x = p + (q - p) * i as f64 / 100.0;
                let v = f.eval(x);
                assert!(lo - 1e-12 <= v && v <= hi + 1e-12);
            }
        }
    }

    #[test]
    fn roots_of_sine_and_cubic() {
        let s = Smooth {
            poly: Poly::zero(),
            sines: vec![Sine { amplitude: 1.0, frequency: PI, phase: 0.0 }],
        };
        let r = s.roots_in(0.5, 3.5);
        assert_eq!(r.len(), 3);
        for (k, x) in r.iter().enumerate() {
            assert!((x - (k + 1) as f64).abs() < 1e-10);
        }
        let c = Smooth::from_poly(Poly::new(0.0, vec![0.0, -1.0, 0.0, 1.0]));
        let r = c.roots_in(-2.0, 2.0);
        assert_eq!(r.len(), 3);
        assert!((r[0] + 1.0).abs() < 1e-10 && r[1].abs() < 1e-10 && (r[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pchip_is_monotone_on_monotone_data() {
        let x = vec![0.0, 0.1, 0.5, 0.6, 1.0];
        let y = vec![0.0, 0.0, 0.9, 1.0, 1.0];
        let segs = pchip_segments(&x, &y);
        for (lo, hi, f) in &segs {
            assert!((f.eval(*lo) - y[x.iter().position(|v| v == lo).unwrap()]).abs() < 1e-14);
            let d = f.deriv();
            for i in 0..=50 {
                let t = lo + (hi - lo) * i as f64 / 50.0;
                assert!(d.eval(t) >= -1e-12);
            }
        }
    }
}
