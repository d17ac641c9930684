//! Exact one-dimensional BV functions.
//!
//! A [`Bv1d`] is `base + AC(x) + Σ h_j H(x - p_j) + Σ C_k(x)`: a continuous
//! piecewise smooth part, a finite jump set, and windowed Cantor components.
//! Every query needed by the evaluators (one-sided limits, signed measures
//! of intervals, positive and negative variation, derivative ranges) is
//! answered from closed forms or from precomputed critical points.

use serde::{Deserialize, Serialize};

use super::cantor::{cantor, cantor_integral};
use super::openset::OpenSet1D;
use super::segtree::MinMaxTree;
use super::smooth::{Smooth, SmoothPiece};
use crate::error::{domain, param, Result};

/// Truncation radius used when a domain is unbounded.
pub const DEFAULT_TRUNCATION: f64 = 100.0;

/// Finite jump set with strictly increasing locations and nonzero heights.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct JumpSet {
    locations: Vec<f64>,
    heights: Vec<f64>,
}

impl JumpSet {
    pub fn new(mut jumps: Vec<(f64, f64)>) -> Result<Self> {
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut locations: Vec<f64> = Vec::with_capacity(jumps.len());
        let mut heights: Vec<f64> = Vec::with_capacity(jumps.len());
        for (p, h) in jumps {
            if !p.is_finite() || !h.is_finite() {
                return param(format!("jump ({p}, {h}) is not finite"));
            }
            if locations.last() == Some(&p) {
                *heights.last_mut().unwrap() += h;
            } else {
                locations.push(p);
                heights.push(h);
            }
        }
        let keep: Vec<bool> = heights.iter().map(|h| *h != 0.0).collect();
        let mut k = keep.iter();
        locations.retain(|_| *k.next().unwrap());
        heights.retain(|h| *h != 0.0);
        Ok(Self { locations, heights })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(location: f64, height: f64) -> Self {
        Self::new(vec![(location, height)]).expect("finite jump")
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.locations.iter().copied().zip(self.heights.iter().copied())
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }
}

/// Middle-thirds Cantor–Lebesgue function rescaled to `[a, b]`, multiplied by
/// `scale`, with its variation restricted to `window ⊂ [a, b]`.
///
/// Value: `scale · (C(s(clamp(x, window))) - C(s(window.0))))`,
/// `s(x) = (x - a) / (b - a)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorComponent {
    pub support: (f64, f64),
    pub scale: f64,
    pub window: (f64, f64),
}

impl CantorComponent {
    /// Full component on `[a, b]` with total signed mass `mass`.
    pub fn new(a: f64, b: f64, mass: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return param(format!("Cantor support [{a}, {b}] must be a bounded interval"));
        }
        if mass == 0.0 || !mass.is_finite() {
            return param("Cantor mass must be finite and nonzero");
        }
        Ok(Self { support: (a, b), scale: mass, window: (a, b) })
    }

    fn s(&self, x: f64) -> f64 {
        (x - self.support.0) / (self.support.1 - self.support.0)
    }

    fn base_level(&self) -> f64 {
        cantor(self.s(self.window.0))
    }

    pub fn value(&self, x: f64) -> f64 {
        let xc = x.clamp(self.window.0, self.window.1);
        self.scale * (cantor(self.s(xc)) - self.base_level())
    }

    /// Signed mass of the component.
    pub fn mass(&self) -> f64 {
        self.value(self.window.1)
    }

    /// Signed measure of an interval (the component has no atoms).
    pub fn measure(&self, p: f64, q: f64) -> f64 {
        if q <= self.window.0 || p >= self.window.1 {
            return 0.0;
        }
        self.value(q) - self.value(p)
    }

    /// `∫_p^q value(x) dx`.
    pub fn integral(&self, p: f64, q: f64) -> f64 {
        let (lo, hi) = self.window;
        let (a, b) = self.support;
        let mut total = 0.0;
        // flat part after the window
        let top = self.mass();
        if q > hi {
            total += top * (q - p.max(hi));
        }
        let (pp, qq) = (p.max(lo), q.min(hi));
        if pp < qq {
            let w = b - a;
            let ci = w * (cantor_integral(self.s(qq)) - cantor_integral(self.s(pp)));
            total += self.scale * (ci - self.base_level() * (qq - pp));
        }
        total
    }

    /// Largest gap of the (windowed) Cantor set meeting `(p, q)`.
    pub fn largest_gap(&self, p: f64, q: f64) -> Option<(f64, f64)> {
        let (p, q) = (p.max(self.window.0), q.min(self.window.1));
        if p >= q {
            return None;
        }
        let (a, b) = self.support;
        let (sp, sq) = (self.s(p), self.s(q));
        let mut m = 0u64;
        let mut pow = 1u64;
        let x = |num: u64, den: u64| a + (b - a) * (num as f64 / den as f64);
        for _ in 0..33 {
            let den = 3 * pow;
            let (g0, g1) = ((3 * m + 1) as f64 / den as f64, (3 * m + 2) as f64 / den as f64);
            if sq > g0 && sp < g1 {
                return Some((x(3 * m + 1, den), x(3 * m + 2, den)));
            }
            m = if sq <= g0 { 3 * m } else { 3 * m + 2 };
            pow = den;
        }
        None
    }

    fn restricted(&self, lo: f64, hi: f64) -> Option<Self> {
        let w = (self.window.0.max(lo), self.window.1.min(hi));
        if w.0 >= w.1 {
            return None;
        }
        let c = Self { window: w, ..*self };
        (c.mass() != 0.0).then_some(c)
    }
}

/// A smooth segment with precomputed critical and inflection points.
#[derive(Clone, Debug)]
pub(crate) struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub f: Smooth,
    pub df: Smooth,
    anti: Smooth,
    crit: Vec<f64>,
    infl: Vec<f64>,
    pos: f64,
    neg: f64,
    dmin: f64,
    dmax: f64,
}

impl Segment {
    pub fn new(lo: f64, hi: f64, f: Smooth) -> Self {
        let df = f.deriv();
        let crit = df.roots_in(lo, hi);
        let infl = df.deriv().roots_in(lo, hi);
        let anti = f.antideriv();
        let mut s = Self { lo, hi, f, df, anti, crit, infl, pos: 0.0, neg: 0.0, dmin: 0.0, dmax: 0.0 };
        let (p, n) = s.var_on(lo, hi);
        let (a, b) = s.deriv_range(lo, hi);
        s.pos = p;
        s.neg = n;
        s.dmin = a;
        s.dmax = b;
        s
    }

    fn inner<'a>(pts: &'a [f64], p: f64, q: f64) -> impl Iterator<Item = f64> + 'a {
        let i = pts.partition_point(|&x| x <= p);
        pts[i..].iter().copied().take_while(move |&x| x < q)
    }

    /// Positive and negative variation on `[p, q]`.
    pub fn var_on(&self, p: f64, q: f64) -> (f64, f64) {
        let mut prev = self.f.eval(p);
        let (mut pos, mut neg) = (0.0, 0.0);
        for x in Self::inner(&self.crit, p, q).chain(std::iter::once(q)) {
            let v = self.f.eval(x);
            let d = v - prev;
            if d > 0.0 {
                pos += d;
            } else {
                neg -= d;
            }
            prev = v;
        }
        (pos, neg)
    }

    pub fn deriv_range(&self, p: f64, q: f64) -> (f64, f64) {
        let (a, b) = (self.df.eval(p), self.df.eval(q));
        let (mut lo, mut hi) = (a.min(b), a.max(b));
        for x in Self::inner(&self.infl, p, q) {
            let v = self.df.eval(x);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    pub fn critical_points(&self) -> &[f64] {
        &self.crit
    }

    fn integral(&self, p: f64, q: f64) -> f64 {
        self.anti.eval(q) - self.anti.eval(p)
    }
}

/// Continuous piecewise smooth part, constant outside its coverage.
#[derive(Clone, Debug)]
pub(crate) struct AcPart {
    pub segs: Vec<Segment>,
    prefix_pos: Vec<f64>,
    prefix_neg: Vec<f64>,
    prefix_int: Vec<f64>,
    dtree: MinMaxTree,
}

impl AcPart {
    pub fn new(raw: Vec<(f64, f64, Smooth)>) -> Result<Self> {
        let mut segs: Vec<Segment> = Vec::with_capacity(raw.len());
        for (lo, hi, f) in raw {
            if !(lo < hi) {
                return param(format!("empty segment [{lo}, {hi}]"));
            }
            if let Some(prev) = segs.last() {
                if prev.hi != lo {
                    return param(format!("pieces must be contiguous: gap between {} and {lo}", prev.hi));
                }
                let (a, b) = (prev.f.eval(lo), f.eval(lo));
                if (a - b).abs() > 1e-9 * (1.0 + a.abs().max(b.abs())) {
                    return param(format!(
                        "absolutely continuous part is discontinuous at {lo} ({a} vs {b}); use a jump"
                    ));
                }
            }
            segs.push(Segment::new(lo, hi, f));
        }
        let mut prefix_pos = vec![0.0];
        let mut prefix_neg = vec![0.0];
        let mut prefix_int = vec![0.0];
        for s in &segs {
            prefix_pos.push(prefix_pos.last().unwrap() + s.pos);
            prefix_neg.push(prefix_neg.last().unwrap() + s.neg);
            prefix_int.push(prefix_int.last().unwrap() + s.integral(s.lo, s.hi));
        }
        let lo: Vec<f64> = segs.iter().map(|s| s.dmin).collect();
        let hi: Vec<f64> = segs.iter().map(|s| s.dmax).collect();
        Ok(Self { dtree: MinMaxTree::new(&lo, &hi), segs, prefix_pos, prefix_neg, prefix_int })
    }

    pub fn coverage(&self) -> Option<(f64, f64)> {
        Some((self.segs.first()?.lo, self.segs.last()?.hi))
    }

    fn index(&self, x: f64) -> usize {
        // segment containing x, preferring the left one at breakpoints
        self.segs.partition_point(|s| s.hi < x).min(self.segs.len() - 1)
    }

    pub fn value(&self, x: f64) -> f64 {
        let Some((lo, hi)) = self.coverage() else { return 0.0 };
        let xc = x.clamp(lo, hi);
        self.segs[self.index(xc)].f.eval(xc)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let Some((lo, hi)) = self.coverage() else { return 0.0 };
        if x < lo || x > hi {
            return 0.0;
        }
        self.segs[self.index(x)].df.eval(x)
    }

    /// Positive and negative variation on `[p, q]`.
    pub fn var(&self, p: f64, q: f64) -> (f64, f64) {
        let Some((lo, hi)) = self.coverage() else { return (0.0, 0.0) };
        let (p, q) = (p.max(lo), q.min(hi));
        if p >= q {
            return (0.0, 0.0);
        }
        let (i, j) = (self.index(p), self.index(q));
        if i == j {
            return self.segs[i].var_on(p, q);
        }
        let a = self.segs[i].var_on(p, self.segs[i].hi);
        let b = self.segs[j].var_on(self.segs[j].lo, q);
        (
            a.0 + b.0 + self.prefix_pos[j] - self.prefix_pos[i + 1],
            a.1 + b.1 + self.prefix_neg[j] - self.prefix_neg[i + 1],
        )
    }

    /// Range of the derivative on `[p, q]` (zero outside the coverage).
    pub fn deriv_range(&self, p: f64, q: f64) -> (f64, f64) {
        let Some((lo, hi)) = self.coverage() else { return (0.0, 0.0) };
        let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
        if p < lo || q > hi {
            mn = 0.0;
            mx = 0.0;
        }
        let (p, q) = (p.max(lo), q.min(hi));
        if p >= q {
            if p == q && p >= lo && p <= hi {
                let d = self.deriv(p);
                return (mn.min(d), mx.max(d));
            }
            return (mn.min(0.0), mx.max(0.0));
        }
        let (i, j) = (self.index(p), self.index(q));
        let mut acc = |r: (f64, f64)| {
            mn = mn.min(r.0);
            mx = mx.max(r.1);
        };
        if i == j {
            acc(self.segs[i].deriv_range(p, q));
        } else {
            acc(self.segs[i].deriv_range(p, self.segs[i].hi));
            acc(self.segs[j].deriv_range(self.segs[j].lo, q));
            if j > i + 1 {
                acc(self.dtree.query(i + 1, j));
            }
        }
        (mn, mx)
    }

    pub fn integral(&self, p: f64, q: f64) -> f64 {
        let Some((lo, hi)) = self.coverage() else { return 0.0 };
        let mut total = 0.0;
        if p < lo {
            total += self.value(lo) * (q.min(lo) - p);
        }
        if q > hi {
            total += self.value(hi) * (q - p.max(hi));
        }
        let (p, q) = (p.max(lo), q.min(hi));
        if p < q {
            let (i, j) = (self.index(p), self.index(q));
            if i == j {
                total += self.segs[i].integral(p, q);
            } else {
                total += self.segs[i].integral(p, self.segs[i].hi);
                total += self.segs[j].integral(self.segs[j].lo, q);
                total += self.prefix_int[j] - self.prefix_int[i + 1];
            }
        }
        total
    }

    /// Breakpoints of the segments.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.segs.iter().map(|s| s.lo).collect();
        if let Some(s) = self.segs.last() {
            v.push(s.hi);
        }
        v
    }

    pub fn raw(&self) -> Vec<(f64, f64, Smooth)> {
        self.segs.iter().map(|s| (s.lo, s.hi, s.f.clone())).collect()
    }

    /// Segments over `[p, q]`, padded with constants outside the coverage.
    fn raw_covering(&self, p: f64, q: f64) -> Vec<(f64, f64, Smooth)> {
        let Some((lo, hi)) = self.coverage() else {
            return vec![(p, q, Smooth::constant(0.0))];
        };
        let mut out = Vec::new();
        if p < lo {
            out.push((p, lo, Smooth::constant(self.value(lo))));
        }
        out.extend(self.raw());
        if q > hi {
            out.push((hi, q, Smooth::constant(self.value(hi))));
        }
        out
    }
}

/// Exact 1D BV function on an open set.
#[derive(Clone, Debug)]
pub struct Bv1d {
    base: f64,
    pub(crate) ac: AcPart,
    jumps: JumpSet,
    jump_pos: Vec<f64>,
    jump_neg: Vec<f64>,
    cantor: Vec<CantorComponent>,
    domain: OpenSet1D,
    truncation: f64,
}

impl Bv1d {
    /// Builds `base + pieces + jumps + cantor` on `domain`.
    pub fn new(
        base: f64,
        pieces: Vec<SmoothPiece>,
        jumps: JumpSet,
        cantor: Vec<CantorComponent>,
        domain: OpenSet1D,
    ) -> Result<Self> {
        let mut pieces = pieces;
        pieces.sort_by(|a, b| a.support.0.total_cmp(&b.support.0));
        let raw = pieces.iter().flat_map(|p| p.segments()).collect();
        Self::from_raw(base, raw, jumps, cantor, domain)
    }

    pub(crate) fn from_raw(
        base: f64,
        raw: Vec<(f64, f64, Smooth)>,
        jumps: JumpSet,
        cantor: Vec<CantorComponent>,
        domain: OpenSet1D,
    ) -> Result<Self> {
        let ac = AcPart::new(raw)?;
        let mut jump_pos = vec![0.0];
        let mut jump_neg = vec![0.0];
        for &h in jumps.heights() {
            jump_pos.push(jump_pos.last().unwrap() + h.max(0.0));
            jump_neg.push(jump_neg.last().unwrap() + (-h).max(0.0));
        }
        Ok(Self { base, ac, jumps, jump_pos, jump_neg, cantor, domain, truncation: DEFAULT_TRUNCATION })
    }

    pub fn constant(c: f64, domain: OpenSet1D) -> Self {
        Self::from_raw(c, vec![], JumpSet::empty(), vec![], domain).unwrap()
    }

    /// `slope · x + intercept` on a bounded domain.
    pub fn affine(slope: f64, intercept: f64, domain: OpenSet1D) -> Result<Self> {
        if !domain.is_bounded() {
            return domain_err_unbounded();
        }
        let piece = SmoothPiece::affine(domain.inf(), domain.sup(), slope, intercept)?;
        Self::new(0.0, vec![piece], JumpSet::empty(), vec![], domain)
    }

    /// `height · H(x - location)`.
    pub fn step(location: f64, height: f64, domain: OpenSet1D) -> Result<Self> {
        Self::from_raw(0.0, vec![], JumpSet::new(vec![(location, height)])?, vec![], domain)
    }

    /// `mass · C((x - a)/(b - a))`.
    pub fn cantor(a: f64, b: f64, mass: f64, domain: OpenSet1D) -> Result<Self> {
        Self::from_raw(0.0, vec![], JumpSet::empty(), vec![CantorComponent::new(a, b, mass)?], domain)
    }

    pub fn with_truncation(mut self, r: f64) -> Self {
        self.truncation = r;
        self
    }

    pub fn with_domain(&self, domain: OpenSet1D) -> Self {
        Self { domain, ..self.clone() }
    }

    pub fn domain(&self) -> &OpenSet1D {
        &self.domain
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn jumps(&self) -> &JumpSet {
        &self.jumps
    }

    pub fn cantor_components(&self) -> &[CantorComponent] {
        &self.cantor
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// Domain intersected with `(-R, R)` when unbounded.
    pub fn working_domain(&self, w: &OpenSet1D) -> Result<OpenSet1D> {
        if w.is_bounded() {
            Ok(w.clone())
        } else {
            w.truncated(self.truncation)
        }
    }

    pub fn has_cantor(&self) -> bool {
        !self.cantor.is_empty()
    }

    pub fn has_ac(&self) -> bool {
        self.ac.segs.iter().any(|s| s.pos + s.neg > 0.0)
    }

    /// Points where the structure changes: piece breakpoints, jumps,
    /// Cantor windows.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = self.ac.breakpoints();
        v.extend_from_slice(self.jumps.locations());
        for c in &self.cantor {
            v.push(c.window.0);
            v.push(c.window.1);
        }
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    fn cantor_value(&self, x: f64) -> f64 {
        self.cantor.iter().map(|c| c.value(x)).sum()
    }

    pub fn ac_value(&self, x: f64) -> f64 {
        self.ac.value(x)
    }

    pub fn ac_deriv(&self, x: f64) -> f64 {
        self.ac.deriv(x)
    }

    fn jumps_le(&self, x: f64) -> f64 {
        let i = self.jumps.locations.partition_point(|&p| p <= x);
        self.jump_pos[i] - self.jump_neg[i]
    }

    fn jumps_lt(&self, x: f64) -> f64 {
        let i = self.jumps.locations.partition_point(|&p| p < x);
        self.jump_pos[i] - self.jump_neg[i]
    }

    pub fn right_limit(&self, x: f64) -> f64 {
        self.base + self.ac.value(x) + self.jumps_le(x) + self.cantor_value(x)
    }

    pub fn left_limit(&self, x: f64) -> f64 {
        self.base + self.ac.value(x) + self.jumps_lt(x) + self.cantor_value(x)
    }

    /// Precise representative; the midpoint of one-sided limits at jumps.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain.closure_contains(x) {
            return domain(format!("{x} outside the closure of the domain"));
        }
        Ok(self.value(x))
    }

    /// Unchecked precise representative.
    pub fn value(&self, x: f64) -> f64 {
        let i = self.jumps.locations.partition_point(|&p| p < x);
        if self.jumps.locations.get(i) == Some(&x) {
            0.5 * (self.left_limit(x) + self.right_limit(x))
        } else {
            self.right_limit(x)
        }
    }

    fn jump_sums(&self, i: usize, j: usize) -> (f64, f64) {
        if j <= i {
            return (0.0, 0.0);
        }
        (self.jump_pos[j] - self.jump_pos[i], self.jump_neg[j] - self.jump_neg[i])
    }

    /// Positive and negative jump mass in the open interval `(p, q)`.
    pub fn jumps_open(&self, p: f64, q: f64) -> (f64, f64) {
        let l = &self.jumps.locations;
        self.jump_sums(l.partition_point(|&x| x <= p), l.partition_point(|&x| x < q))
    }

    /// Positive and negative jump mass in the closed interval `[p, q]`.
    pub fn jumps_closed(&self, p: f64, q: f64) -> (f64, f64) {
        let l = &self.jumps.locations;
        self.jump_sums(l.partition_point(|&x| x < p), l.partition_point(|&x| x <= q))
    }

    /// Positive and negative Cantor mass on an interval.
    pub fn cantor_mass(&self, p: f64, q: f64) -> (f64, f64) {
        let (mut pos, mut neg) = (0.0, 0.0);
        for c in &self.cantor {
            let m = c.measure(p, q);
            if m > 0.0 {
                pos += m;
            } else {
                neg -= m;
            }
        }
        (pos, neg)
    }

    /// Positive and negative variation of `Du` on `(p, q)`.
    pub fn variation_open(&self, p: f64, q: f64) -> (f64, f64) {
        let a = self.ac.var(p, q);
        let j = self.jumps_open(p, q);
        let c = self.cantor_mass(p, q);
        (a.0 + j.0 + c.0, a.1 + j.1 + c.1)
    }

    /// Enclosure of `u` on the open interval `(p, q)`.
    pub fn range_open(&self, p: f64, q: f64) -> (f64, f64) {
        let r = self.right_limit(p);
        let (pos, neg) = self.variation_open(p, q);
        (r - neg, r + pos)
    }

    /// `Du((p, q])`.
    pub fn measure_half_open(&self, p: f64, q: f64) -> f64 {
        self.right_limit(q) - self.right_limit(p)
    }

    /// `Du([p, q])`.
    pub fn measure_closed(&self, p: f64, q: f64) -> f64 {
        self.right_limit(q) - self.left_limit(p)
    }

    /// `∫_p^q u(x) dx`.
    pub fn integral(&self, p: f64, q: f64) -> f64 {
        if p >= q {
            return 0.0;
        }
        let mut total = self.base * (q - p) + self.ac.integral(p, q);
        for (loc, h) in self.jumps.iter() {
            total += h * (q - p.max(loc)).max(0.0);
        }
        total += self.cantor.iter().map(|c| c.integral(p, q)).sum::<f64>();
        total
    }

    /// `self + other`; the domains must agree.
    pub fn add(&self, other: &Bv1d) -> Result<Bv1d> {
        if self.domain != other.domain {
            return domain("cannot add functions on different domains");
        }
        self.add_unchecked(other, self.domain.clone())
    }

    pub(crate) fn add_unchecked(&self, other: &Bv1d, dom: OpenSet1D) -> Result<Bv1d> {
        let raw = match (self.ac.coverage(), other.ac.coverage()) {
            (None, None) => vec![],
            (Some(_), None) => self.ac.raw(),
            (None, Some(_)) => other.ac.raw(),
            (Some((a0, a1)), Some((b0, b1))) => {
                let (lo, hi) = (a0.min(b0), a1.max(b1));
                let sa = self.ac.raw_covering(lo, hi);
                let sb = other.ac.raw_covering(lo, hi);
                let mut cuts: Vec<f64> = sa.iter().chain(sb.iter()).flat_map(|s| [s.0, s.1]).collect();
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let find = |segs: &[(f64, f64, Smooth)], x: f64| -> Smooth {
                    let i = segs.partition_point(|s| s.1 <= x).min(segs.len() - 1);
                    segs[i].2.clone()
                };
                cuts.windows(2)
                    .map(|w| {
                        let m = 0.5 * (w[0] + w[1]);
                        (w[0], w[1], find(&sa, m).add(&find(&sb, m)))
                    })
                    .collect()
            }
        };
        let mut jumps: Vec<(f64, f64)> = self.jumps.iter().collect();
        jumps.extend(other.jumps.iter());
        let mut cantor = self.cantor.clone();
        cantor.extend_from_slice(&other.cantor);
        let mut out = Bv1d::from_raw(self.base + other.base, raw, JumpSet::new(jumps)?, cantor, dom)?;
        out.truncation = self.truncation.max(other.truncation);
        Ok(out)
    }

    /// `c · u`.
    pub fn scale(&self, c: f64) -> Bv1d {
        if c == 0.0 {
            return Bv1d::constant(0.0, self.domain.clone());
        }
        let raw = self.ac.raw().into_iter().map(|(a, b, f)| (a, b, f.scale(c))).collect();
        let jumps = JumpSet::new(self.jumps.iter().map(|(p, h)| (p, c * h)).collect()).unwrap();
        let cantor = self.cantor.iter().map(|k| CantorComponent { scale: k.scale * c, ..*k }).collect();
        let mut out = Bv1d::from_raw(self.base * c, raw, jumps, cantor, self.domain.clone()).unwrap();
        out.truncation = self.truncation;
        out
    }

    pub fn add_constant(&self, c: f64) -> Bv1d {
        Self { base: self.base + c, ..self.clone() }
    }

    /// `t ↦ u(alpha t + beta)` on the preimage of the domain.
    pub fn compose_affine(&self, alpha: f64, beta: f64) -> Result<Bv1d> {
        if alpha == 0.0 || !alpha.is_finite() {
            return param("affine reparametrisation needs a nonzero finite slope");
        }
        let pre = |x: f64| (x - beta) / alpha;
        let map_iv = |a: f64, b: f64| {
            let (x, y) = (pre(a), pre(b));
            (x.min(y), x.max(y))
        };
        let dom = OpenSet1D::new(self.domain.intervals().iter().map(|&(a, b)| map_iv(a, b)).collect())?;
        let mut raw: Vec<(f64, f64, Smooth)> = self
            .ac
            .raw()
            .into_iter()
            .map(|(a, b, f)| {
                let (x, y) = map_iv(a, b);
                (x, y, f.compose_affine(alpha, beta))
            })
            .collect();
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut base = self.base;
        let mut jumps = Vec::with_capacity(self.jumps.len());
        for (p, h) in self.jumps.iter() {
            if alpha > 0.0 {
                jumps.push((pre(p), h));
            } else {
                // reversed orientation: the step is now on the left
                jumps.push((pre(p), -h));
                base += h;
            }
        }
        let mut cantor = Vec::with_capacity(self.cantor.len());
        for c in &self.cantor {
            let (a, b) = map_iv(c.support.0, c.support.1);
            let (w0, w1) = map_iv(c.window.0, c.window.1);
            if alpha > 0.0 {
                cantor.push(CantorComponent { support: (a, b), scale: c.scale, window: (w0, w1) });
            } else {
                // C(1 - s) = 1 - C(s): reversed component plus a constant
                base += c.mass();
                cantor.push(CantorComponent { support: (a, b), scale: -c.scale, window: (w0, w1) });
            }
        }
        let mut out = Bv1d::from_raw(base, raw, JumpSet::new(jumps)?, cantor, dom)?;
        out.truncation = self.truncation / alpha.abs();
        Ok(out)
    }

    /// Absolutely continuous plus jump part, and the Cantor part, separately.
    pub fn split_cantor(&self) -> (Bv1d, Bv1d) {
        let mut sbv = self.clone();
        sbv.cantor.clear();
        let c = Bv1d::from_raw(0.0, vec![], JumpSet::empty(), self.cantor.clone(), self.domain.clone()).unwrap();
        (sbv, c)
    }

    /// Variation of `Du` restricted to the open intervals `keep`, plus
    /// replacement atoms; used by truncation.
    pub(crate) fn rebuild_restricted(
        &self,
        keep: &[(f64, f64)],
        atoms: Vec<(f64, f64)>,
        left: f64,
        left_value: f64,
    ) -> Result<Bv1d> {
        let inside = |x: f64| keep.iter().any(|&(a, b)| a < x && x < b);
        let raw = match self.ac.coverage() {
            None => vec![],
            Some((lo, hi)) => {
                let mut cuts = self.ac.breakpoints();
                for &(a, b) in keep {
                    for x in [a, b] {
                        if lo < x && x < hi {
                            cuts.push(x);
                        }
                    }
                }
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let mut cur = 0.0;
                let mut out = Vec::with_capacity(cuts.len());
                for w in cuts.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let m = 0.5 * (a + b);
                    let seg = &self.ac.segs[self.ac.index(m)];
                    if inside(m) {
                        let f = seg.f.add_const(cur - seg.f.eval(a));
                        cur = f.eval(b);
                        out.push((a, b, f));
                    } else {
                        out.push((a, b, Smooth::constant(cur)));
                    }
                }
                out
            }
        };
        let mut jumps: Vec<(f64, f64)> = self.jumps.iter().filter(|&(p, _)| inside(p)).collect();
        jumps.extend(atoms);
        let cantor = self
            .cantor
            .iter()
            .flat_map(|c| keep.iter().filter_map(move |&(a, b)| c.restricted(a, b)))
            .collect();
        let mut out = Bv1d::from_raw(0.0, raw, JumpSet::new(jumps)?, cantor, self.domain.clone())?;
        out.base = left_value - out.right_limit(left);
        out.truncation = self.truncation;
        Ok(out)
    }
}

fn domain_err_unbounded<T>() -> Result<T> {
    domain("affine functions need a bounded domain")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> OpenSet1D {
        OpenSet1D::unit()
    }

    #[test]
    fn evaluation_examples() {
        let id = Bv1d::affine(1.0, 0.0, unit()).unwrap();
        assert_eq!(id.eval(0.5).unwrap(), 0.5);
        let h = Bv1d::step(0.5, 1.0, unit()).unwrap();
        assert_eq!(h.eval(0.5).unwrap(), 0.5);
        assert_eq!(h.eval(0.7).unwrap(), 1.0);
        let c = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
        assert!((c.eval(0.25).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!(c.eval(1.5).is_err());
    }

    #[test]
    fn measures() {
        let id = Bv1d::affine(1.0, 0.0, unit()).unwrap();
        assert!((id.measure_half_open(0.0, 0.25) - 0.25).abs() < 1e-15);
        let h = Bv1d::step(0.5, 1.0, unit()).unwrap();
        assert_eq!(h.measure_half_open(0.4, 0.6), 1.0);
        assert_eq!(h.measure_half_open(0.5, 0.6), 0.0);
        assert_eq!(h.measure_half_open(0.4, 0.5), 1.0);
        let c = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
        assert_eq!(c.measure_half_open(0.0, 1.0 / 3.0), 0.5);
    }

    #[test]
    fn sums_and_integrals() {
        let u = Bv1d::affine(1.0, 0.0, unit())
            .unwrap()
            .add(&Bv1d::step(0.5, 1.0, unit()).unwrap())
            .unwrap()
            .add(&Bv1d::cantor(0.0, 1.0, 0.7, unit()).unwrap())
            .unwrap();
        assert!((u.right_limit(0.75) - (0.75 + 1.0 + 0.7 * 2.0 / 3.0)).abs() < 1e-12);
        let exact = 0.5 + 0.5 + 0.7 * 0.5;
        assert!((u.integral(0.0, 1.0) - exact).abs() < 1e-12);
        let (p, n) = u.variation_open(0.0, 1.0);
        assert!((p - 2.7).abs() < 1e-12 && n == 0.0);
    }

    #[test]
    fn affine_reparametrisation_reverses_cantor() {
        let c = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
        let r = c.compose_affine(-1.0, 1.0).unwrap();
        for &t in &[0.1, 0.25, 0.5, 0.8] {
            assert!((r.right_limit(t) - c.right_limit(1.0 - t)).abs() < 1e-9, "t={t}");
        }
        let h = Bv1d::step(0.3, 2.0, unit()).unwrap();
        let r = h.compose_affine(-2.0, 1.0).unwrap();
        // u(1 - 2t): step down at t = 0.35
        assert_eq!(r.right_limit(0.1), 2.0);
        assert_eq!(r.right_limit(0.4), 0.0);
    }

    #[test]
    fn rejects_discontinuous_pieces() {
        let p1 = SmoothPiece::affine(0.0, 0.5, 1.0, 0.0).unwrap();
        let p2 = SmoothPiece::affine(0.5, 1.0, 1.0, 1.0).unwrap();
        assert!(Bv1d::new(0.0, vec![p1, p2], JumpSet::empty(), vec![], unit()).is_err());
    }
}
