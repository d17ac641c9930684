//! Superlevel sets, level-crossing counts and value truncation.

use super::bv1d::Bv1d;
use crate::error::{param, Error, Result};

const LEAF: f64 = 1e-13;
const SNAP: f64 = 1e-12;

/// Splits `(lo, hi)` into maximal runs of constant class.
///
/// `classify` maps a range enclosure to a class or `None` when undecided;
/// undecided intervals are bisected down to width ~1e-13 and then classified
/// by `leaf` from the value at their midpoint.
pub(crate) fn runs<C, L>(u: &Bv1d, lo: f64, hi: f64, classify: C, leaf: L) -> Vec<(f64, f64, u8)>
where
    C: Fn(f64, f64) -> Option<u8>,
    L: Fn(f64) -> u8,
{
    let mut cuts = vec![lo];
    cuts.extend(u.breakpoints().into_iter().filter(|&x| lo < x && x < hi));
    cuts.push(hi);
    let mut out: Vec<(f64, f64, u8)> = Vec::new();
    let mut push = |a: f64, b: f64, c: u8| match out.last_mut() {
        Some(last) if last.2 == c => last.1 = b,
        _ => out.push((a, b, c)),
    };
    for w in cuts.windows(2) {
        let mut stack = vec![(w[0], w[1])];
        while let Some((p, q)) = stack.pop() {
            let (a, b) = u.range_open(p, q);
            if let Some(c) = classify(a, b) {
                push(p, q, c);
                continue;
            }
            let m = 0.5 * (p + q);
            if q - p <= LEAF * (1.0 + p.abs()) || m <= p || m >= q {
                push(p, q, leaf(u.right_limit(m)));
                continue;
            }
            stack.push((m, q));
            stack.push((p, m));
        }
    }
    let jumps = u.jumps().locations();
    for i in 1..out.len() {
        let x = out[i].0;
        let j = jumps.partition_point(|&p| p < x - SNAP);
        if let Some(&p) = jumps.get(j) {
            if (p - x).abs() <= SNAP && out[i - 1].0 < p && p < out[i].1 {
                out[i - 1].1 = p;
                out[i].0 = p;
            }
        }
    }
    out
}

/// Open intervals of the working domain on which `u > t` (up to null sets).
pub fn superlevel_intervals(u: &Bv1d, t: f64) -> Result<Vec<(f64, f64)>> {
    let dom = u.working_domain(u.domain())?;
    let mut out = Vec::new();
    for &(lo, hi) in dom.intervals() {
        let r = runs(
            u,
            lo,
            hi,
            |a, b| {
                if a > t {
                    Some(1)
                } else if b <= t {
                    Some(0)
                } else {
                    None
                }
            },
            |v| u8::from(v > t),
        );
        out.extend(r.into_iter().filter(|r| r.2 == 1).map(|r| (r.0, r.1)));
    }
    Ok(out)
}

/// Values at which the crossing count of `{u > t}` may change: one-sided
/// limits at jumps, boundary limits, and values at critical points and
/// breakpoints of the smooth part.
pub fn critical_levels(u: &Bv1d) -> Result<Vec<f64>> {
    let dom = u.working_domain(u.domain())?;
    let mut v = Vec::new();
    for &(lo, hi) in dom.intervals() {
        v.push(u.right_limit(lo));
        v.push(u.left_limit(hi));
        for p in u.jumps().locations().iter().filter(|&&p| lo < p && p < hi) {
            v.push(u.left_limit(*p));
            v.push(u.right_limit(*p));
        }
        for s in &u.ac.segs {
            for &c in s.critical_points().iter().chain([s.lo, s.hi].iter()) {
                if lo < c && c < hi {
                    v.push(u.left_limit(c));
                    v.push(u.right_limit(c));
                }
            }
        }
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

fn is_degenerate(levels: &[f64], t: f64) -> bool {
    let eps = SNAP * (1.0 + t.abs());
    let i = levels.partition_point(|&v| v < t - eps);
    levels.get(i).is_some_and(|&v| (v - t).abs() <= eps)
}

/// Number of essential boundary points of `{u > t}` inside the domain.
///
/// Fails with [`Error::DegenerateLevel`] when `t` coincides with a jump
/// limit, a boundary limit or an extremal value of the smooth part.
pub fn level_crossings(u: &Bv1d, t: f64) -> Result<usize> {
    let levels = critical_levels(u)?;
    if is_degenerate(&levels, t) {
        return Err(Error::DegenerateLevel(t));
    }
    count_crossings(u, t)
}

pub(crate) fn count_crossings(u: &Bv1d, t: f64) -> Result<usize> {
    let dom = u.working_domain(u.domain())?;
    let e = superlevel_intervals(u, t)?;
    let interior = |x: f64| dom.intervals().iter().all(|&(a, b)| x != a && x != b);
    Ok(e.iter().map(|&(a, b)| usize::from(interior(a)) + usize::from(interior(b))).sum())
}

pub(crate) fn level_is_degenerate(levels: &[f64], t: f64) -> bool {
    is_degenerate(levels, t)
}

/// Value truncation `max(min(u, n), -n)`.
pub fn truncate(u: &Bv1d, n: f64) -> Result<Bv1d> {
    if !(n > 0.0) {
        return param(format!("truncation level must be positive, got {n}"));
    }
    let dom = u.working_domain(u.domain())?;
    let clamp = |v: f64| v.clamp(-n, n);
    let (lo, hi) = (dom.inf(), dom.sup());
    let whole = u.range_open(lo, hi);
    if whole.0 >= -n && whole.1 <= n {
        return Ok(u.clone());
    }
    // 0: below, 1: inside, 2: above
    let r = runs(
        u,
        lo,
        hi,
        |a, b| {
            if a >= -n && b <= n {
                Some(1)
            } else if a >= n {
                Some(2)
            } else if b <= -n {
                Some(0)
            } else {
                None
            }
        },
        |v| if v > n { 2 } else if v < -n { 0 } else { 1 },
    );
    let keep: Vec<(f64, f64)> = r.iter().filter(|r| r.2 == 1).map(|r| (r.0, r.1)).collect();
    let inside = |x: f64| keep.iter().any(|&(a, b)| a < x && x < b);
    let atoms: Vec<(f64, f64)> = u
        .jumps()
        .iter()
        .filter(|&(p, _)| !inside(p))
        .map(|(p, _)| (p, clamp(u.right_limit(p)) - clamp(u.left_limit(p))))
        .filter(|&(_, h)| h != 0.0)
        .collect();
    u.rebuild_restricted(&keep, atoms, lo, clamp(u.right_limit(lo)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvcalc::openset::OpenSet1D;

    #[test]
    fn crossing_examples() {
        let unit = OpenSet1D::unit();
        let id = Bv1d::affine(1.0, 0.0, unit.clone()).unwrap();
        assert_eq!(level_crossings(&id, 0.5).unwrap(), 1);
        let h = Bv1d::step(0.5, 1.0, unit.clone()).unwrap();
        assert_eq!(level_crossings(&h, 0.5).unwrap(), 1);
        let c = Bv1d::cantor(0.0, 1.0, 1.0, unit.clone()).unwrap();
        assert_eq!(level_crossings(&c, 0.5).unwrap(), 1);
        let e = superlevel_intervals(&c, 0.5).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0].0 - 2.0 / 3.0).abs() < 1e-12);
        assert!(matches!(level_crossings(&h, 1.0), Err(Error::DegenerateLevel(_))));
    }

    #[test]
    fn truncation_examples() {
        let unit = OpenSet1D::unit();
        let u = Bv1d::affine(2.0, 0.0, unit.clone()).unwrap();
        let t = truncate(&u, 1.0).unwrap();
        assert!((t.right_limit(0.25) - 0.5).abs() < 1e-12);
        assert!((t.right_limit(0.75) - 1.0).abs() < 1e-12);
        let (p, n) = t.variation_open(0.0, 1.0);
        assert!((p - 1.0).abs() < 1e-12 && n == 0.0);

        let c = Bv1d::cantor(0.0, 1.0, 3.0, unit.clone()).unwrap();
        let t = truncate(&c, 1.0).unwrap();
        let (p, _) = t.variation_open(0.0, 1.0);
        assert!((p - 1.0).abs() < 1e-9, "{p}");
        assert!(t.jumps().is_empty());

        let h = Bv1d::step(0.5, 3.0, unit).unwrap().add_constant(-1.0);
        let t = truncate(&h, 1.0).unwrap();
        assert_eq!(t.right_limit(0.2), -1.0);
        assert_eq!(t.right_limit(0.7), 1.0);
    }
}
