//! Derivative decomposition, signed measures and the area functional.

use serde::{Deserialize, Serialize};

use super::bv1d::Bv1d;
use super::levelset::runs;
use super::openset::OpenSet1D;
use crate::error::{domain, Result};
use crate::quad;

/// Masses of the absolutely continuous, jump and Cantor parts of `Du`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DerivDecomp {
    pub abs: f64,
    pub jump: f64,
    pub cantor: f64,
}

impl DerivDecomp {
    pub fn total(&self) -> f64 {
        self.abs + self.jump + self.cantor
    }

    pub fn singular(&self) -> f64 {
        self.jump + self.cantor
    }
}

/// `|D^a u|(W)`, `|D^j u|(W)`, `|D^c u|(W)`.
pub fn variation_decomposition(u: &Bv1d, w: &OpenSet1D) -> Result<DerivDecomp> {
    w.require_subset_of(u.domain())?;
    let mut d = DerivDecomp::default();
    for &(a, b) in w.intervals() {
        let (p, n) = u.ac.var(a, b);
        d.abs += p + n;
        let (p, n) = u.jumps_open(a, b);
        d.jump += p + n;
        for c in u.cantor_components() {
            d.cantor += c.measure(a, b).abs();
        }
    }
    Ok(d)
}

/// `Du((a, b])`.
pub fn signed_measure(u: &Bv1d, a: f64, b: f64) -> Result<f64> {
    if !(a <= b) || !u.domain().closure_contains(a) || !u.domain().closure_contains(b) {
        return domain(format!("({a}, {b}] is not inside the domain closure"));
    }
    Ok(u.measure_half_open(a, b))
}

/// `∫_W sqrt(1 + u'^2) dx + |D^s u|(W)`; unbounded `W` is truncated.
pub fn area_functional(u: &Bv1d, w: &OpenSet1D) -> Result<f64> {
    let d = variation_decomposition(u, w)?;
    let wt = u.working_domain(w)?;
    Ok(ac_area(u, &wt) + d.singular())
}

fn ac_area(u: &Bv1d, w: &OpenSet1D) -> f64 {
    let mut total = 0.0;
    for &(a, b) in w.intervals() {
        let mut covered = 0.0;
        for s in &u.ac.segs {
            let (p, q) = (s.lo.max(a), s.hi.min(b));
            if p >= q {
                continue;
            }
            covered += q - p;
            let (dmin, dmax) = s.deriv_range(p, q);
            if dmin == dmax {
                total += (q - p) * (1.0 + dmin * dmin).sqrt();
            } else {
                let f = |x: f64| {
                    let d = s.df.eval(x);
                    (1.0 + d * d).sqrt()
                };
                total += quad::integrate(f, p, q, 1e-12 * (q - p)).0;
            }
        }
        total += (b - a) - covered;
    }
    total
}

/// `∫_W |v - u| dx`, exact from sign-definite runs.
pub fn l1_distance(v: &Bv1d, u: &Bv1d, w: &OpenSet1D) -> Result<f64> {
    w.require_subset_of(u.domain())?;
    w.require_subset_of(v.domain())?;
    let wt = u.working_domain(w)?;
    let diff = v.add_unchecked(&u.scale(-1.0), wt.clone())?;
    let mut total = 0.0;
    for &(lo, hi) in wt.intervals() {
        let r = runs(
            &diff,
            lo,
            hi,
            |a, b| {
                if a >= 0.0 {
                    Some(1)
                } else if b <= 0.0 {
                    Some(0)
                } else {
                    None
                }
            },
            |x| u8::from(x >= 0.0),
        );
        for (a, b, c) in r {
            let i = diff.integral(a, b);
            total += if c == 1 { i } else { -i };
        }
    }
    Ok(total.max(0.0))
}

/// `(∫_W |v - u|, |A(v, W) - A(u, W)|)`.
pub fn area_strict_gap(v: &Bv1d, u: &Bv1d, w: &OpenSet1D) -> Result<(f64, f64)> {
    let l1 = l1_distance(v, u, w)?;
    let gap = (area_functional(v, w)? - area_functional(u, w)?).abs();
    Ok((l1, gap))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> OpenSet1D {
        OpenSet1D::unit()
    }

    #[test]
    fn decomposition_examples() {
        let u = Bv1d::affine(1.0, 0.0, unit())
            .unwrap()
            .add(&Bv1d::step(0.5, 1.0, unit()).unwrap())
            .unwrap()
            .add(&Bv1d::cantor(0.0, 1.0, 0.7, unit()).unwrap())
            .unwrap();
        let d = variation_decomposition(&u, &unit()).unwrap();
        assert!((d.abs - 1.0).abs() < 1e-14 && d.jump == 1.0 && (d.cantor - 0.7).abs() < 1e-14);
        let c = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
        let d = variation_decomposition(&c, &OpenSet1D::interval(0.0, 1.0 / 3.0).unwrap()).unwrap();
        assert_eq!(d, DerivDecomp { abs: 0.0, jump: 0.0, cantor: 0.5 });
        let k = Bv1d::constant(3.0, unit());
        assert_eq!(variation_decomposition(&k, &unit()).unwrap(), DerivDecomp::default());
        let big = OpenSet1D::interval(0.0, 2.0).unwrap();
        assert!(variation_decomposition(&k, &big).is_err());
    }

    #[test]
    fn signed_measure_examples() {
        let c = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
        assert_eq!(signed_measure(&c, 0.0, 1.0 / 3.0).unwrap(), 0.5);
        assert!(signed_measure(&c, 0.5, 1.5).is_err());
    }

    #[test]
    fn area_examples() {
        let id = Bv1d::affine(1.0, 0.0, unit()).unwrap();
        assert!((area_functional(&id, &unit()).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let h = Bv1d::step(0.5, 1.0, unit()).unwrap();
        assert!((area_functional(&h, &unit()).unwrap() - 2.0).abs() < 1e-12);
        let c = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
        assert!((area_functional(&c, &unit()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gap_examples() {
        let id = Bv1d::affine(1.0, 0.0, unit()).unwrap();
        assert_eq!(area_strict_gap(&id, &id, &unit()).unwrap(), (0.0, 0.0));
        let sh = id.add_constant(0.1);
        let (l1, a) = area_strict_gap(&sh, &id, &unit()).unwrap();
        assert!((l1 - 0.1).abs() < 1e-12 && a.abs() < 1e-12);
        let c = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
        let (l1, _) = area_strict_gap(&c, &id, &unit()).unwrap();
        // ∫|C - x| with ∫C = 1/2: C ≥ x on (0, 1/2) by symmetry
        assert!(l1 > 0.0 && l1 < 0.5);
    }
}
