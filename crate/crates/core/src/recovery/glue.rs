//! Partition-of-unity gluing `η w + (1 - η) v`.

use serde::{Deserialize, Serialize};

use crate::bvcalc::smooth::{Poly, Smooth};
use crate::bvcalc::{Bv1d, JumpSet};
use crate::error::{param, Error, Result};
use crate::quad::integrate;

/// Smooth cutoff `η` with values in `[0, 1]` built from quintic
/// smoothsteps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cutoff {
    Zero,
    One,
    /// 0 left of `from`, 1 right of `to`.
    Ramp { from: f64, to: f64 },
    /// Rises on `rise`, equals 1 in between, falls on `fall`.
    Window { rise: (f64, f64), fall: (f64, f64) },
}

fn smoothstep(a: f64, b: f64, up: bool) -> Poly {
    let w = b - a;
    let s = Poly::new(a, vec![0.0, 0.0, 0.0, 10.0 / w.powi(3), -15.0 / w.powi(4), 6.0 / w.powi(5)]);
    if up {
        s
    } else {
        Poly::constant(1.0).add(&s.scale(-1.0))
    }
}

impl Cutoff {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Cutoff::Zero | Cutoff::One => true,
            Cutoff::Ramp { from, to } => from < to,
            Cutoff::Window { rise, fall } => rise.0 < rise.1 && rise.1 <= fall.0 && fall.0 < fall.1,
        };
        if ok {
            Ok(())
        } else {
            param(format!("malformed cutoff {self:?}"))
        }
    }

    /// Knots and polynomial pieces; pieces are indexed by the knot interval.
    fn pieces(&self) -> (Vec<f64>, Vec<Poly>) {
        let (zero, one) = (Poly::zero(), Poly::constant(1.0));
        match *self {
            Cutoff::Zero => (vec![], vec![zero]),
            Cutoff::One => (vec![], vec![one]),
            Cutoff::Ramp { from, to } => (vec![from, to], vec![zero, smoothstep(from, to, true), one]),
            Cutoff::Window { rise, fall } => (
                vec![rise.0, rise.1, fall.0, fall.1],
                vec![zero.clone(), smoothstep(rise.0, rise.1, true), one, smoothstep(fall.0, fall.1, false), zero],
            ),
        }
    }

    fn piece_at(&self, x: f64) -> Poly {
        let (knots, polys) = self.pieces();
        polys[knots.partition_point(|&k| k <= x)].clone()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.piece_at(x).eval(x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        self.piece_at(x).deriv().eval(x)
    }
}

/// Glued function with the Leibniz-rule bounds on its derivative parts.
#[derive(Clone, Debug)]
pub struct GlueResult {
    pub u: Bv1d,
    /// `∫ η d|D^j w| + ∫ (1 - η) d|D^j v|`.
    pub jump_bound: f64,
    /// `∫ η |w'| + (1 - η) |v'| + |η'| |w - v|`.
    pub ac_bound: f64,
}

fn ac_poly(u: &Bv1d, x: f64) -> Result<Poly> {
    let segs = &u.ac.segs;
    let i = segs.partition_point(|s| s.hi <= x);
    match segs.get(i).filter(|s| s.lo <= x) {
        None => Ok(Poly::constant(u.ac_value(x))),
        Some(s) if s.f.is_poly() => Ok(s.f.poly.clone()),
        Some(_) => Err(Error::UnsupportedForm("gluing needs polynomial pieces; products with sines leave the catalog".into())),
    }
}

pub fn glue(eta: &Cutoff, w: &Bv1d, v: &Bv1d) -> Result<GlueResult> {
    eta.validate()?;
    if w.domain() != v.domain() {
        return param("glued functions must share a domain");
    }
    if !w.domain().is_bounded() {
        return param("gluing needs a bounded domain");
    }
    if w.has_cantor() || v.has_cantor() {
        return Err(Error::UnsupportedForm("gluing is defined for SBV pieces without Cantor parts".into()));
    }
    let dom = w.domain().clone();
    let (lo, hi) = (dom.inf(), dom.sup());
    let mut cuts = vec![lo, hi];
    cuts.extend(eta.pieces().0);
    cuts.extend(w.breakpoints());
    cuts.extend(v.breakpoints());
    cuts.retain(|&x| lo <= x && x <= hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let jump_at = |u: &Bv1d, x: f64| u.jumps().iter().filter(|&(p, _)| p == x).map(|(_, h)| h).sum::<f64>();
    let mut raw: Vec<(f64, f64, Smooth)> = Vec::with_capacity(cuts.len());
    let mut jumps = Vec::new();
    let mut prev: Option<Poly> = None;
    let mut offset = 0.0;
    for iv in cuts.windows(2) {
        let (a, b) = (iv[0], iv[1]);
        let m = 0.5 * (a + b);
        let e = eta.piece_at(m);
        let pw = ac_poly(w, m)?.add(&Poly::constant(w.right_limit(m) - w.ac_value(m)));
        let pv = ac_poly(v, m)?.add(&Poly::constant(v.right_limit(m) - v.ac_value(m)));
        let one_minus = Poly::constant(1.0).add(&e.scale(-1.0));
        let g = e.mul(&pw).add(&one_minus.mul(&pv)).recenter(a);
        if let Some(p) = &prev {
            let (hw, hv) = (jump_at(w, a), jump_at(v, a));
            if hw != 0.0 || hv != 0.0 {
                jumps.push((a, eta.eval(a) * hw + (1.0 - eta.eval(a)) * hv));
            }
            // the AC part absorbs every step so it stays continuous; away
            // from jumps the step is rounding only
            offset += g.eval(a) - p.eval(a);
        }
        raw.push((a, b, Smooth::from_poly(g.add(&Poly::constant(-offset)))));
        prev = Some(g);
    }
    let u = Bv1d::from_raw(0.0, raw, JumpSet::new(jumps)?, vec![], dom.clone())?.with_truncation(w.truncation());

    let jump_bound = w.jumps().iter().filter(|&(p, _)| dom.contains(p)).map(|(p, h)| eta.eval(p) * h.abs()).sum::<f64>()
        + v.jumps().iter().filter(|&(p, _)| dom.contains(p)).map(|(p, h)| (1.0 - eta.eval(p)) * h.abs()).sum::<f64>();
    let ac_bound = cuts
        .windows(2)
        .map(|iv| {
            let f = |x: f64| {
                let e = eta.eval(x);
                e * w.ac_deriv(x).abs() + (1.0 - e) * v.ac_deriv(x).abs() + eta.deriv(x).abs() * (w.value(x) - v.value(x)).abs()
            };
            integrate(f, iv[0], iv[1], 1e-13).0
        })
        .sum();
    Ok(GlueResult { u, jump_bound, ac_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvcalc::{variation_decomposition, OpenSet1D, PieceForm, SmoothPiece};

    fn pair() -> (Bv1d, Bv1d) {
        let dom = OpenSet1D::unit();
        (Bv1d::step(0.5, 1.0, dom.clone()).unwrap(), Bv1d::affine(2.0, -0.5, dom).unwrap())
    }

    #[test]
    fn trivial_cutoffs_select_one_side() {
        let (w, v) = pair();
        let z = glue(&Cutoff::Zero, &w, &v).unwrap().u;
        let o = glue(&Cutoff::One, &w, &v).unwrap().u;
        for x in [0.1, 0.4, 0.7] {
            assert!((z.value(x) - v.value(x)).abs() < 1e-12);
            assert!((o.value(x) - w.value(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn leibniz_bounds_hold() {
        let (w, v) = pair();
        let eta = Cutoff::Window { rise: (0.2, 0.4), fall: (0.6, 0.8) };
        let g = glue(&eta, &w, &v).unwrap();
        let d = variation_decomposition(&g.u, &OpenSet1D::unit()).unwrap();
        assert!(d.jump <= g.jump_bound + 1e-12);
        assert!(d.abs <= g.ac_bound + 1e-9);
        for x in [0.3, 0.55, 0.75] {
            let e = eta.eval(x);
            assert!((g.u.value(x) - (e * w.value(x) + (1.0 - e) * v.value(x))).abs() < 1e-10);
        }
    }

    #[test]
    fn sine_pieces_are_unsupported() {
        let dom = OpenSet1D::unit();
        let p = SmoothPiece::new((0.0, 1.0), PieceForm::ScaledSine { amplitude: 1.0, frequency: 2.0, phase: 0.0 }).unwrap();
        let s = Bv1d::new(0.0, vec![p], JumpSet::empty(), vec![], dom.clone()).unwrap();
        let w = Bv1d::constant(1.0, dom);
        assert!(matches!(glue(&Cutoff::Ramp { from: 0.3, to: 0.6 }, &w, &s), Err(Error::UnsupportedForm(_))));
    }
}
