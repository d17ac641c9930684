//! Coarea staircase `u_ε = -M + Σ_j (2M/k) 1_{E_{t_j}}`.

use serde::{Deserialize, Serialize};

use crate::bvcalc::levelset::{count_crossings, critical_levels, level_is_degenerate, superlevel_intervals};
use crate::bvcalc::{Bv1d, JumpSet};
use crate::error::{param, Result};
use crate::slicer::{Bv2d, Form2D};

/// Staircase parameters: levels cover `[-m, m]` in `k` slots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseParams {
    pub m: f64,
    pub k: usize,
    pub level_samples: usize,
    /// Target accuracy `ε`; when set, `2M/k < min(1, ε/|Ω|)` is enforced.
    pub target_eps: Option<f64>,
}

impl StaircaseParams {
    pub fn new(m: f64, k: usize) -> Self {
        Self { m, k, level_samples: 33, target_eps: None }
    }

    pub fn step(&self) -> f64 {
        2.0 * self.m / self.k as f64
    }

    fn validate(&self, measure: f64) -> Result<()> {
        if !(self.m > 0.0 && self.m.is_finite()) {
            return param(format!("staircase level M must be positive, got {}", self.m));
        }
        if self.k == 0 || self.level_samples == 0 {
            return param("staircase needs k >= 1 and level_samples >= 1");
        }
        if let Some(eps) = self.target_eps {
            let bound = 1f64.min(eps / measure);
            if !(self.step() < bound) {
                let required = (2.0 * self.m / bound).floor() as usize + 1;
                return param(format!("k = {} is too small for ε = {eps}: need k >= {required}", self.k));
            }
        }
        Ok(())
    }
}

/// Jump-only approximation with levels chosen per slot to minimise the
/// perimeter of `{u > t}`.
pub fn staircase(u: &Bv1d, params: &StaircaseParams) -> Result<Bv1d> {
    Ok(staircase_levels(u, params)?.0)
}

/// [`staircase`] together with the selected levels `t_j`.
pub fn staircase_levels(u: &Bv1d, params: &StaircaseParams) -> Result<(Bv1d, Vec<f64>)> {
    let dom = u.working_domain(u.domain())?;
    params.validate(dom.measure())?;
    let h = params.step();
    let crit = critical_levels(u)?;
    let (pos, neg) = u.variation_open(dom.inf(), dom.sup());
    // between critical levels the count is constant unless u mixes Cantor
    // mass with variation of both signs
    let piecewise_constant = !u.has_cantor() || pos == 0.0 || neg == 0.0;
    let mut jumps: Vec<(f64, f64)> = Vec::new();
    let mut base = -params.m;
    let mut levels = Vec::with_capacity(params.k);
    for j in 0..params.k {
        let lo = -params.m + j as f64 * h;
        let hi = lo + h;
        let t = select_level(u, &crit, lo, hi, params.level_samples, piecewise_constant)?;
        levels.push(t);
        for (a, b) in superlevel_intervals(u, t)? {
            // steps at the outer boundary only shift the base value
            if a <= dom.inf() {
                base += h;
            } else {
                jumps.push((a, h));
            }
            if b < dom.sup() {
                jumps.push((b, -h));
            }
        }
    }
    let out = Bv1d::from_raw(base, vec![], JumpSet::new(jumps)?, vec![], u.domain().clone())?;
    Ok((out.with_truncation(u.truncation()), levels))
}

fn select_level(u: &Bv1d, crit: &[f64], lo: f64, hi: f64, samples: usize, piecewise_constant: bool) -> Result<f64> {
    let inner: Vec<f64> = crit.iter().copied().filter(|&c| lo < c && c < hi).collect();
    let mut cands = Vec::new();
    let mut edges = vec![lo];
    edges.extend(&inner);
    edges.push(hi);
    cands.extend(edges.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    if !piecewise_constant {
        let w = (hi - lo) / samples as f64;
        cands.extend((0..samples).map(|i| lo + (i as f64 + 0.5) * w));
    }
    cands.sort_by(f64::total_cmp);
    let mut best: Option<(usize, f64)> = None;
    for &t in &cands {
        if level_is_degenerate(crit, t) {
            continue;
        }
        let n = count_crossings(u, t)?;
        if best.is_none_or(|(bn, _)| n < bn) {
            best = Some((n, t));
        }
    }
    Ok(best.map_or(0.5 * (lo + hi), |b| b.1))
}

/// Staircase applied through a planar form: ridge profiles and Cantor
/// sheets are staircased, indicator forms are already jump-only.
pub fn staircase_2d(u: &Bv2d, params: &StaircaseParams) -> Result<Bv2d> {
    fn go(f: &Form2D, p: &StaircaseParams, dom: &crate::slicer::Region) -> Result<Form2D> {
        Ok(match f {
            Form2D::Ridge { profile, direction } => {
                let (a, b) = dom.projection(*direction);
                let prof = profile.with_domain(crate::bvcalc::OpenSet1D::interval(a, b)?);
                Form2D::Ridge { profile: staircase(&prof, p)?, direction: *direction }
            }
            Form2D::CantorSheet { mass, axis } => {
                let (a, b) = dom.projection(*axis);
                let prof = Bv1d::cantor(0.0, 1.0, *mass, crate::bvcalc::OpenSet1D::interval(a, b)?)?;
                Form2D::Ridge { profile: staircase(&prof, p)?, direction: *axis }
            }
            Form2D::Radial { .. } | Form2D::Indicator { .. } => f.clone(),
            Form2D::Sum(parts) => {
                return crate::error::param(format!(
                    "staircase of a sum of {} forms is not a catalog form; staircase each part",
                    parts.len()
                ))
            }
        })
    }
    Ok(Bv2d::new(go(&u.form, params, &u.domain)?, u.domain.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvcalc::ops::l1_distance;
    use crate::bvcalc::{variation_decomposition, OpenSet1D};
    use crate::error::Error;

    #[test]
    fn aligned_staircase_is_fixed() {
        // -1 + 0.5·(1_{x>0.2} + 1_{x>0.5} + 1_{x>0.7}) with M = 1, k = 4
        let jumps = JumpSet::new(vec![(0.2, 0.5), (0.5, 0.5), (0.7, 0.5)]).unwrap();
        let u = Bv1d::new(-1.0, vec![], jumps, vec![], OpenSet1D::unit()).unwrap();
        let s = staircase(&u, &StaircaseParams::new(1.0, 4)).unwrap();
        for x in [0.1, 0.3, 0.6, 0.9] {
            assert!((s.value(x) - u.value(x)).abs() < 1e-12);
        }
        assert_eq!(s.jumps().len(), 3);
    }

    #[test]
    fn ramp_staircase_gaps() {
        let dom = OpenSet1D::unit();
        let u = Bv1d::affine(1.0, 0.0, dom.clone()).unwrap();
        let eps = 0.05;
        let p = StaircaseParams { target_eps: Some(eps), ..StaircaseParams::new(2.0, 81) };
        let s = staircase(&u, &p).unwrap();
        assert!(l1_distance(&s, &u, &dom).unwrap() <= 4.0 * eps);
        let ds = variation_decomposition(&s, &dom).unwrap();
        assert!(ds.abs == 0.0 && ds.cantor == 0.0);
        assert!(ds.jump <= 1.0 + 1e-12);
    }

    #[test]
    fn too_few_slots_names_the_requirement() {
        let u = Bv1d::affine(1.0, 0.0, OpenSet1D::unit()).unwrap();
        let p = StaircaseParams { target_eps: Some(0.05), ..StaircaseParams::new(2.0, 10) };
        match staircase(&u, &p) {
            Err(Error::Parameter(msg)) => assert!(msg.contains("k >= 81"), "{msg}"),
            other => panic!("expected a parameter error, got {other:?}"),
        }
    }

    #[test]
    fn oscillating_profile_prefers_short_perimeters() {
        use crate::bvcalc::{PieceForm, SmoothPiece};
        // sin with a plateau: levels near the peak have fewer crossings
        let piece = SmoothPiece::new((0.0, 1.0), PieceForm::ScaledSine { amplitude: 1.0, frequency: 3.0 * std::f64::consts::PI, phase: 0.0 }).unwrap();
        let u = Bv1d::new(0.0, vec![piece], JumpSet::empty(), vec![], OpenSet1D::unit()).unwrap();
        let (s, levels) = staircase_levels(&u, &StaircaseParams::new(2.0, 16)).unwrap();
        let d = variation_decomposition(&s, &OpenSet1D::unit()).unwrap();
        let du = variation_decomposition(&u, &OpenSet1D::unit()).unwrap();
        assert!(d.jump <= du.total() + 1e-9);
        assert_eq!(levels.len(), 16);
    }
}
