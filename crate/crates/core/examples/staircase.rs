//! Coarea staircase of an oscillating function: levels per slot are chosen
//! to minimise the perimeter of the superlevel set.

use bvlab::bvcalc::ops::l1_distance;
use bvlab::bvcalc::{variation_decomposition, Bv1d, JumpSet, OpenSet1D, PieceForm, SmoothPiece};
use bvlab::recovery::{staircase_levels, StaircaseParams};

fn main() -> bvlab::Result<()> {
    let dom = OpenSet1D::unit();
    let wave = SmoothPiece::new((0.0, 1.0), PieceForm::ScaledSine { amplitude: 0.8, frequency: 9.0, phase: 0.0 })?;
    let u = Bv1d::new(0.0, vec![wave], JumpSet::single(0.6, 0.5), vec![], dom.clone())?;
    let var = variation_decomposition(&u, &dom)?.total();
    for k in [8, 32, 128] {
        let p = StaircaseParams::new(1.5, k);
        let (s, levels) = staircase_levels(&u, &p)?;
        let vs = variation_decomposition(&s, &dom)?.total();
        println!(
            "k {k:>3}: step {:.4}, l1 {:.2e}, |Du_ε| {:.5} <= |Du| {:.5}, {} jumps, first levels {:?}",
            p.step(),
            l1_distance(&s, &u, &dom)?,
            vs,
            var,
            s.jumps().len(),
            &levels[..3.min(levels.len())]
        );
    }
    Ok(())
}
