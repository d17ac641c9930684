//! Superlevel sets, crossing counts and truncation of a BV function.

use bvlab::bvcalc::{level_crossings, superlevel_intervals, truncate, variation_decomposition, Bv1d, JumpSet, OpenSet1D, PieceForm, SmoothPiece};

fn main() -> bvlab::Result<()> {
    let dom = OpenSet1D::unit();
    let wave = SmoothPiece::new((0.0, 1.0), PieceForm::ScaledSine { amplitude: 1.0, frequency: 12.0, phase: 0.0 })?;
    let u = Bv1d::new(0.0, vec![wave], JumpSet::single(0.5, 1.5), vec![], dom.clone())?;
    for t in [-0.5, 0.3, 1.2, 2.0] {
        let e = superlevel_intervals(&u, t)?;
        println!("t {t:>4}: {} crossings, {{u > t}} = {:?}", level_crossings(&u, t)?, e);
    }
    match level_crossings(&u, 1.0) {
        Ok(n) => println!("t = 1: {n}"),
        Err(e) => println!("t = 1: {e}"),
    }
    let tr = truncate(&u, 0.75)?;
    println!("|Du| = {:.6}, |D T_0.75 u| = {:.6}", variation_decomposition(&u, &dom)?.total(), variation_decomposition(&tr, &dom)?.total());
    Ok(())
}
