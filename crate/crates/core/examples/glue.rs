//! Partition-of-unity gluing of a step and a ramp, with the Leibniz bounds
//! on the jump and absolutely continuous parts.

use bvlab::bvcalc::{variation_decomposition, Bv1d, OpenSet1D};
use bvlab::recovery::{glue, Cutoff};

fn main() -> bvlab::Result<()> {
    let dom = OpenSet1D::unit();
    let w = Bv1d::step(0.5, 1.0, dom.clone())?;
    let v = Bv1d::affine(1.0, 0.0, dom.clone())?;
    for eta in [Cutoff::Zero, Cutoff::One, Cutoff::Ramp { from: 0.4, to: 0.6 }, Cutoff::Window { rise: (0.1, 0.3), fall: (0.7, 0.9) }] {
        let g = glue(&eta, &w, &v)?;
        let d = variation_decomposition(&g.u, &dom)?;
        println!(
            "{eta:?}\n  |D^j| {:.6} <= {:.6}   |D^a| {:.6} <= {:.6}   value at 0.45: {:.6}",
            d.jump, g.jump_bound, d.abs, g.ac_bound, g.u.value(0.45)
        );
    }
    Ok(())
}
