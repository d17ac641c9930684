//! Mollification of a step, a ramp and the Cantor function, with L¹ and
//! area gaps as `δ` shrinks.

use bvlab::bvcalc::{area_strict_gap, variation_decomposition, Bv1d, OpenSet1D};
use bvlab::recovery::mollify;

fn main() -> bvlab::Result<()> {
    let dom = OpenSet1D::unit();
    let cases = [
        ("ramp", Bv1d::affine(1.0, 0.0, dom.clone())?),
        ("step", Bv1d::step(0.5, 1.0, dom.clone())?),
        ("cantor", Bv1d::cantor(0.0, 1.0, 1.0, dom.clone())?),
    ];
    for (name, u) in &cases {
        for delta in [0.1, 0.03, 0.01] {
            let v = mollify(u, delta)?;
            let (l1, area) = area_strict_gap(&v, u, &dom)?;
            let var = variation_decomposition(&v, v.domain())?.total();
            println!("{name:<7} δ {delta:<5} |Dv| {var:.6}  l1 {l1:.2e}  area gap {area:.2e}");
        }
    }
    Ok(())
}
