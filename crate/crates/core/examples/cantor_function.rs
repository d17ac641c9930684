//! The Cantor function: exact ternary evaluation, its measure on intervals
//! and its integral.

use bvlab::bvcalc::{cantor, cantor_integral, signed_measure, Bv1d, OpenSet1D};

fn main() -> bvlab::Result<()> {
    for x in [0.25, 1.0 / 3.0, 0.5, 0.75, 0.8, 0.9] {
        println!("C({x:.6}) = {:.15}   ∫_0^x C = {:.15}", cantor(x), cantor_integral(x));
    }
    let u = Bv1d::cantor(0.0, 1.0, 1.0, OpenSet1D::unit())?;
    for (a, b) in [(0.0, 1.0 / 3.0), (1.0 / 3.0, 2.0 / 3.0), (0.2, 0.8)] {
        println!("Du(({a:.4}, {b:.4}]) = {:.12}", signed_measure(&u, a, b)?);
    }
    Ok(())
}
