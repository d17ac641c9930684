//! Indicator of a disk in the plane: sliced evaluation, the exact jump
//! limit `C_2/(γ+1) · perimeter`, and the direct Monte Carlo oracle.

use bvlab::slicer::{c_n, f_eval_2d_mc, f_eval_2d_report, variation_decomposition_2d, Bv2d, Form2D, Region, SliceQuadrature};

fn main() -> bvlab::Result<()> {
    let u = Bv2d::new(Form2D::indicator(Region::disk([0.0, 0.0], 0.3)?, 1.0), Region::centered_square(1.0)?);
    let d = variation_decomposition_2d(&u)?;
    let limit = c_n(2)? / 2.0 * d.jump;
    for lambda in [1e2, 1e3] {
        let r = f_eval_2d_report(&u, 1.0, lambda, &SliceQuadrature::default())?;
        let (mc, se) = f_eval_2d_mc(&u, 1.0, lambda, 2_000_000, 7)?;
        println!(
            "lambda {lambda:.0e}: sliced {:.5} (angular {:.1e}, {} offsets)  MC {:.5} ± {:.5}  limit {:.5}",
            r.estimate.value, r.angular_error, r.n_offsets, mc, se, limit
        );
    }
    Ok(())
}
