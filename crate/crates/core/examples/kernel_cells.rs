//! `ν_γ` of rectangles in closed form, checked against brute-force midpoint
//! sums, and the sphere constants `C_n`.

use bvlab::kernel::{nu_gamma_cell, Cell};
use bvlab::slicer::c_n;

fn main() -> bvlab::Result<()> {
    let cells = [((0.0, 1.0), (0.0, 1.0)), ((0.0, 0.5), (0.7, 1.0)), ((-1.0, 0.2), (0.1, 0.3))];
    for gamma in [0.5, 1.0, 2.5] {
        for &(x, y) in &cells {
            let c = Cell::new(x, y)?;
            let exact = nu_gamma_cell(&c, gamma)?;
            let n = 1500;
            let (hx, hy) = ((x.1 - x.0) / n as f64, (y.1 - y.0) / n as f64);
            let mut sum = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let d = ((x.0 + (i as f64 + 0.5) * hx) - (y.0 + (j as f64 + 0.5) * hy)).abs();
                    if d > 0.0 {
                        sum += d.powf(gamma - 1.0);
                    }
                }
            }
            println!("gamma {gamma:<4} {x:?}×{y:?}: closed {exact:.8}  midpoint {:.8}", sum * hx * hy);
        }
    }
    for n in 1..=4 {
        println!("C_{n} = {:.10}", c_n(n)?);
    }
    Ok(())
}
