//! Cantor function: the functional stays above `2/(γ+1) |Du| = 1` and
//! oscillates without settling.

use bvlab::bvcalc::{Bv1d, OpenSet1D};
use bvlab::evaluator::{geometric_grid, lambda_sweep, EvalOptions, Tolerance};

fn main() -> bvlab::Result<()> {
    let dom = OpenSet1D::unit();
    let u = Bv1d::cantor(0.0, 1.0, 1.0, dom.clone())?;
    let opts = EvalOptions { tol: Tolerance::Relative(1e-3), ..EvalOptions::default() };
    let s = lambda_sweep(&u, &dom, 1.0, &geometric_grid(1e2, 1e5, 7)?, &opts)?;
    for r in &s.rows {
        println!(
            "lambda {:>9.3e}  F {:.5} ± {:.1e}  cells {:>8}  {:.0} ms",
            r.lambda, r.estimate.value, r.estimate.error_bound, r.estimate.cells_boundary, r.runtime_ms
        );
    }
    println!("tail min {:.5} >= 1, tail max {:.5}", s.tail.min, s.tail.max);
    Ok(())
}
