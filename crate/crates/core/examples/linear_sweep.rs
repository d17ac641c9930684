//! λ-sweep of `u(x) = x` on `(0, 1)` against the closed form
//! `(2/γ)(1 - γ λ^{-1/γ} / (γ + 1))`.

use bvlab::bvcalc::{Bv1d, OpenSet1D};
use bvlab::evaluator::{geometric_grid, lambda_sweep, EvalOptions};

fn main() -> bvlab::Result<()> {
    let dom = OpenSet1D::unit();
    let u = Bv1d::affine(1.0, 0.0, dom.clone())?;
    let grid = geometric_grid(1e2, 1e6, 9)?;
    for gamma in [0.5, 1.0, 2.0] {
        let s = lambda_sweep(&u, &dom, gamma, &grid, &EvalOptions::default())?;
        println!("gamma = {gamma}");
        for r in &s.rows {
            let closed = 2.0 / gamma * (1.0 - gamma * r.lambda.powf(-1.0 / gamma) / (gamma + 1.0));
            println!("  lambda {:>9.3e}  F {:.8}  closed {:.8}  err {:.1e}", r.lambda, r.estimate.value, closed, r.estimate.error_bound);
        }
        println!("  tail [{:.6}, {:.6}], limit {}", s.tail.min, s.tail.max, 2.0 / gamma);
    }
    Ok(())
}
