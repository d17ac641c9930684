//! A single jump: `F` equals `2|h|/(γ + 1)` as soon as the jump's region of
//! influence fits in the domain.

use bvlab::bvcalc::{Bv1d, OpenSet1D};
use bvlab::evaluator::f_eval_default;

fn main() -> bvlab::Result<()> {
    let dom = OpenSet1D::unit();
    let u = Bv1d::step(0.5, 1.0, dom.clone())?;
    for gamma in [0.5, 1.0, 2.0] {
        for lambda in [1.0, 10.0, 1e4] {
            let e = f_eval_default(&u, &dom, gamma, lambda)?;
            println!("gamma {gamma:<4} lambda {lambda:<8} F {:.10}  limit {:.10}", e.value, 2.0 / (gamma + 1.0));
        }
    }
    // x + H(x - 1/2): both parts contribute, 2/γ + 2/(γ+1) = 3 at γ = 1
    let mix = Bv1d::affine(1.0, 0.0, dom.clone())?.add(&u)?;
    let e = f_eval_default(&mix, &dom, 1.0, 1e6)?;
    println!("x + H at lambda 1e6: {:.6} (limit 3)", e.value);
    Ok(())
}
