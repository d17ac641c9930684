//! Quadtree evaluation against the Monte Carlo oracle for a few catalog
//! functions.

use bvlab::catalog::FunctionSpec;
use bvlab::evaluator::{f_eval_default, f_eval_mc};

fn main() -> bvlab::Result<()> {
    for name in ["linear", "step", "sbv_mix", "sine", "spline", "cantor"] {
        let u = FunctionSpec::named(name)?.build()?;
        let q = f_eval_default(&u, u.domain(), 1.0, 50.0)?;
        let (mc, se) = f_eval_mc(&u, u.domain(), 1.0, 50.0, 2_000_000, 11)?;
        let z = (q.value - mc) / se;
        println!("{name:<8} quadtree {:.5} ± {:.1e}  MC {mc:.5} ± {se:.1e}  z {z:+.2}", q.value, q.error_bound);
    }
    Ok(())
}
