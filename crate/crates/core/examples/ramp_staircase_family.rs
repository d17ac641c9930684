//! Jump-only staircases of `u(x) = x` converge in L¹ but not area-strictly;
//! along them the functional tends to `2/(γ+1) = 1` instead of `2/γ = 2`.

use bvlab::bvcalc::{Bv1d, OpenSet1D};
use bvlab::evaluator::f_eval_default;
use bvlab::recovery::{build_recovery_family, RecoveryMode, RecoveryOptions};

fn main() -> bvlab::Result<()> {
    let dom = OpenSet1D::unit();
    let u = Bv1d::affine(1.0, 0.0, dom.clone())?;
    let opts = RecoveryOptions { k_max: 12, mode: RecoveryMode::Full, ..RecoveryOptions::default() };
    let fam = build_recovery_family(&u, 1.0, &opts)?;
    for (s, uk) in fam.stages.iter().zip(&fam.functions) {
        let far = f_eval_default(uk, &dom, 1.0, 1e4 * s.lambda)?;
        println!(
            "k {:>2}  F(u_k, λ_k) {:.5}  F(u_k, 1e4 λ_k) {:.5}  l1 {:.1e}  area gap {:.4}",
            s.k, s.certificate, far.value, s.l1_gap, s.area_gap
        );
    }
    println!("pointwise limit for u itself: {}", f_eval_default(&u, &dom, 1.0, 1e6)?.value);
    Ok(())
}
