//! Recovery family for the Cantor function: jump-only staircases `u_k`
//! converging area-strictly, with certified thresholds `λ_k`.

use bvlab::bvcalc::{Bv1d, OpenSet1D};
use bvlab::recovery::{build_recovery_family, RecoveryOptions};

fn main() -> bvlab::Result<()> {
    let u = Bv1d::cantor(0.0, 1.0, 1.0, OpenSet1D::unit())?;
    let fam = build_recovery_family(&u, 1.0, &RecoveryOptions { k_max: 16, ..RecoveryOptions::default() })?;
    println!("limit C/(γ+1)|D^c u| = {}", fam.limit);
    println!("{:>3} {:>6} {:>10} {:>10} {:>10} {:>10}", "k", "slots", "lambda_k", "F(u_k)", "l1 gap", "area gap");
    for s in &fam.stages {
        println!(
            "{:>3} {:>6} {:>10.3e} {:>10.6} {:>10.2e} {:>10.2e}",
            s.k, s.slots, s.lambda, s.certificate, s.l1_gap, s.area_gap
        );
    }
    if let Some(s) = fam.lookup(5e3) {
        println!("stage active at lambda = 5e3: k = {}", s.k);
    }
    Ok(())
}
