//! Acceptance suite: every criterion prints one PASS/FAIL line, followed by
//! its individual rows. Targets are recomputed here from first principles
//! and compared against the targets the harness reports.

use std::f64::consts::PI;

use bvlab::harness::{criteria, run_criterion, ClaimContext, Outcome};

/// `∫_{S^{n-1}} |σ·e| dσ` by an independent route: `2 |B^{n-1}|`.
fn sphere_constant(n: u32) -> f64 {
    let ball = |d: u32| PI.powf(d as f64 / 2.0) / gamma_half_int(d + 2);
    2.0 * ball(n - 1)
}

/// `Γ(m / 2)` for positive integers `m`.
fn gamma_half_int(m: u32) -> f64 {
    if m == 1 {
        PI.sqrt()
    } else if m == 2 {
        1.0
    } else {
        (m as f64 / 2.0 - 1.0) * gamma_half_int(m - 2)
    }
}

fn row_target(o: &Outcome, claim: &str) -> f64 {
    o.rows.iter().find(|r| r.claim == claim).unwrap_or_else(|| panic!("missing row {claim}")).target
}

fn check_targets(o: &Outcome, c1: f64, c2: f64) {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
    match o.id {
        1 => {
            for g in [0.5f64, 1.0, 2.0] {
                assert!(close(row_target(o, &format!("c1.tail(gamma={g})")), c1 / g));
                let lambda: f64 = 1e4;
                let closed = c1 / g * (1.0 - g * lambda.powf(-1.0 / g) / (g + 1.0));
                assert!(close(row_target(o, &format!("c1.value(gamma={g})")), closed));
            }
        }
        2 => {
            for g in [0.5f64, 1.0, 2.0] {
                assert!(close(row_target(o, &format!("c2.value(gamma={g})")), c1 / (g + 1.0)));
            }
        }
        3 => assert!(close(row_target(o, "c3.tail"), 1.5 * c1)),
        4 => assert!(close(row_target(o, "c4.tail_min"), c1 / 2.0)),
        5 => assert!(close(row_target(o, "c5.certificate_minus_1/k"), c1 / 2.0)),
        6 => {
            assert!(close(row_target(o, "c6.max_certificate"), c1));
            assert!(close(row_target(o, "c6.area_gap(k=16)"), 2.0 - 2f64.sqrt()));
        }
        7 => assert!(close(row_target(o, "c7.value"), c2 / 2.0 * 2.0 * PI * 0.3)),
        _ => {}
    }
}

fn main() {
    let c1 = sphere_constant(1);
    let c2 = sphere_constant(2);
    assert!((c1 - 2.0).abs() < 1e-15 && (c2 - 4.0).abs() < 1e-14);
    let ctx = ClaimContext::default();
    assert!((ctx.c1 - c1).abs() < 1e-12 && (ctx.c2 - c2).abs() < 1e-12);

    let mut failed = Vec::new();
    for c in criteria() {
        let o = run_criterion(&c, &ctx);
        let verdict = if o.pass() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {} ({:.2} s)", o.id, o.name, o.runtime_s);
        for r in &o.rows {
            println!("    {r}");
        }
        check_targets(&o, c1, c2);
        if !o.pass() {
            failed.push(o.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all {} criteria passed", criteria().len());
}
