use bvlab::bvcalc::{Bv1d, JumpSet, OpenSet1D, PieceForm, SmoothPiece};
use bvlab::evaluator::{f_eval_mc, f_eval_with, geometric_grid, lambda_sweep, EvalOptions, Tolerance};
use proptest::prelude::*;

fn unit() -> OpenSet1D {
    OpenSet1D::unit()
}

fn opts(tol: f64) -> EvalOptions {
    EvalOptions { tol: Tolerance::Relative(tol), ..EvalOptions::default() }
}

/// Independent oracle for a pure jump function on `(0, 1)`:
/// `ν(E) = 2 ∫_0^1 s^{γ-1} m(s) ds` with `m(s)` the exact length of
/// `{x ∈ (0, 1-s) : |u(x+s) - u(x)| > λ s^{1+γ}}`, integrated in
/// `t = s^γ` between every value of `s` where `m` can change form.
fn jump_oracle(jumps: &[(f64, f64)], gamma: f64, lambda: f64) -> f64 {
    // D_s(x) sums a contiguous run of jumps in position order
    let mut jumps = jumps.to_vec();
    jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let jumps = &jumps[..];
    let m = |s: f64| {
        let mut cuts = vec![0.0, 1.0 - s];
        for &(p, _) in jumps {
            cuts.push(p);
            cuts.push(p - s);
        }
        cuts.retain(|&c| (0.0..=1.0 - s).contains(&c));
        cuts.sort_by(f64::total_cmp);
        let thr = lambda * s.powf(1.0 + gamma);
        cuts.windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| {
                let x = 0.5 * (w[0] + w[1]);
                let d: f64 = jumps.iter().filter(|&&(p, _)| x < p && p <= x + s).map(|&(_, h)| h).sum();
                if d.abs() > thr { w[1] - w[0] } else { 0.0 }
            })
            .sum::<f64>()
    };
    let mut breaks = vec![0.0, 1.0];
    for (i, &(p, _)) in jumps.iter().enumerate() {
        breaks.push(p);
        breaks.push(1.0 - p);
        for (q, _) in &jumps[i + 1..] {
            breaks.push((q - p).abs());
        }
        for j in i..jumps.len() {
            let sum: f64 = jumps[i..=j].iter().map(|&(_, h)| h).sum();
            if sum != 0.0 {
                breaks.push((sum.abs() / lambda).powf(1.0 / (1.0 + gamma)));
            }
        }
    }
    let mut ts: Vec<f64> = breaks.into_iter().filter(|&s| (0.0..=1.0).contains(&s)).map(|s| s.powf(gamma)).collect();
    ts.sort_by(f64::total_cmp);
    let n = 400;
    let mut nu = 0.0;
    for w in ts.windows(2) {
        let h = (w[1] - w[0]) / n as f64;
        for i in 0..n {
            let t = w[0] + (i as f64 + 0.5) * h;
            nu += m(t.powf(1.0 / gamma)) * h;
        }
    }
    lambda * 2.0 * nu / gamma
}

fn affine_closed_form(slope: f64, gamma: f64, lambda: f64) -> f64 {
    let r = (slope.abs() / lambda).powf(1.0 / gamma).min(1.0);
    2.0 * lambda * (r.powf(gamma) / gamma - r.powf(gamma + 1.0) / (gamma + 1.0))
}

fn jump_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.02..0.98f64, prop_oneof![-2.0..-0.1f64, 0.1..2.0f64]), 1..4)
}

fn sbv_strategy() -> impl Strategy<Value = Bv1d> {
    (-1.0..1.0f64, jump_strategy(), 0.05..0.3f64, 1.0..6.0f64, 0.0..0.5f64).prop_map(|(slope, jumps, amp, freq, a)| {
        let sine = SmoothPiece::new((a, a + 0.5), PieceForm::ScaledSine { amplitude: amp, frequency: freq, phase: 0.0 }).unwrap();
        Bv1d::affine(slope, 0.0, unit())
            .unwrap()
            .add(&Bv1d::new(0.0, vec![sine], JumpSet::new(jumps).unwrap(), vec![], unit()).unwrap())
            .unwrap()
    })
}

#[test]
fn cantor_values_are_bounded_between_limits() {
    let u = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
    for lambda in [1e2, 1e3] {
        let e = f_eval_with(&u, &unit(), 1.0, lambda, &opts(1e-3)).unwrap();
        assert!(e.converged);
        assert!(e.value - e.error_bound >= 1.0 && e.value + e.error_bound <= 2.0, "{e:?}");
    }
}

#[test]
fn mc_oracle_agrees_on_cantor() {
    let u = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
    let e = f_eval_with(&u, &unit(), 1.0, 100.0, &opts(1e-4)).unwrap();
    let (mc, se) = f_eval_mc(&u, &unit(), 1.0, 100.0, 2_000_000, 7).unwrap();
    assert!((e.value - mc).abs() <= 4.0 * se + e.error_bound, "{} vs {mc} ± {se}", e.value);
}

#[test]
fn rejects_bad_parameters() {
    let u = Bv1d::affine(1.0, 0.0, unit()).unwrap();
    assert!(f_eval_with(&u, &unit(), 0.0, 1.0, &EvalOptions::default()).is_err());
    assert!(f_eval_with(&u, &unit(), 1.0, -1.0, &EvalOptions::default()).is_err());
    assert!(f_eval_with(&u, &OpenSet1D::interval(-1.0, 1.0).unwrap(), 1.0, 1.0, &EvalOptions::default()).is_err());
    assert!(geometric_grid(1.0, 10.0, 0).is_err());
}

#[test]
fn sweep_tail_approaches_the_jump_limit() {
    let u = Bv1d::step(0.3, -2.0, unit()).unwrap();
    let s = lambda_sweep(&u, &unit(), 1.5, &geometric_grid(1e2, 1e6, 5).unwrap(), &EvalOptions::default()).unwrap();
    let lim = 2.0 / 2.5 * 2.0;
    assert!((s.tail.max - lim).abs() < 1e-3 && (s.tail.min - lim).abs() < 1e-3, "{:?}", s.tail);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jump_functions_match_oracle(jumps in jump_strategy(), g in 0.5..2.5f64, lambda in 1.0..200.0f64) {
        let u = Bv1d::new(0.0, vec![], JumpSet::new(jumps.clone()).unwrap(), vec![], unit()).unwrap();
        let e = f_eval_with(&u, &unit(), g, lambda, &opts(1e-6)).unwrap();
        let o = jump_oracle(&jumps, g, lambda);
        prop_assert!((e.value - o).abs() <= e.error_bound + 1e-4 * o.max(1.0), "{} ± {} vs {o}", e.value, e.error_bound);
    }

    #[test]
    fn affine_functions_match_closed_form(slope in -5.0..5.0f64, g in 0.3..3.0f64, lambda in 0.1..1e4f64) {
        prop_assume!(slope.abs() > 1e-3);
        let u = Bv1d::affine(slope, 0.2, unit()).unwrap();
        let e = f_eval_with(&u, &unit(), g, lambda, &opts(1e-6)).unwrap();
        let want = affine_closed_form(slope, g, lambda);
        prop_assert!((e.value - want).abs() <= e.error_bound + 1e-12 * want.max(1.0), "{} ± {} vs {want}", e.value, e.error_bound);
    }

    #[test]
    fn scaling_identity(u in sbv_strategy(), c in 0.2..5.0f64, g in 0.5..2.0f64, lambda in 10.0..1e3f64) {
        let a = f_eval_with(&u.scale(c), &unit(), g, lambda, &EvalOptions::default()).unwrap();
        let b = f_eval_with(&u, &unit(), g, lambda / c, &EvalOptions::default()).unwrap();
        prop_assert!((a.value - c * b.value).abs() <= a.error_bound + c * b.error_bound + 1e-12);
    }

    #[test]
    fn invariant_under_constants_and_negation(u in sbv_strategy(), k in -3.0..3.0f64, lambda in 10.0..1e3f64) {
        let a = f_eval_with(&u, &unit(), 1.0, lambda, &EvalOptions::default()).unwrap();
        let b = f_eval_with(&u.add_constant(k), &unit(), 1.0, lambda, &EvalOptions::default()).unwrap();
        let c = f_eval_with(&u.scale(-1.0), &unit(), 1.0, lambda, &EvalOptions::default()).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound + 1e-12);
        prop_assert!((a.value - c.value).abs() <= a.error_bound + c.error_bound + 1e-12);
    }

    #[test]
    fn superlevel_measure_decreases_in_lambda(u in sbv_strategy(), g in 0.5..2.0f64, l0 in 1.0..1e3f64, ratio in 1.01..10.0f64) {
        let a = f_eval_with(&u, &unit(), g, l0, &EvalOptions::default()).unwrap();
        let b = f_eval_with(&u, &unit(), g, l0 * ratio, &EvalOptions::default()).unwrap();
        let (na, nb) = (a.value / l0, b.value / (l0 * ratio));
        prop_assert!(nb <= na + (a.error_bound / l0) + (b.error_bound / (l0 * ratio)) + 1e-14);
    }

    #[test]
    fn monotone_in_the_domain(u in sbv_strategy(), lo in 0.0..0.5f64, hi in 0.5..1.0f64, lambda in 10.0..1e3f64) {
        let sub = OpenSet1D::interval(lo, hi).unwrap();
        let a = f_eval_with(&u, &sub, 1.0, lambda, &EvalOptions::default()).unwrap();
        let b = f_eval_with(&u, &unit(), 1.0, lambda, &EvalOptions::default()).unwrap();
        prop_assert!(a.value - a.error_bound <= b.value + b.error_bound + 1e-12);
    }

    #[test]
    fn mc_oracle_agrees(u in sbv_strategy(), lambda in 10.0..300.0f64, seed in any::<u64>()) {
        let e = f_eval_with(&u, &unit(), 1.0, lambda, &opts(1e-4)).unwrap();
        let (mc, se) = f_eval_mc(&u, &unit(), 1.0, lambda, 400_000, seed).unwrap();
        prop_assert!((e.value - mc).abs() <= 5.0 * se + e.error_bound + 1e-9, "{} vs {mc} ± {se}", e.value);
    }
}
