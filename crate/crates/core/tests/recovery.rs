use bvlab::bvcalc::ops::l1_distance;
use bvlab::bvcalc::{level_crossings, variation_decomposition, Bv1d, JumpSet, OpenSet1D, PieceForm, SmoothPiece};
use bvlab::evaluator::f_eval_with;
use bvlab::recovery::{
    build_recovery_family, glue, mollify, staircase_levels, Cutoff, RecoveryFamily, RecoveryMode, RecoveryOptions,
    StaircaseParams,
};
use proptest::prelude::*;

fn unit() -> OpenSet1D {
    OpenSet1D::unit()
}

fn sbv_strategy() -> impl Strategy<Value = Bv1d> {
    let jumps = prop::collection::vec((0.02..0.98f64, prop_oneof![-1.0..-0.1f64, 0.1..1.0f64]), 0..3);
    (-1.0..1.0f64, jumps, 0.05..0.3f64, 1.0..6.0f64, 0.0..0.5f64, 0.05..0.6f64).prop_map(
        |(slope, jumps, amp, freq, a, cmass)| {
            let sine = SmoothPiece::new((a, a + 0.5), PieceForm::ScaledSine { amplitude: amp, frequency: freq, phase: 0.3 }).unwrap();
            Bv1d::affine(slope, 0.0, unit())
                .unwrap()
                .add(&Bv1d::new(0.0, vec![sine], JumpSet::new(jumps).unwrap(), vec![], unit()).unwrap())
                .unwrap()
                .add(&Bv1d::cantor(0.2, 0.7, cmass, unit()).unwrap())
                .unwrap()
        },
    )
}

fn sup_abs(u: &Bv1d) -> f64 {
    (0..=2000).map(|i| u.value((i as f64 + 0.5) / 2001.0).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn staircase_invariants(u in sbv_strategy(), k in 4usize..64) {
        let m = sup_abs(&u) + 0.5;
        let params = StaircaseParams::new(m, k);
        let h = params.step();
        let (s, levels) = staircase_levels(&u, &params).unwrap();
        let du = variation_decomposition(&u, &unit()).unwrap();
        let ds = variation_decomposition(&s, &unit()).unwrap();
        // jump-only, no more variation than u
        prop_assert!(ds.abs == 0.0 && ds.cantor == 0.0);
        prop_assert!(ds.total() <= du.total() + 1e-9, "{} > {}", ds.total(), du.total());
        // each level sits in its own slot and the variation is the coarea sum
        prop_assert_eq!(levels.len(), k);
        let mut coarea = 0.0;
        for (j, &t) in levels.iter().enumerate() {
            let lo = -m + j as f64 * h;
            prop_assert!(lo <= t && t <= lo + h);
            coarea += h * level_crossings(&u, t).unwrap() as f64;
        }
        prop_assert!((coarea - ds.total()).abs() <= 1e-9 * coarea.max(1.0));
        // pointwise within one step, values on the lattice -M + hZ
        for i in 0..500 {
            let x = (i as f64 + 0.37) / 500.0;
            let (a, b) = (s.value(x), u.value(x));
            prop_assert!((a - b).abs() <= h + 1e-12, "x = {x}: {a} vs {b}");
            let r = (a + m) / h;
            prop_assert!((r - r.round()).abs() < 1e-9);
        }
        prop_assert!(l1_distance(&s, &u, &unit()).unwrap() <= h + 1e-12);
    }

    #[test]
    fn mollification_contracts_variation(u in sbv_strategy(), delta in 0.01..0.2f64) {
        let v = mollify(&u, delta).unwrap();
        let dv = variation_decomposition(&v, v.domain()).unwrap();
        let du = variation_decomposition(&u, &unit()).unwrap();
        prop_assert!(dv.jump == 0.0 && dv.cantor == 0.0);
        prop_assert!(dv.total() <= du.total() * (1.0 + 1e-6) + 1e-9, "{} > {}", dv.total(), du.total());
        // averages stay inside the closed range of u
        let (lo, hi) = u.range_open(0.0, 1.0);
        for i in 0..200 {
            let x = -delta + (1.0 + 2.0 * delta) * (i as f64 + 0.5) / 200.0;
            let y = v.value(x);
            prop_assert!(lo - 1e-9 <= y && y <= hi + 1e-9, "{lo} <= {y} <= {hi}");
        }
    }

    #[test]
    fn glue_respects_leibniz_bounds(u in sbv_strategy(), a in 0.1..0.4f64, w in 0.05..0.4f64) {
        let other = Bv1d::affine(0.5, -0.1, unit()).unwrap();
        let eta = Cutoff::Ramp { from: a, to: a + w };
        // sine pieces are not polynomial; glue the polynomial staircase of u instead
        let s = staircase_levels(&u, &StaircaseParams::new(sup_abs(&u) + 0.5, 16)).unwrap().0;
        let g = glue(&eta, &s, &other).unwrap();
        let d = variation_decomposition(&g.u, &unit()).unwrap();
        prop_assert!(d.jump <= g.jump_bound + 1e-12);
        prop_assert!(d.abs <= g.ac_bound + 1e-9);
        // smoothstep coefficients scale like w^-5, so rounding is ~1e-16 / w^5
        let tol = 1e-15 / w.powi(5);
        prop_assert!((g.u.value(0.05) - other.value(0.05)).abs() < tol);
        prop_assert!((g.u.value(0.99) - s.value(0.99)).abs() < tol || a + w >= 0.99);
    }
}

#[test]
fn cantor_family_certificates_are_reproducible() {
    let u = Bv1d::cantor(0.0, 1.0, 1.0, unit()).unwrap();
    let fam = build_recovery_family(&u, 1.0, &RecoveryOptions { k_max: 8, ..RecoveryOptions::default() }).unwrap();
    assert_eq!(fam.mode, RecoveryMode::Sbv);
    let limit = 2.0 / 2.0;
    for s in &fam.stages {
        assert!(s.certified, "stage {}", s.k);
        assert!(s.certificate - s.certificate_error <= limit + 1.0 / s.k as f64);
        // recompute the certificate from the stored function
        let uk = fam.functions.get(fam.stages.iter().position(|t| t.k == s.k).unwrap()).unwrap();
        let e = f_eval_with(uk, &unit(), 1.0, s.lambda, &RecoveryOptions::default().eval).unwrap();
        assert!((e.value - s.certificate).abs() <= e.error_bound + s.certificate_error + 1e-12);
        let dk = variation_decomposition(uk, &unit()).unwrap();
        assert_eq!(dk.cantor, 0.0);
        assert!((dk.total() - s.decomposition.total()).abs() < 1e-12);
    }
    let lambdas: Vec<f64> = fam.stages.iter().map(|s| s.lambda).collect();
    assert!(lambdas.windows(2).all(|w| w[1] > w[0]));
    let json = fam.to_json().unwrap();
    let back = RecoveryFamily::from_json(&json).unwrap();
    assert_eq!(back.stages, fam.stages);
}

#[test]
fn staircase_rejects_coarse_slots() {
    let u = Bv1d::affine(1.0, 0.0, unit()).unwrap();
    let p = StaircaseParams { target_eps: Some(0.01), ..StaircaseParams::new(1.0, 10) };
    let e = staircase_levels(&u, &p).unwrap_err().to_string();
    assert!(e.contains("need k >= 201"), "{e}");
}
