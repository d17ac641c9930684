use bvlab::kernel::{band, band_union, nu_gamma_cell, second_antiderivative, Cell};
use proptest::prelude::*;

/// `∫_c^d |x - y|^{γ-1} dy` in closed form.
fn inner(x: f64, c: f64, d: f64, g: f64) -> f64 {
    let p = |t: f64| t.signum() * t.abs().powf(g) / g;
    p(d - x) - p(c - x)
}

/// Outer integral by composite Simpson, split where the inner integral is
/// not smooth.
fn nu_oracle(cell: &Cell, g: f64) -> f64 {
    let (a, b) = cell.x;
    let (c, d) = cell.y;
    let mut cuts = vec![a, b];
    cuts.extend([c, d].into_iter().filter(|&t| a < t && t < b));
    cuts.sort_by(f64::total_cmp);
    let n = 4000;
    cuts.windows(2)
        .map(|w| {
            let h = (w[1] - w[0]) / n as f64;
            let f = |x: f64| inner(x, c, d, g);
            let mut s = f(w[0]) + f(w[1]);
            for i in 1..n {
                s += f(w[0] + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        })
        .sum()
}

fn cell_strategy() -> impl Strategy<Value = Cell> {
    (-1.0..1.0f64, 0.01..1.0f64, -1.0..1.0f64, 0.01..1.0f64)
        .prop_map(|(x, w, y, h)| Cell::new((x, x + w), (y, y + h)).unwrap())
}

#[test]
fn unit_square_values() {
    for g in [0.5, 1.0, 2.0, 3.5] {
        let want = 2.0 / (g * (g + 1.0));
        let got = nu_gamma_cell(&Cell::new((0.0, 1.0), (0.0, 1.0)).unwrap(), g).unwrap();
        assert!((got - want).abs() < 1e-14, "γ = {g}");
    }
    assert!(nu_gamma_cell(&Cell::new((0.0, 1.0), (0.0, 1.0)).unwrap(), -1.0).is_err());
    assert!(Cell::new((1.0, 0.0), (0.0, 1.0)).is_err());
    assert!(second_antiderivative(0.5, f64::NAN).is_err());
}

#[test]
fn far_cells_avoid_cancellation() {
    // tiny cell far from the diagonal: ν ≈ area · distance^{γ-1}
    let c = Cell::new((0.0, 1e-6), (100.0, 100.0 + 1e-6)).unwrap();
    for g in [0.5, 2.0] {
        let dist = 0.5 * (c.y.0 + c.y.1) - 0.5 * (c.x.0 + c.x.1);
        let want = c.area() * dist.powf(g - 1.0);
        let got = nu_gamma_cell(&c, g).unwrap();
        assert!((got - want).abs() < 1e-9 * want, "γ = {g}: {got} vs {want}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_iterated_integral(cell in cell_strategy(), g in 0.5..3.0f64) {
        let v = nu_gamma_cell(&cell, g).unwrap();
        let o = nu_oracle(&cell, g);
        prop_assert!((v - o).abs() <= 1e-6 * o.max(1e-3), "{v} vs {o}");
    }

    #[test]
    fn symmetric_and_additive(cell in cell_strategy(), g in 0.2..3.0f64, t in 0.05..0.95f64) {
        let v = nu_gamma_cell(&cell, g).unwrap();
        prop_assert!(v >= 0.0);
        let vt = nu_gamma_cell(&cell.transposed(), g).unwrap();
        prop_assert!((v - vt).abs() <= 1e-12 * v.max(1.0));
        let m = cell.x.0 + t * (cell.x.1 - cell.x.0);
        let left = nu_gamma_cell(&Cell::new((cell.x.0, m), cell.y).unwrap(), g).unwrap();
        let right = nu_gamma_cell(&Cell::new((m, cell.x.1), cell.y).unwrap(), g).unwrap();
        prop_assert!((v - left - right).abs() <= 1e-12 * v.max(1.0));
        let m = cell.y.0 + t * (cell.y.1 - cell.y.0);
        let low = nu_gamma_cell(&Cell::new(cell.x, (cell.y.0, m)).unwrap(), g).unwrap();
        let high = nu_gamma_cell(&Cell::new(cell.x, (m, cell.y.1)).unwrap(), g).unwrap();
        prop_assert!((v - low - high).abs() <= 1e-12 * v.max(1.0));
    }

    #[test]
    fn homogeneous_and_translation_invariant(cell in cell_strategy(), g in 0.2..3.0f64, s in 0.1..10.0f64, shift in -5.0..5.0f64) {
        let v = nu_gamma_cell(&cell, g).unwrap();
        let scaled = Cell::new((s * cell.x.0, s * cell.x.1), (s * cell.y.0, s * cell.y.1)).unwrap();
        let vs = nu_gamma_cell(&scaled, g).unwrap();
        prop_assert!((vs - s.powf(g + 1.0) * v).abs() <= 1e-10 * vs.max(1.0));
        let moved = Cell::new((cell.x.0 + shift, cell.x.1 + shift), (cell.y.0 + shift, cell.y.1 + shift)).unwrap();
        let vm = nu_gamma_cell(&moved, g).unwrap();
        prop_assert!((vm - v).abs() <= 1e-10 * v.max(1.0));
    }

    #[test]
    fn bands_partition_the_cell(cell in cell_strategy(), g in 0.2..3.0f64, d1 in 0.0..1.0f64, d2 in 0.0..1.0f64) {
        let (d1, d2) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        let v = nu_gamma_cell(&cell, g).unwrap();
        let parts = band_union(&cell, g, &[(0.0, d1), (d1, d2), (d2, f64::INFINITY)]);
        prop_assert!((v - parts).abs() <= 1e-11 * v.max(1.0), "{v} vs {parts}");
        let mid = band(&cell, g, d1, d2);
        prop_assert!(mid >= 0.0 && mid <= v + 1e-12);
    }
}
