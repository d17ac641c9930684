//! Adaptive Gauss–Kronrod (7, 15) quadrature and fixed Gauss–Legendre rules.

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = WGK[7] * fc;
    let mut rg = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Adaptive integral of `f` over `[a, b]` to absolute tolerance `tol`.
/// Returns `(value, error_estimate)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    if !(a < b) {
        return (0.0, 0.0);
    }
    let mut stack = vec![(a, b, gk15(&f, a, b), 0u32)];
    let mut total = 0.0;
    let mut err = 0.0;
    let width = b - a;
    while let Some((lo, hi, (v, e), depth)) = stack.pop() {
        let local_tol = tol * (hi - lo) / width;
        if e <= local_tol.max(1e-15 * v.abs()) || depth >= 40 {
            total += v;
            err += e;
            continue;
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, gk15(&f, lo, mid), depth + 1));
        stack.push((mid, hi, gk15(&f, mid, hi), depth + 1));
    }
    (total, err)
}

/// Ten-point Gauss–Legendre nodes and weights on `[-1, 1]`.
pub const GL10: [(f64, f64); 10] = [
    (-0.973906528517171720077964012084452, 0.066671344308688137593568809893332),
    (-0.865063366688984510732096688423493, 0.149451349150580593145776339657697),
    (-0.679409568299024406234327365114874, 0.219086362515982043995534934228163),
    (-0.433395394129247190799265943165784, 0.269266719309996355091226921569469),
    (-0.148874338981631210884826001129720, 0.295524224714752870173892994651338),
    (0.148874338981631210884826001129720, 0.295524224714752870173892994651338),
    (0.433395394129247190799265943165784, 0.269266719309996355091226921569469),
    (0.679409568299024406234327365114874, 0.219086362515982043995534934228163),
    (0.865063366688984510732096688423493, 0.149451349150580593145776339657697),
    (0.973906528517171720077964012084452, 0.066671344308688137593568809893332),
];

pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    GL10.iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Adaptive Simpson integration of `f` on `[a, b]`.
///
/// `f` returns a value and an auxiliary channel; the auxiliary channel is
/// integrated with the same nodes but does not drive refinement. Returns
/// `(integral, aux_integral, error_estimate, evaluations)`.
pub fn simpson_aux<F: Fn(f64) -> (f64, f64)>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> (f64, f64, f64, usize) {
    if !(a < b) {
        return (0.0, 0.0, 0.0, 0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let mut evals = 3;
    let whole = (b - a) / 6.0 * (fa.0 + 4.0 * fm.0 + fb.0);
    let mut out = (0.0, 0.0, 0.0);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth, &mut out, &mut evals);
    (out.0, out.1, out.2, evals)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> (f64, f64)>(
    f: &F,
    a: f64,
    b: f64,
    fa: (f64, f64),
    fm: (f64, f64),
    fb: (f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
    out: &mut (f64, f64, f64),
    evals: &mut usize,
) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    *evals += 2;
    let h = (b - a) / 12.0;
    let left = h * (fa.0 + 4.0 * flm.0 + fm.0);
    let right = h * (fm.0 + 4.0 * frm.0 + fb.0);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        out.0 += left + right + delta / 15.0;
        out.1 += h * (fa.1 + 4.0 * flm.1 + 2.0 * fm.1 + 4.0 * frm.1 + fb.1);
        out.2 += delta.abs() / 15.0;
        return;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out, evals);
    simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out, evals);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_both_channels() {
        let (v, a, e, _) = simpson_aux(&|x: f64| (x.sin(), 2.0), 0.0, std::f64::consts::PI, 1e-10, 30);
        assert!((v - 2.0).abs() < 1e-9 && (a - 2.0 * std::f64::consts::PI).abs() < 1e-12 && e < 1e-9);
        let (v, _, _, _) = simpson_aux(&|x: f64| (x.sqrt(), 0.0), 0.0, 1.0, 1e-8, 40);
        assert!((v - 2.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn integrates_smooth_functions() {
        let (v, e) = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-12 && e < 1e-10);
        let (v, _) = integrate(|x: f64| (1.0 + x * x).sqrt(), 0.0, 1.0, 1e-12);
        let exact = 0.5 * (2f64.sqrt() + (1.0 + 2f64.sqrt()).ln());
        assert!((v - exact).abs() < 1e-12);
        let g = gauss_legendre(|x| x.powi(19), 0.0, 1.0);
        assert!((g - 0.05).abs() < 1e-14);
    }
}
