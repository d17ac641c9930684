//! The middle-thirds Cantor–Lebesgue function and its integral.
//!
//! Ternary digits are extracted from the exact binary value of an `f64`
//! using integer arithmetic, so no rounding accumulates while the digit
//! recursion runs. The only error is truncation after `depth` digits,
//! bounded by `2^-depth`.

use crate::error::{param, Result};

/// Default number of ternary digits, error below `2^-48 < 4e-15`.
pub const DEFAULT_DEPTH: u32 = 48;

/// Largest binary shift the 128-bit remainder can absorb.
const MAX_SHIFT: u32 = 125;

/// Exact ternary digit stream of a number in `[0, 1)`.
struct TernaryDigits {
    rem: u128,
    shift: u32,
}

impl TernaryDigits {
    /// `x` must lie in `[0, 1)` and be representable with `shift <= MAX_SHIFT`.
    fn new(x: f64) -> Option<Self> {
        debug_assert!((0.0..1.0).contains(&x));
        if x == 0.0 {
            return Some(Self { rem: 0, shift: 1 });
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if biased == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        // x = mant * 2^e with e < 0
        let mut shift = (-e) as u32;
        let mut mant = mant as u128;
        // strip trailing zero bits to keep the shift small
        while mant & 1 == 0 && shift > 1 {
            mant >>= 1;
            shift -= 1;
        }
        if shift > MAX_SHIFT {
            return None;
        }
        Some(Self { rem: mant, shift })
    }

    /// Next digit together with the remaining fractional part as `f64`.
    fn next_digit(&mut self) -> u8 {
        let t = self.rem * 3;
        let d = (t >> self.shift) as u8;
        self.rem = t & ((1u128 << self.shift) - 1);
        d
    }

    fn frac(&self) -> f64 {
        self.rem as f64 / (self.shift as f64).exp2()
    }

    fn is_zero(&self) -> bool {
        self.rem == 0
    }
}

/// Cantor–Lebesgue function at `x ∈ [0, 1]`, truncated after `depth`
/// ternary digits.
pub fn eval_cantor(x: f64, depth: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return param(format!("Cantor function argument {x} outside [0, 1]"));
    }
    if depth == 0 {
        return param("Cantor depth must be positive");
    }
    Ok(cantor_digits(x, depth))
}

/// Clamped Cantor–Lebesgue function: 0 left of 0 and 1 right of 1.
pub fn cantor(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        cantor_digits(x, DEFAULT_DEPTH)
    }
}

fn cantor_digits(x: f64, depth: u32) -> f64 {
    if x >= 1.0 {
        return 1.0;
    }
    if x <= 0.0 {
        return 0.0;
    }
    if let Some((m, j)) = snap_triadic(x) {
        return cantor_triadic(m, j, depth);
    }
    let Some(mut digits) = TernaryDigits::new(x) else {
        return cantor_tiny(x, depth);
    };
    let mut value = 0.0;
    let mut scale = 0.5;
    for _ in 0..depth {
        match digits.next_digit() {
            0 => {}
            1 => return value + scale,
            _ => value += scale,
        }
        if digits.is_zero() {
            break;
        }
        scale *= 0.5;
    }
    value
}

/// Largest power of three checked when snapping.
const SNAP_POWER: u32 = 20;

/// `x` within a few ulps of `m / 3^j` with `j <= SNAP_POWER`. The Cantor
/// function is only Hölder continuous, so one ulp of input rounding near a
/// plateau endpoint such as `1/3` would otherwise cost ~1e-11 of output.
fn snap_triadic(x: f64) -> Option<(u64, u32)> {
    let mut p = 1.0;
    for j in 1..=SNAP_POWER {
        p *= 3.0;
        let y = x * p;
        let m = y.round();
        if (y - m).abs() <= 4.0 * f64::EPSILON * y.max(1.0) {
            return Some((m as u64, j));
        }
    }
    None
}

fn cantor_triadic(m: u64, j: u32, depth: u32) -> f64 {
    let mut value = 0.0;
    let mut scale = 0.5;
    let mut p = 3u64.pow(j);
    let mut rem = m;
    for _ in 0..j.min(depth) {
        p /= 3;
        let d = rem / p;
        rem %= p;
        match d {
            0 => {}
            1 => return value + scale,
            _ => value += scale,
        }
        scale *= 0.5;
    }
    value
}

/// Arguments so small that the exact remainder would overflow: use the
/// self-similarity `C(x) = C(3x) / 2` in floating point. The result is
/// below `2^-40` in absolute value anyway.
fn cantor_tiny(x: f64, depth: u32) -> f64 {
    let mut y = x;
    let mut k = 0u32;
    while y < 1.0 / 3.0 && k < depth {
        y *= 3.0;
        k += 1;
    }
    if k >= depth {
        return 0.0;
    }
    cantor_digits(y.min(1.0), depth - k) * 0.5f64.powi(k as i32)
}

/// `∫_0^x C(s) ds` for the clamped Cantor function, extended by
/// `1/2 + (x - 1)` beyond 1.
pub fn cantor_integral(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 0.5 + (x - 1.0);
    }
    let Some(mut digits) = TernaryDigits::new(x) else {
        // C <= 2^-40 on this range
        return 0.0;
    };
    // local coordinate before the next digit is the fractional remainder
    let mut local = x;
    let mut acc = 0.0;
    let mut mult = 1.0;
    for _ in 0..DEFAULT_DEPTH {
        let d = digits.next_digit();
        match d {
            0 => {}
            1 => {
                acc += mult * (1.0 / 12.0 + (local - 1.0 / 3.0) / 2.0);
                return acc;
            }
            _ => acc += mult * (0.25 + (local - 2.0 / 3.0) / 2.0),
        }
        mult /= 6.0;
        local = digits.frac();
        if digits.is_zero() {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: floating-point digit recursion on rationals p/q.
    fn cantor_rational(p: u64, q: u64, depth: u32) -> f64 {
        let mut num = p;
        let mut value = 0.0;
        let mut scale = 0.5;
        for _ in 0..depth {
            num *= 3;
            let d = num / q;
            num %= q;
            match d {
                0 => {}
                1 => return value + scale,
                _ => value += scale,
            }
            scale *= 0.5;
        }
        value
    }

    #[test]
    fn endpoints_and_plateaus() {
        assert_eq!(eval_cantor(0.0, 10).unwrap(), 0.0);
        assert_eq!(eval_cantor(1.0, 10).unwrap(), 1.0);
        assert_eq!(eval_cantor(1.0 / 3.0, 40).unwrap(), 0.5);
        assert_eq!(eval_cantor(0.5, 40).unwrap(), 0.5);
        assert_eq!(eval_cantor(2.0 / 3.0, 40).unwrap(), 0.5);
    }

    #[test]
    fn quarter_maps_to_third() {
        let v = eval_cantor(0.25, 40).unwrap();
        assert!((v - 1.0 / 3.0).abs() <= 2f64.powi(-40));
        assert!((v - cantor_rational(1, 4, 40)).abs() < 1e-15);
    }

    #[test]
    fn agrees_with_rational_oracle() {
        for q in [7u64, 9, 10, 13, 81, 100] {
            for p in 1..q {
                let x = p as f64 / q as f64;
                let a = cantor(x);
                let b = cantor_rational(p, q, 48);
                // x is a rounded rational; Hölder exponent log2/log3
                assert!((a - b).abs() < 1e-9, "{p}/{q}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(eval_cantor(-0.1, 10).is_err());
        assert!(eval_cantor(1.5, 10).is_err());
        assert!(eval_cantor(0.5, 0).is_err());
    }

    #[test]
    fn tiny_arguments() {
        let x = 1e-30;
        let v = cantor(x);
        assert!((0.0..1e-18).contains(&v));
    }

    #[test]
    fn integral_matches_riemann_sum() {
        assert!((cantor_integral(1.0) - 0.5).abs() < 1e-15);
        assert!((cantor_integral(1.0 / 3.0) - 1.0 / 12.0).abs() < 1e-15);
        assert!((cantor_integral(2.0 / 3.0) - 0.25).abs() < 1e-15);
        for &x in &[0.1, 0.25, 0.4, 0.77, 0.95] {
            let n = 200_000;
            let h = x / n as f64;
            let s: f64 = (0..n).map(|i| cantor((i as f64 + 0.5) * h)).sum::<f64>() * h;
            assert!((cantor_integral(x) - s).abs() < 1e-5, "x={x}");
        }
    }
}
