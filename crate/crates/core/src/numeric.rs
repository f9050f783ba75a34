//! Small numeric helpers shared by the float-facing reports.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Keeps the top 64 bits of `x`, returning `(mantissa, shift)` with
/// `x ≈ mantissa · 2^shift`.
fn top_bits(x: &BigUint) -> (u64, i64) {
    let bits = x.bits();
    if bits <= 64 {
        (x.to_u64().unwrap_or(u64::MAX), 0)
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
        (top, shift as i64)
    }
}

/// Natural logarithm of a positive big integer, accurate to f64 precision.
pub fn ln_big(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let (top, shift) = top_bits(x);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a / b` as a float without materializing either side as f64 first.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let (ta, sa) = top_bits(a);
    let (tb, sb) = top_bits(b);
    let exp = sa - sb;
    let q = ta as f64 / tb as f64;
    q * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer().abs().to_biguint().unwrap_or_default();
    let den = r.denom().abs().to_biguint().unwrap_or_default();
    let v = ratio_f64(&num, &den);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

pub fn to_rational(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    s.parse().unwrap_or(x)
}

/// Rational rendered as `"num/den"`.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serializes a float rounded to 12 significant digits; non-finite as null.
pub fn ser_f64<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round_sig(*x, 12))
    } else {
        s.serialize_none()
    }
}

pub fn ser_opt_f64<S: serde::Serializer>(
    x: &Option<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

pub fn ser_f64_vec<S: serde::Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|&x| x.is_finite().then(|| round_sig(x, 12))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_large_power_of_two() {
        let x = BigUint::from(1u8) << 1000u32;
        let expected = 1000.0 * std::f64::consts::LN_2;
        assert!((ln_big(&x) - expected).abs() < 1e-9);
    }

    #[test]
    fn ratio_of_huge_values() {
        let a = BigUint::from(3u8) << 900u32;
        let b = BigUint::from(2u8) << 900u32;
        assert!((ratio_f64(&a, &b) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn round_sig_keeps_twelve_digits() {
        assert_eq!(
            round_sig(std::f64::consts::LOG10_2, 12).to_string(),
            "0.301029995664"
        );
        assert_eq!(round_sig(0.0, 12), 0.0);
    }
}
