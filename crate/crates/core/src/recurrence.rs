//! Positive linear recurrences `G_{n+1} = c_1 G_n + ... + c_L G_{n+1-L}`.
//!
//! A [`RecurrenceSpec`] holds the coefficients and the first `L` terms; a
//! [`SequenceTable`] caches the exact terms `G_1..G_N` (and, once the
//! counting module has filled them in, the super-legal counts `H_1..H_N`).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZeckError};
use crate::numeric::{ln_big, ratio_f64};

/// Where the initial terms of a spec came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Explicit,
    Canonical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    coeffs: Vec<u32>,
    initial_terms: Vec<BigUint>,
    origin: Origin,
}

fn check_coeffs(coeffs: &[i64]) -> Result<Vec<u32>> {
    if coeffs.is_empty() {
        return Err(ZeckError::EmptyCoeffs);
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for (i, &c) in coeffs.iter().enumerate() {
        if c < 0 {
            return Err(ZeckError::NegativeCoeff {
                index: i + 1,
                value: c,
            });
        }
        let c = u32::try_from(c).map_err(|_| {
            ZeckError::InvalidParameter(format!("coefficient {} does not fit in 32 bits", i + 1))
        })?;
        out.push(c);
    }
    if out[0] == 0 || out[out.len() - 1] == 0 {
        return Err(ZeckError::ZeroLeadCoeff);
    }
    Ok(out)
}

/// Initial terms under the convention `G_1 = 1`,
/// `G_{n+1} = c_1 G_n + ... + c_n G_1 + 1` for `n < L`.
///
/// These are the terms for which every integer has exactly one legal
/// decomposition.
pub fn canonical_initial_terms(coeffs: &[i64]) -> Result<Vec<BigUint>> {
    let coeffs = check_coeffs(coeffs)?;
    Ok(canonical_terms(&coeffs))
}

fn canonical_terms(coeffs: &[u32]) -> Vec<BigUint> {
    let len = coeffs.len();
    let mut terms: Vec<BigUint> = Vec::with_capacity(len);
    terms.push(BigUint::one());
    for n in 1..len {
        // G_{n+1} = sum_{i=1..n} c_i G_{n+1-i} + 1
        let mut next = BigUint::one();
        for i in 1..=n {
            next += &terms[n - i] * coeffs[i - 1];
        }
        terms.push(next);
    }
    terms
}

/// Validates a coefficient list and optional initial terms.
///
/// Without initial terms the canonical ones are used.
pub fn validate_spec(coeffs: &[i64], initial_terms: Option<&[BigInt]>) -> Result<RecurrenceSpec> {
    let coeffs = check_coeffs(coeffs)?;
    match initial_terms {
        None => Ok(RecurrenceSpec {
            initial_terms: canonical_terms(&coeffs),
            coeffs,
            origin: Origin::Canonical,
        }),
        Some(terms) => {
            if terms.len() != coeffs.len() {
                return Err(ZeckError::WrongInitialLength {
                    expected: coeffs.len(),
                    got: terms.len(),
                });
            }
            let mut out = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                if !t.is_positive() {
                    return Err(ZeckError::NonPositiveInitialTerm { index: i + 1 });
                }
                out.push(t.magnitude().clone());
            }
            let origin = if out == canonical_terms(&coeffs) {
                Origin::Canonical
            } else {
                Origin::Explicit
            };
            Ok(RecurrenceSpec {
                coeffs,
                initial_terms: out,
                origin,
            })
        }
    }
}

impl RecurrenceSpec {
    /// Canonical spec for the given coefficients.
    pub fn canonical(coeffs: &[u32]) -> Result<Self> {
        let signed: Vec<i64> = coeffs.iter().map(|&c| c as i64).collect();
        validate_spec(&signed, None)
    }

    /// Spec with explicit initial terms given as machine integers.
    pub fn with_initial(coeffs: &[u32], initial: &[u64]) -> Result<Self> {
        let signed: Vec<i64> = coeffs.iter().map(|&c| c as i64).collect();
        let terms: Vec<BigInt> = initial.iter().map(|&t| BigInt::from(t)).collect();
        validate_spec(&signed, Some(&terms))
    }

    /// Fibonacci numbers indexed `1, 2, 3, 5, 8, ...`.
    pub fn fibonacci() -> Self {
        Self::canonical(&[1, 1]).expect("fibonacci coefficients are valid")
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// `c_i` with 1-based `i`; zero outside `1..=L`.
    pub fn c(&self, i: usize) -> u32 {
        if i == 0 || i > self.coeffs.len() {
            0
        } else {
            self.coeffs[i - 1]
        }
    }

    /// Recurrence depth `L`.
    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    pub fn max_coeff(&self) -> u32 {
        self.coeffs.iter().copied().max().unwrap_or(0)
    }

    pub fn coeff_sum(&self) -> u64 {
        self.coeffs.iter().map(|&c| c as u64).sum()
    }

    pub fn initial_terms(&self) -> &[BigUint] {
        &self.initial_terms
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn is_canonical(&self) -> bool {
        self.origin == Origin::Canonical
    }

    /// Applies the recurrence to the last `L` entries of `history`.
    pub(crate) fn next_from(&self, history: &[BigUint]) -> BigUint {
        let n = history.len();
        let mut acc = BigUint::zero();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                acc += &history[n - 1 - i] * c;
            }
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    coeffs: Vec<i64>,
    #[serde(default)]
    initial_terms: Option<Vec<String>>,
}

impl Serialize for RecurrenceSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecJson {
            coeffs: self.coeffs.iter().map(|&c| c as i64).collect(),
            initial_terms: Some(self.initial_terms.iter().map(|t| t.to_string()).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RecurrenceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SpecJson::deserialize(d)?;
        let terms = match raw.initial_terms {
            None => None,
            Some(list) => Some(
                list.iter()
                    .map(|t| t.parse::<BigInt>().map_err(D::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()?,
            ),
        };
        validate_spec(&raw.coeffs, terms.as_deref()).map_err(D::Error::custom)
    }
}

/// Exact terms `G_1..G_N`, optionally paired with super-legal counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    spec: RecurrenceSpec,
    g_values: Vec<BigUint>,
    h_values: Option<Vec<BigUint>>,
}

/// Generates the first `count` terms of the sequence.
pub fn generate_sequence(spec: &RecurrenceSpec, count: usize) -> SequenceTable {
    let count = count.max(1);
    let mut g: Vec<BigUint> = spec.initial_terms.iter().take(count).cloned().collect();
    while g.len() < count {
        let next = spec.next_from(&g);
        g.push(next);
    }
    SequenceTable {
        spec: spec.clone(),
        g_values: g,
        h_values: None,
    }
}

impl SequenceTable {
    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.g_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g_values.is_empty()
    }

    pub fn g_values(&self) -> &[BigUint] {
        &self.g_values
    }

    /// `G_i` with 1-based `i`. Panics when `i` is outside `1..=len`.
    pub fn g(&self, i: usize) -> &BigUint {
        &self.g_values[i - 1]
    }

    /// `G_{N+1}`, the exclusive upper bound of values decomposable over the table.
    pub fn bound(&self) -> BigUint {
        if self.g_values.len() < self.spec.depth() {
            return self.spec.initial_terms[self.g_values.len()].clone();
        }
        self.spec.next_from(&self.g_values)
    }

    /// Grows the table to at least `count` terms.
    pub fn extend_to(&mut self, count: usize) {
        while self.g_values.len() < count {
            let next = if self.g_values.len() < self.spec.depth() {
                self.spec.initial_terms[self.g_values.len()].clone()
            } else {
                self.spec.next_from(&self.g_values)
            };
            self.g_values.push(next);
        }
    }

    pub fn h_values(&self) -> Option<&[BigUint]> {
        self.h_values.as_deref()
    }

    /// `H_i` with `H_0 = 1` (the empty string). `None` when counts are absent
    /// or `i` exceeds the attached range.
    pub fn h(&self, i: usize) -> Option<BigUint> {
        if i == 0 {
            return Some(BigUint::one());
        }
        self.h_values.as_ref()?.get(i - 1).cloned()
    }

    /// Attaches super-legal counts `H_1..H_k`.
    pub fn with_h(mut self, h: Vec<BigUint>) -> Self {
        self.h_values = Some(h);
        self
    }

    /// `G_{n+1} / G_n` as a float, for `1 ≤ n < len`.
    pub fn growth_ratio(&self, n: usize) -> f64 {
        ratio_f64(self.g(n + 1), self.g(n))
    }
}

/// Dominant root `λ1` of `λ^L − c_1 λ^{L−1} − … − c_L`.
///
/// Bisects `1 − Σ c_i λ^{−i}` (monotone on `λ > 0`) over `(1, 1 + Σ c_i]`
/// and polishes with a few Newton steps.
pub fn dominant_root(spec: &RecurrenceSpec, tolerance: f64) -> f64 {
    let sum = spec.coeff_sum();
    if sum == 1 {
        return 1.0;
    }
    let h = |x: f64| -> (f64, f64) {
        // value and derivative of 1 - sum c_i x^{-i}
        let inv = 1.0 / x;
        let mut p = 1.0;
        let mut val = 1.0;
        let mut der = 0.0;
        for (i, &c) in spec.coeffs.iter().enumerate() {
            p *= inv;
            val -= c as f64 * p;
            der += (i + 1) as f64 * c as f64 * p * inv;
        }
        (val, der)
    };
    let mut lo = 1.0_f64;
    let mut hi = 1.0 + sum as f64;
    let target = tolerance.clamp(f64::EPSILON, 1e-12);
    while hi - lo > target * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid).0 > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..4 {
        let (v, d) = h(x);
        if d <= 0.0 {
            break;
        }
        let step = v / d;
        let next = x - step;
        if next.is_nan() || next <= 1.0 || (next - x).abs() > 1e-9 {
            break;
        }
        x = next;
        if step.abs() < f64::EPSILON * x {
            break;
        }
    }
    x
}

/// Dominant term fit `G_n ≈ A λ1^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinetFit {
    pub lambda1: f64,
    pub a_const: f64,
    /// `|G_n − A λ1^n| / G_n` for `n = 1..=N`.
    pub residual_profile: Vec<f64>,
    /// First index from which the profile is nonincreasing (values below
    /// `1e-12` are treated as equal).
    pub burn_in: usize,
}

/// Residuals below this are float noise.
const RESIDUAL_FLOOR: f64 = 1e-12;

/// Fits `A` as the geometric mean of `G_n / λ1^n` over the last eleven terms.
pub fn fit_binet_constant(table: &SequenceTable, lambda1: f64) -> Result<BinetFit> {
    let len = table.len();
    let needed = 2 * table.spec().depth() + 10;
    if len < needed {
        return Err(ZeckError::TableTooShort { len, needed });
    }
    let ln_lambda = lambda1.ln();
    let log_ratio = |n: usize| ln_big(table.g(n)) - n as f64 * ln_lambda;
    let window = (len - 10)..=len;
    let width = window.clone().count() as f64;
    let ln_a = window.map(log_ratio).sum::<f64>() / width;
    let a_const = ln_a.exp();
    let residual_profile: Vec<f64> = (1..=len)
        .map(|n| (1.0 - (ln_a - log_ratio(n)).exp()).abs())
        .collect();
    let clamped: Vec<f64> = residual_profile
        .iter()
        .map(|&r| r.max(RESIDUAL_FLOOR))
        .collect();
    let mut burn_in = len;
    while burn_in > 1 && clamped[burn_in - 2] >= clamped[burn_in - 1] {
        burn_in -= 1;
    }
    Ok(BinetFit {
        lambda1,
        a_const,
        residual_profile,
        burn_in,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn canonical_terms_match_partial_sum_rule() {
        assert_eq!(canonical_initial_terms(&[1, 1]).unwrap(), big(&[1, 2]));
        assert_eq!(
            canonical_initial_terms(&[1, 2, 3]).unwrap(),
            big(&[1, 2, 5])
        );
        assert_eq!(canonical_initial_terms(&[2]).unwrap(), big(&[1]));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(validate_spec(&[0, 1], None), Err(ZeckError::ZeroLeadCoeff));
        assert_eq!(validate_spec(&[1, 0], None), Err(ZeckError::ZeroLeadCoeff));
        assert_eq!(validate_spec(&[], None), Err(ZeckError::EmptyCoeffs));
        assert_eq!(
            validate_spec(&[1, -1, 1], None),
            Err(ZeckError::NegativeCoeff {
                index: 2,
                value: -1
            })
        );
        let one = [BigInt::from(1)];
        assert_eq!(
            validate_spec(&[1, 1], Some(&one)),
            Err(ZeckError::WrongInitialLength {
                expected: 2,
                got: 1
            })
        );
        let bad = [BigInt::from(1), BigInt::from(0)];
        assert_eq!(
            validate_spec(&[1, 1], Some(&bad)),
            Err(ZeckError::NonPositiveInitialTerm { index: 2 })
        );
    }

    #[test]
    fn explicit_canonical_terms_are_tagged_canonical() {
        let spec = RecurrenceSpec::with_initial(&[1, 1], &[1, 2]).unwrap();
        assert_eq!(spec.origin(), Origin::Canonical);
        let spec = RecurrenceSpec::with_initial(&[1, 2, 3], &[1, 3, 8]).unwrap();
        assert_eq!(spec.origin(), Origin::Explicit);
    }

    #[test]
    fn sequences() {
        let fib = generate_sequence(&RecurrenceSpec::fibonacci(), 6);
        assert_eq!(fib.g_values(), big(&[1, 2, 3, 5, 8, 13]).as_slice());
        assert_eq!(fib.bound(), BigUint::from(21u32));

        let ex = RecurrenceSpec::with_initial(&[1, 2, 3], &[1, 3, 8]).unwrap();
        let t = generate_sequence(&ex, 8);
        assert_eq!(
            t.g_values(),
            big(&[1, 3, 8, 17, 42, 100, 235, 561]).as_slice()
        );

        let can = generate_sequence(&RecurrenceSpec::canonical(&[1, 2, 3]).unwrap(), 5);
        assert_eq!(can.g_values(), big(&[1, 2, 5, 12, 28]).as_slice());
    }

    #[test]
    fn short_tables_still_report_bound() {
        let spec = RecurrenceSpec::canonical(&[1, 2, 3]).unwrap();
        let t = generate_sequence(&spec, 1);
        assert_eq!(t.bound(), BigUint::from(2u32));
        let mut t = t;
        t.extend_to(5);
        assert_eq!(t.g(5), &BigUint::from(28u32));
    }

    #[test]
    fn roots() {
        let phi = dominant_root(&RecurrenceSpec::fibonacci(), 1e-12);
        assert!((phi - 1.618_033_988_749_895).abs() < 1e-12);
        assert_eq!(
            dominant_root(&RecurrenceSpec::canonical(&[2]).unwrap(), 1e-12),
            2.0
        );
        assert_eq!(
            dominant_root(&RecurrenceSpec::canonical(&[1]).unwrap(), 1e-12),
            1.0
        );
    }

    #[test]
    fn binet_constant_for_doubling_sequence() {
        let spec = RecurrenceSpec::canonical(&[2]).unwrap();
        let table = generate_sequence(&spec, 40);
        let fit = fit_binet_constant(&table, 2.0).unwrap();
        assert!((fit.a_const - 0.5).abs() < 1e-12);
        assert_eq!(fit.burn_in, 1);
    }

    #[test]
    fn binet_needs_long_table() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 13);
        assert_eq!(
            fit_binet_constant(&table, 1.6),
            Err(ZeckError::TableTooShort {
                len: 13,
                needed: 14
            })
        );
    }

    #[test]
    fn spec_json_uses_decimal_strings() {
        let spec = RecurrenceSpec::with_initial(&[1, 2, 3], &[1, 3, 8]).unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"coeffs":[1,2,3],"initial_terms":["1","3","8"]}"#);
        let back: RecurrenceSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        let canon: RecurrenceSpec = serde_json::from_str(r#"{"coeffs":[1,1]}"#).unwrap();
        assert_eq!(canon, RecurrenceSpec::fibonacci());
        assert!(serde_json::from_str::<RecurrenceSpec>(r#"{"coeffs":[0,1]}"#).is_err());
    }
}
