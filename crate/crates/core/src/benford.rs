//! Significands, leading digits, set predicates over sequence elements and
//! Benford diagnostics for the sequence itself.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZeckError};
use crate::numeric::{ln_big, ratio_f64, rational_string, ser_f64};
use crate::recurrence::{dominant_root, SequenceTable};

fn check_base(base: u32) -> Result<()> {
    if base < 2 {
        Err(ZeckError::BadBase(base))
    } else {
        Ok(())
    }
}

/// Returns `(k, B^k)` with `B^k ≤ x < B^{k+1}`.
fn decade(x: &BigUint, base: u32) -> (u32, BigUint) {
    let b = BigUint::from(base);
    let guess = (ln_big(x) / (base as f64).ln()).floor().max(0.0) as u32;
    let mut k = guess.saturating_sub(1);
    let mut pow = num_traits::pow(b.clone(), k as usize);
    while &pow > x {
        k -= 1;
        pow /= &b;
    }
    loop {
        let next = &pow * &b;
        if &next > x {
            break;
        }
        pow = next;
        k += 1;
    }
    (k, pow)
}

/// `S_B(x) ∈ [1, B)` with `x = S_B(x) · B^k`.
pub fn significand(x: &BigUint, base: u32) -> Result<f64> {
    check_base(base)?;
    if x.is_zero() {
        return Err(ZeckError::NonPositiveInput);
    }
    let (_, pow) = decade(x, base);
    Ok(ratio_f64(x, &pow))
}

/// Significand of a positive real.
pub fn significand_f64(x: f64, base: u32) -> Result<f64> {
    check_base(base)?;
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(ZeckError::NonPositiveInput);
    }
    let b = base as f64;
    let k = (x.ln() / b.ln()).floor();
    let mut s = x / b.powf(k);
    if s >= b {
        s /= b;
    } else if s < 1.0 {
        s *= b;
    }
    Ok(s)
}

/// First digit of `x` in base `B`, computed exactly.
pub fn leading_digit(x: &BigUint, base: u32) -> Result<u32> {
    check_base(base)?;
    if x.is_zero() {
        return Err(ZeckError::NonPositiveInput);
    }
    let (_, pow) = decade(x, base);
    Ok((x / pow).to_u32().expect("leading digit is below the base"))
}

/// Benford frequency `log_B(1 + 1/d)`.
pub fn benford_target(base: u32, digit: u32) -> Result<f64> {
    check_base(base)?;
    if digit == 0 || digit >= base {
        return Err(ZeckError::DigitOutOfRange { digit, base });
    }
    Ok((1.0 + 1.0 / digit as f64).ln() / (base as f64).ln())
}

/// Membership test over sequence elements `G_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetPredicate {
    LeadingDigit {
        base: u32,
        digit: u32,
    },
    SignificandAtMost {
        base: u32,
        bound: f64,
    },
    Residue {
        modulus: u64,
        classes: Vec<u64>,
    },
    /// Sequence indices `i` (1-based) selecting `G_i`.
    ExplicitIndexSet {
        indices: BTreeSet<usize>,
    },
    Everything,
}

impl SetPredicate {
    pub fn leading_digit(base: u32, digit: u32) -> Result<Self> {
        check_base(base)?;
        if digit == 0 || digit >= base {
            return Err(ZeckError::DigitOutOfRange { digit, base });
        }
        Ok(SetPredicate::LeadingDigit { base, digit })
    }

    pub fn significand_at_most(base: u32, bound: f64) -> Result<Self> {
        check_base(base)?;
        if !(1.0..=base as f64).contains(&bound) {
            return Err(ZeckError::InvalidParameter(format!(
                "significand bound {bound} outside [1, {base}]"
            )));
        }
        Ok(SetPredicate::SignificandAtMost { base, bound })
    }

    pub fn residue(modulus: u64, classes: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(ZeckError::InvalidParameter(
                "modulus must be positive".into(),
            ));
        }
        Ok(SetPredicate::Residue { modulus, classes })
    }

    pub fn even() -> Self {
        SetPredicate::Residue {
            modulus: 2,
            classes: vec![0],
        }
    }

    pub fn indices(indices: impl IntoIterator<Item = usize>) -> Self {
        SetPredicate::ExplicitIndexSet {
            indices: indices.into_iter().collect(),
        }
    }

    /// Whether `G_index = value` is in the set.
    pub fn contains(&self, value: &BigUint, index: usize) -> bool {
        match self {
            SetPredicate::LeadingDigit { base, digit } => {
                leading_digit(value, *base).is_ok_and(|d| d == *digit)
            }
            SetPredicate::SignificandAtMost { base, bound } => {
                significand(value, *base).is_ok_and(|s| s <= *bound)
            }
            SetPredicate::Residue { modulus, classes } => {
                let r = (value % *modulus).to_u64().expect("residue below modulus");
                classes.iter().any(|&c| c % modulus == r)
            }
            SetPredicate::ExplicitIndexSet { indices } => indices.contains(&index),
            SetPredicate::Everything => true,
        }
    }

    /// Membership of `G_1..G_n`; entry `i-1` is for `G_i`.
    pub fn membership(&self, table: &SequenceTable, n: usize) -> Vec<bool> {
        (1..=n).map(|i| self.contains(table.g(i), i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub n: usize,
    pub hits: usize,
    /// `"hits/n"` in lowest terms.
    pub exact: String,
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    #[serde(serialize_with = "crate::numeric::ser_opt_f64")]
    pub limit_hint: Option<f64>,
    #[serde(skip)]
    pub q: BigRational,
}

/// Fraction `q(S, n)` of `G_1..G_n` lying in the set.
pub fn density_qsn(
    pred: &SetPredicate,
    table: &SequenceTable,
    n: usize,
) -> Result<DensityEstimate> {
    if n == 0 || n > table.len() {
        return Err(ZeckError::IndexOutOfRange(format!(
            "n = {n} not in 1..={}",
            table.len()
        )));
    }
    let hits = pred.membership(table, n).into_iter().filter(|&b| b).count();
    let q = BigRational::new(hits.into(), n.into());
    let limit_hint = match pred {
        SetPredicate::LeadingDigit { base, digit } => benford_target(*base, *digit).ok(),
        SetPredicate::SignificandAtMost { base, bound } => Some(bound.ln() / (*base as f64).ln()),
        SetPredicate::Everything => Some(1.0),
        _ => None,
    };
    Ok(DensityEstimate {
        n,
        hits,
        exact: rational_string(&q),
        value: hits as f64 / n as f64,
        limit_hint,
        q,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitBin {
    pub digit: u32,
    pub count: u64,
    #[serde(serialize_with = "ser_f64")]
    pub frequency: f64,
    #[serde(serialize_with = "ser_f64")]
    pub target: f64,
}

/// Leading-digit histogram against Benford targets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitHistogram {
    pub base: u32,
    pub total: u64,
    pub bins: Vec<DigitBin>,
    /// `max_d |frequency_d − target_d|`.
    #[serde(serialize_with = "ser_f64")]
    pub sup_distance: f64,
}

impl DigitHistogram {
    pub fn from_counts(base: u32, counts: &[u64]) -> Result<Self> {
        check_base(base)?;
        let total: u64 = counts.iter().sum();
        let mut bins = Vec::with_capacity(base as usize - 1);
        let mut sup: f64 = 0.0;
        for digit in 1..base {
            let count = counts.get(digit as usize).copied().unwrap_or(0);
            let frequency = if total == 0 {
                0.0
            } else {
                count as f64 / total as f64
            };
            let target = benford_target(base, digit)?;
            sup = sup.max((frequency - target).abs());
            bins.push(DigitBin {
                digit,
                count,
                frequency,
                target,
            });
        }
        Ok(DigitHistogram {
            base,
            total,
            bins,
            sup_distance: sup,
        })
    }

    pub fn frequency(&self, digit: u32) -> f64 {
        self.bins
            .iter()
            .find(|b| b.digit == digit)
            .map(|b| b.frequency)
            .unwrap_or(0.0)
    }

    /// CSV with columns `digit,frequency,target`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["digit", "frequency", "target"])
            .expect("in-memory write");
        for b in &self.bins {
            w.write_record([
                b.digit.to_string(),
                crate::numeric::round_sig(b.frequency, 12).to_string(),
                crate::numeric::round_sig(b.target, 12).to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// Leading digit of every `G_1..G_n`; entry `i-1` is for `G_i`.
pub fn leading_digits(table: &SequenceTable, n: usize, base: u32) -> Result<Vec<u32>> {
    check_base(base)?;
    (1..=n).map(|i| leading_digit(table.g(i), base)).collect()
}

/// Star discrepancy of points in `[0, 1)`.
pub fn star_discrepancy(points: &[f64]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let len = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let above = (i + 1) as f64 / len - x;
            let below = x - i as f64 / len;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// `log_B G_i mod 1` for `i = 1..=n`.
pub fn log_fractional_parts(table: &SequenceTable, n: usize, base: u32) -> Vec<f64> {
    let ln_b = (base as f64).ln();
    (1..=n)
        .map(|i| {
            let v = ln_big(table.g(i)) / ln_b;
            let f = v - v.floor();
            if f > 1.0 - 1e-9 {
                0.0
            } else {
                f
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyPoint {
    pub n: usize,
    #[serde(serialize_with = "ser_f64")]
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceBenfordReport {
    pub n: usize,
    pub histogram: DigitHistogram,
    /// Star discrepancy of `log_B G_i mod 1` at `n/8, n/4, n/2, n`.
    pub discrepancy: Vec<DiscrepancyPoint>,
    pub discrepancy_decreasing: bool,
    /// Set when `log_B λ1` is (numerically) rational, in which case the
    /// logarithms cannot equidistribute.
    pub rational_log_growth: bool,
}

/// Leading digits of `G_1..G_n` plus an equidistribution diagnostic.
pub fn sequence_benford_report(
    table: &SequenceTable,
    n: usize,
    base: u32,
) -> Result<SequenceBenfordReport> {
    check_base(base)?;
    if n == 0 || n > table.len() {
        return Err(ZeckError::IndexOutOfRange(format!(
            "n = {n} not in 1..={}",
            table.len()
        )));
    }
    let mut counts = vec![0u64; base as usize];
    for d in leading_digits(table, n, base)? {
        counts[d as usize] += 1;
    }
    let histogram = DigitHistogram::from_counts(base, &counts)?;
    let fracs = log_fractional_parts(table, n, base);
    let mut ladder: Vec<usize> = [n / 8, n / 4, n / 2, n]
        .into_iter()
        .filter(|&m| m >= 1)
        .collect();
    ladder.dedup();
    let discrepancy: Vec<DiscrepancyPoint> = ladder
        .iter()
        .map(|&m| DiscrepancyPoint {
            n: m,
            discrepancy: star_discrepancy(&fracs[..m]),
        })
        .collect();
    let discrepancy_decreasing = discrepancy
        .windows(2)
        .all(|w| w[1].discrepancy < w[0].discrepancy);
    let growth = dominant_root(table.spec(), 1e-14).ln() / (base as f64).ln();
    let rational_log_growth = (1..=12u32).any(|q| {
        let x = growth * q as f64;
        (x - x.round()).abs() < 1e-9
    });
    Ok(SequenceBenfordReport {
        n,
        histogram,
        discrepancy,
        discrepancy_decreasing,
        rational_log_growth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{generate_sequence, RecurrenceSpec};

    #[test]
    fn significand_examples() {
        let x = BigUint::from(1274u32);
        assert!((significand(&x, 10).unwrap() - 1.274).abs() < 1e-15);
        assert_eq!(leading_digit(&x, 10).unwrap(), 1);
        assert_eq!(leading_digit(&BigUint::from(89u32), 10).unwrap(), 8);
        for k in [0usize, 1, 7, 300] {
            let p = num_traits::pow(BigUint::from(10u32), k);
            assert_eq!(significand(&p, 10).unwrap(), 1.0);
            let p = num_traits::pow(BigUint::from(7u32), k);
            assert_eq!(significand(&p, 7).unwrap(), 1.0);
        }
        assert_eq!(
            significand(&BigUint::zero(), 10),
            Err(ZeckError::NonPositiveInput)
        );
        assert_eq!(leading_digit(&x, 1), Err(ZeckError::BadBase(1)));
        assert!((significand_f64(0.0123, 10).unwrap() - 1.23).abs() < 1e-12);
    }

    #[test]
    fn leading_digit_at_decade_edges() {
        let b = BigUint::from(10u32);
        for k in 1..60usize {
            let p = num_traits::pow(b.clone(), k);
            assert_eq!(leading_digit(&(&p - 1u32), 10).unwrap(), 9);
            assert_eq!(leading_digit(&p, 10).unwrap(), 1);
        }
    }

    #[test]
    fn benford_targets() {
        assert!((benford_target(10, 1).unwrap() - 2f64.log10()).abs() < 1e-15);
        assert!((benford_target(10, 9).unwrap() - 0.04576).abs() < 1e-5);
        for base in 2..=16 {
            let total: f64 = (1..base).map(|d| benford_target(base, d).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert_eq!(
            benford_target(10, 10),
            Err(ZeckError::DigitOutOfRange {
                digit: 10,
                base: 10
            })
        );
    }

    #[test]
    fn density_of_even_fibonaccis() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 9);
        let d = density_qsn(&SetPredicate::even(), &table, 9).unwrap();
        assert_eq!(d.hits, 3);
        assert_eq!(d.exact, "1/3");
        let all = SetPredicate::indices(1..=9);
        assert_eq!(density_qsn(&all, &table, 9).unwrap().exact, "1/1");
    }

    #[test]
    fn discrepancy_of_grid() {
        let pts: Vec<f64> = (0..10).map(|i| (i as f64 + 0.5) / 10.0).collect();
        assert!((star_discrepancy(&pts) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn powers_of_two_are_flagged() {
        let table = generate_sequence(&RecurrenceSpec::canonical(&[2]).unwrap(), 64);
        let r = sequence_benford_report(&table, 64, 2).unwrap();
        assert!(r.rational_log_growth);
        assert_eq!(r.histogram.frequency(1), 1.0);
        let fib = generate_sequence(&RecurrenceSpec::fibonacci(), 64);
        assert!(
            !sequence_benford_report(&fib, 64, 10)
                .unwrap()
                .rational_log_growth
        );
    }

    #[test]
    fn predicate_constructors_validate() {
        assert!(SetPredicate::leading_digit(10, 0).is_err());
        assert!(SetPredicate::significand_at_most(10, 11.0).is_err());
        assert!(SetPredicate::residue(0, vec![]).is_err());
        let p = SetPredicate::significand_at_most(10, 2.0).unwrap();
        assert!(p.contains(&BigUint::from(1999u32), 1));
        assert!(!p.contains(&BigUint::from(2001u32), 1));
    }
}
