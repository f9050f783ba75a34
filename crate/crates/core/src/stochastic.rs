//! Seeded uniform sampling of `[0, G_{n+1})` and the summand statistics
//! `X_n` (all summands) and `Y_n` (summands lying in a set `S`).
//!
//! Sample `i` of a run with seed `s` is drawn from ChaCha8 stream `i` keyed
//! by `s`, so a sample never depends on how many workers produced the
//! others. Per-sample results are gathered in index order before any
//! floating-point reduction, which keeps reports bit-identical across
//! worker counts.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::benford::{density_qsn, leading_digits, DigitHistogram, SetPredicate};
use crate::decomposition::decompose;
use crate::enumerate::{fold_legal, Budget};
use crate::error::{Result, ZeckError};
use crate::numeric::{rational_string, rational_to_f64, ser_f64, ser_opt_f64};
use crate::recurrence::{RecurrenceSpec, SequenceTable};

/// Generator for sample `index` of a run.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw from `[0, bound)` by rejection on the bit length of
/// `bound − 1`.
pub fn uniform_below<R: RngCore>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let top = bound - 1u32;
    let bits = top.bits();
    if bits == 0 {
        return BigUint::zero();
    }
    let words = bits.div_ceil(32) as usize;
    let spare = (words as u64 * 32 - bits) as u32;
    let mask = u32::MAX >> spare;
    let mut buf = vec![0u32; words];
    loop {
        for w in buf.iter_mut() {
            *w = rng.next_u32();
        }
        buf[words - 1] &= mask;
        let x = BigUint::from_slice(&buf);
        if &x < bound {
            return x;
        }
    }
}

fn check_n(table: &SequenceTable, n: usize) -> Result<()> {
    if n == 0 || n + 1 > table.len() {
        return Err(ZeckError::IndexOutOfRange(format!(
            "n = {n} needs a table of at least {} terms, have {}",
            n + 1,
            table.len()
        )));
    }
    Ok(())
}

fn run_parallel<T: Send>(
    workers: usize,
    count: usize,
    f: impl Fn(usize) -> T + Sync + Send,
) -> Result<Vec<T>> {
    if workers <= 1 {
        return Ok((0..count).map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ZeckError::InvalidParameter(e.to_string()))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}

/// `count` independent uniform draws from `[0, G_{n+1})`.
pub fn sample_uniform(
    table: &SequenceTable,
    n: usize,
    seed: u64,
    count: usize,
    workers: usize,
) -> Result<Vec<BigUint>> {
    check_n(table, n)?;
    let bound = table.g(n + 1).clone();
    run_parallel(workers, count, |i| {
        uniform_below(&bound, &mut sample_rng(seed, i as u64))
    })
}

/// Summand statistics for one value: `X` counts all summands, `Y` those in
/// the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SummandCounts {
    pub x: u64,
    pub y: u64,
}

/// `membership[i-1]` says whether `G_i ∈ S`.
fn counts_for(coeffs: &[u32], membership: &[bool]) -> SummandCounts {
    let len = coeffs.len();
    let mut x = 0u64;
    let mut y = 0u64;
    for (idx, &a) in coeffs.iter().enumerate() {
        if a == 0 {
            continue;
        }
        x += a as u64;
        if membership[len - 1 - idx] {
            y += a as u64;
        }
    }
    SummandCounts { x, y }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Plan {
    /// Every value in `[0, G_{n+1})`, by enumeration.
    Exact,
    Sampled {
        seed: u64,
        count: usize,
    },
}

/// Exact moments from full enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMoments {
    pub x_mean: BigRational,
    pub x_var: BigRational,
    pub y_mean: BigRational,
    pub y_var: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationStat {
    #[serde(serialize_with = "ser_f64")]
    pub epsilon: f64,
    #[serde(serialize_with = "ser_f64")]
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stats {
    #[serde(serialize_with = "ser_f64")]
    pub x_mean: f64,
    #[serde(serialize_with = "ser_f64")]
    pub x_var: f64,
    #[serde(serialize_with = "ser_f64")]
    pub y_mean: f64,
    #[serde(serialize_with = "ser_f64")]
    pub y_var: f64,
    /// Mean of `Y/X` over values with `X > 0`.
    #[serde(serialize_with = "ser_f64")]
    pub ratio_mean: f64,
    #[serde(serialize_with = "ser_f64")]
    pub ratio_var: f64,
    /// Standard errors of the sampled means (zero for exact plans).
    #[serde(serialize_with = "ser_f64")]
    pub x_mean_se: f64,
    #[serde(serialize_with = "ser_f64")]
    pub y_mean_se: f64,
    /// Values with `X = 0` (only `m = 0`), left out of the ratio statistics.
    pub zero_excluded: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concentration: Option<ConcentrationStat>,
    /// Exact moments as `"num/den"` strings (exact plans only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactStrings>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactStrings {
    pub x_mean: String,
    pub x_var: String,
    pub y_mean: String,
    pub y_var: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub spec: RecurrenceSpec,
    pub n: usize,
    pub plan: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub count: u64,
    /// Density `d` used for ratio comparisons, from `q(S, N)` at the table horizon.
    #[serde(serialize_with = "ser_f64")]
    pub density: f64,
    pub stats: Stats,
    /// Slope of `E[X_n]` against `n` when computed over a ladder.
    #[serde(
        serialize_with = "ser_opt_f64",
        skip_serializing_if = "Option::is_none"
    )]
    pub c_estimate: Option<f64>,
    pub histograms: Vec<DigitHistogram>,
    #[serde(skip)]
    pub samples: Vec<SummandCounts>,
    #[serde(skip)]
    pub exact: Option<ExactMoments>,
}

impl ExperimentReport {
    /// Fraction of values with `|Y/X − d| < ε`, among those with `X > 0`.
    pub fn within(&self, epsilon: f64) -> f64 {
        within_band(&self.samples, self.density, epsilon).0
    }
}

fn within_band(samples: &[SummandCounts], density: f64, epsilon: f64) -> (f64, u64) {
    let mut used = 0u64;
    let mut hits = 0u64;
    for s in samples {
        if s.x == 0 {
            continue;
        }
        used += 1;
        if ((s.y as f64 / s.x as f64) - density).abs() < epsilon {
            hits += 1;
        }
    }
    let frac = if used == 0 {
        1.0
    } else {
        hits as f64 / used as f64
    };
    (frac, samples.len() as u64 - used)
}

/// Draws samples and computes their summand counts.
pub fn sample_summands(
    table: &SequenceTable,
    n: usize,
    pred: &SetPredicate,
    seed: u64,
    count: usize,
    workers: usize,
) -> Result<Vec<SummandCounts>> {
    check_n(table, n)?;
    let membership = pred.membership(table, n);
    let bound = table.g(n + 1).clone();
    let results = run_parallel(workers, count, |i| {
        let m = uniform_below(&bound, &mut sample_rng(seed, i as u64));
        decompose(&m, table).map(|d| counts_for(d.coeffs(), &membership))
    })?;
    results.into_iter().collect()
}

fn float_moments(samples: &[SummandCounts]) -> (f64, f64, f64, f64) {
    let len = samples.len() as f64;
    let x_mean = samples.iter().map(|s| s.x as f64).sum::<f64>() / len;
    let y_mean = samples.iter().map(|s| s.y as f64).sum::<f64>() / len;
    let denom = (len - 1.0).max(1.0);
    let x_var = samples
        .iter()
        .map(|s| (s.x as f64 - x_mean).powi(2))
        .sum::<f64>()
        / denom;
    let y_var = samples
        .iter()
        .map(|s| (s.y as f64 - y_mean).powi(2))
        .sum::<f64>()
        / denom;
    (x_mean, x_var, y_mean, y_var)
}

fn ratio_moments(samples: &[SummandCounts]) -> (f64, f64, u64) {
    let ratios: Vec<f64> = samples
        .iter()
        .filter(|s| s.x > 0)
        .map(|s| s.y as f64 / s.x as f64)
        .collect();
    let zero = samples.len() as u64 - ratios.len() as u64;
    if ratios.is_empty() {
        return (f64::NAN, f64::NAN, zero);
    }
    let len = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / len;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (len - 1.0).max(1.0);
    (mean, var, zero)
}

/// Density used as the comparison target: `q(S, N)` over the whole table.
pub fn horizon_density(pred: &SetPredicate, table: &SequenceTable) -> Result<f64> {
    Ok(density_qsn(pred, table, table.len())?.value)
}

/// Mean and variance of `X_n` and `Y_n`, exactly or from samples.
pub fn xy_stats(
    table: &SequenceTable,
    n: usize,
    pred: &SetPredicate,
    plan: &Plan,
    workers: usize,
    budget: Budget,
) -> Result<ExperimentReport> {
    check_n(table, n)?;
    let density = horizon_density(pred, table)?;
    match *plan {
        Plan::Exact => {
            let membership = pred.membership(table, n);
            let sums = fold_legal(
                table,
                n,
                budget,
                workers,
                ExactSums::default,
                |acc, digits, _, _| acc.add(counts_for(digits, &membership)),
                ExactSums::merge,
            )?;
            let moments = sums.moments();
            let samples = sums.samples;
            let (ratio_mean, ratio_var, zero_excluded) = ratio_moments(&samples);
            let stats = Stats {
                x_mean: rational_to_f64(&moments.x_mean),
                x_var: rational_to_f64(&moments.x_var),
                y_mean: rational_to_f64(&moments.y_mean),
                y_var: rational_to_f64(&moments.y_var),
                ratio_mean,
                ratio_var,
                x_mean_se: 0.0,
                y_mean_se: 0.0,
                zero_excluded,
                concentration: None,
                exact: Some(ExactStrings {
                    x_mean: rational_string(&moments.x_mean),
                    x_var: rational_string(&moments.x_var),
                    y_mean: rational_string(&moments.y_mean),
                    y_var: rational_string(&moments.y_var),
                }),
            };
            Ok(ExperimentReport {
                spec: table.spec().clone(),
                n,
                plan: "exact",
                seed: None,
                count: sums.count,
                density,
                stats,
                c_estimate: None,
                histograms: Vec::new(),
                samples,
                exact: Some(moments),
            })
        }
        Plan::Sampled { seed, count } => {
            if count < 2 {
                return Err(ZeckError::DegenerateSample(count));
            }
            let samples = sample_summands(table, n, pred, seed, count, workers)?;
            let (x_mean, x_var, y_mean, y_var) = float_moments(&samples);
            let (ratio_mean, ratio_var, zero_excluded) = ratio_moments(&samples);
            let len = count as f64;
            let stats = Stats {
                x_mean,
                x_var,
                y_mean,
                y_var,
                ratio_mean,
                ratio_var,
                x_mean_se: (x_var / len).sqrt(),
                y_mean_se: (y_var / len).sqrt(),
                zero_excluded,
                concentration: None,
                exact: None,
            };
            Ok(ExperimentReport {
                spec: table.spec().clone(),
                n,
                plan: "sampled",
                seed: Some(seed),
                count: count as u64,
                density,
                stats,
                c_estimate: None,
                histograms: Vec::new(),
                samples,
                exact: None,
            })
        }
    }
}

#[derive(Debug, Default)]
struct ExactSums {
    count: u64,
    x: u128,
    x2: u128,
    y: u128,
    y2: u128,
    samples: Vec<SummandCounts>,
}

impl ExactSums {
    fn add(&mut self, c: SummandCounts) {
        self.count += 1;
        self.x += c.x as u128;
        self.x2 += (c.x as u128) * (c.x as u128);
        self.y += c.y as u128;
        self.y2 += (c.y as u128) * (c.y as u128);
        self.samples.push(c);
    }

    fn merge(mut a: Self, b: Self) -> Self {
        a.count += b.count;
        a.x += b.x;
        a.x2 += b.x2;
        a.y += b.y;
        a.y2 += b.y2;
        a.samples.extend(b.samples);
        a
    }

    fn moments(&self) -> ExactMoments {
        let n = BigRational::from_integer(self.count.into());
        let mean = |s: u128| BigRational::from_integer(s.into()) / &n;
        let x_mean = mean(self.x);
        let y_mean = mean(self.y);
        let x_var = mean(self.x2) - &x_mean * &x_mean;
        let y_var = mean(self.y2) - &y_mean * &y_mean;
        ExactMoments {
            x_mean,
            x_var,
            y_mean,
            y_var,
        }
    }
}

/// Least-squares slope of `E[X_n]` against `n`.
pub fn summand_constant(points: &[(usize, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = points.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Runs [`xy_stats`] along a ladder of `n` and fills in the slope estimate
/// of `C` on every report.
pub fn xy_ladder(
    table: &SequenceTable,
    ladder: &[usize],
    pred: &SetPredicate,
    plan: &Plan,
    workers: usize,
    budget: Budget,
) -> Result<Vec<ExperimentReport>> {
    let mut reports = ladder
        .iter()
        .map(|&n| xy_stats(table, n, pred, plan, workers, budget))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(usize, f64)> = reports.iter().map(|r| (r.n, r.stats.x_mean)).collect();
    let c = summand_constant(&points);
    for r in &mut reports {
        r.c_estimate = c;
    }
    Ok(reports)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationPoint {
    pub n: usize,
    #[serde(serialize_with = "ser_f64")]
    pub fraction: f64,
    pub samples_used: u64,
    pub zero_excluded: u64,
    #[serde(serialize_with = "ser_f64")]
    pub ratio_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub spec: RecurrenceSpec,
    pub seed: u64,
    pub count: usize,
    #[serde(serialize_with = "ser_f64")]
    pub epsilon: f64,
    #[serde(serialize_with = "ser_f64")]
    pub density: f64,
    /// `"horizon"` when `d` is `q(S, N)` at the table length, `"given"` otherwise.
    pub density_source: &'static str,
    pub points: Vec<ConcentrationPoint>,
}

impl ConcentrationReport {
    pub fn fractions(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.fraction).collect()
    }
}

/// Empirical probability that `Y_n/X_n` lies within `ε` of `d`, per `n`.
#[allow(clippy::too_many_arguments)]
pub fn concentration(
    table: &SequenceTable,
    ladder: &[usize],
    pred: &SetPredicate,
    epsilon: f64,
    seed: u64,
    count: usize,
    density: Option<f64>,
    workers: usize,
) -> Result<ConcentrationReport> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(ZeckError::InvalidParameter(
            "epsilon must be positive".into(),
        ));
    }
    let (d, source) = match density {
        Some(d) => (d, "given"),
        None => (horizon_density(pred, table)?, "horizon"),
    };
    let points = ladder
        .iter()
        .map(|&n| {
            let samples = sample_summands(table, n, pred, seed, count, workers)?;
            let (fraction, zero_excluded) = within_band(&samples, d, epsilon);
            let (ratio_mean, _, _) = ratio_moments(&samples);
            Ok(ConcentrationPoint {
                n,
                fraction,
                samples_used: samples.len() as u64 - zero_excluded,
                zero_excluded,
                ratio_mean,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcentrationReport {
        spec: table.spec().clone(),
        seed,
        count,
        epsilon,
        density: d,
        density_source: source,
        points,
    })
}

/// Pooled leading digits of summands `G_i`, weighted by their coefficients.
pub fn summand_digit_report(
    table: &SequenceTable,
    n: usize,
    base: u32,
    seed: u64,
    count: usize,
    workers: usize,
) -> Result<DigitHistogram> {
    check_n(table, n)?;
    let digits = leading_digits(table, n, base)?;
    let bound = table.g(n + 1).clone();
    let per_sample = run_parallel(workers, count, |i| {
        let m = uniform_below(&bound, &mut sample_rng(seed, i as u64));
        decompose(&m, table).map(|d| {
            let mut counts = vec![0u64; base as usize];
            let len = d.len();
            for (idx, &a) in d.coeffs().iter().enumerate() {
                if a > 0 {
                    counts[digits[len - 1 - idx] as usize] += a as u64;
                }
            }
            counts
        })
    })?;
    let mut totals = vec![0u64; base as usize];
    for counts in per_sample {
        for (t, c) in totals.iter_mut().zip(counts?) {
            *t += c;
        }
    }
    DigitHistogram::from_counts(base, &totals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::generate_sequence;

    #[test]
    fn samples_in_range_and_reproducible() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 30);
        let a = sample_uniform(&table, 20, 7, 500, 1).unwrap();
        let b = sample_uniform(&table, 20, 7, 500, 8).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|m| m < table.g(21)));
        let c = sample_uniform(&table, 20, 8, 500, 1).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_below_one_is_zero() {
        let mut rng = sample_rng(1, 0);
        assert!(uniform_below(&BigUint::from(1u32), &mut rng).is_zero());
    }

    #[test]
    fn universal_predicate_gives_equal_statistics() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 14);
        let r = xy_stats(
            &table,
            12,
            &SetPredicate::Everything,
            &Plan::Exact,
            1,
            Budget::default(),
        )
        .unwrap();
        let m = r.exact.as_ref().unwrap();
        assert_eq!(m.x_mean, m.y_mean);
        assert_eq!(m.x_var, m.y_var);
        assert!(r.samples.iter().all(|s| s.x == s.y));
        let empty = SetPredicate::indices([]);
        let r = xy_stats(&table, 12, &empty, &Plan::Exact, 1, Budget::default()).unwrap();
        assert!(r.samples.iter().all(|s| s.y == 0));
    }

    #[test]
    fn degenerate_sample_is_rejected() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 14);
        let plan = Plan::Sampled { seed: 1, count: 1 };
        assert_eq!(
            xy_stats(
                &table,
                12,
                &SetPredicate::even(),
                &plan,
                1,
                Budget::default()
            )
            .unwrap_err(),
            ZeckError::DegenerateSample(1)
        );
    }

    #[test]
    fn trivial_concentration_cases() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 101);
        let r = concentration(&table, &[100], &SetPredicate::even(), 1.0, 3, 200, None, 1).unwrap();
        assert_eq!(r.points[0].fraction, 1.0);
        let r = concentration(
            &table,
            &[100],
            &SetPredicate::Everything,
            1e-9,
            3,
            200,
            None,
            1,
        )
        .unwrap();
        assert_eq!(r.points[0].fraction, 1.0);
        assert_eq!(r.density, 1.0);
    }

    #[test]
    fn base_two_summand_digits() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 60);
        let h = summand_digit_report(&table, 50, 2, 1, 50, 1).unwrap();
        assert_eq!(h.bins.len(), 1);
        assert_eq!(h.frequency(1), 1.0);
        assert_eq!(h.sup_distance, 0.0);
    }

    #[test]
    fn slope_of_line() {
        let pts = [(10, 3.0), (20, 5.0), (30, 7.0)];
        assert!((summand_constant(&pts).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(summand_constant(&pts[..1]), None);
    }
}
