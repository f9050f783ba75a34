//! Exact combinatorics over fixed-length legal strings.
//!
//! Counts come in two flavours that are checked against each other: closed
//! forms built from the `G` and `H` tables, and brute-force enumeration.
//! Block positions refer to the fine segmentation of
//! [`crate::decomposition::fine_positions`], in which each zero that follows a
//! closed block is its own length-one block.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::decomposition::{decompose, fine_positions, Closing};
use crate::enumerate::{fold_legal, Budget, LegalStrings};
use crate::error::{Result, ZeckError};
use crate::numeric::{ln_big, ratio_f64, rational_string, rational_to_f64, to_rational};
use crate::recurrence::{dominant_root, generate_sequence, RecurrenceSpec, SequenceTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Recurrence,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Formula,
    Enumeration,
}

/// `H_1..H_N`: super-legal strings of each fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperLegalTable {
    pub spec: RecurrenceSpec,
    #[serde(serialize_with = "ser_big_list")]
    pub h_values: Vec<BigUint>,
    pub method: CountMethod,
    /// Counting convention, reported alongside the numbers.
    pub convention: &'static str,
}

const H_CONVENTION: &str =
    "fixed-length strings with leading zeros allowed; the all-zero string is counted; H_0 = 1";

fn ser_big_list<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn enumerate_h(spec: &RecurrenceSpec, k: usize, budget: Budget) -> Result<BigUint> {
    let table = generate_sequence(spec, k.max(1));
    let count = fold_legal(
        &table,
        k,
        budget,
        1,
        || 0u64,
        |acc, _, _, state| {
            if state.is_closed() {
                *acc += 1;
            }
        },
        |a, b| a + b,
    )?;
    Ok(BigUint::from(count))
}

/// `H_1..H_n` by brute force or by the recurrence seeded from brute-force
/// values at `n ≤ L`.
pub fn count_super_legal(
    spec: &RecurrenceSpec,
    n: usize,
    method: CountMethod,
    budget: Budget,
) -> Result<SuperLegalTable> {
    let depth = spec.depth();
    let mut h = Vec::with_capacity(n);
    match method {
        CountMethod::Enumeration => {
            for k in 1..=n {
                h.push(enumerate_h(spec, k, budget)?);
            }
        }
        CountMethod::Recurrence => {
            for k in 1..=n.min(depth) {
                h.push(enumerate_h(spec, k, budget)?);
            }
            while h.len() < n {
                let next = spec.next_from(&h);
                h.push(next);
            }
        }
    }
    Ok(SuperLegalTable {
        spec: spec.clone(),
        h_values: h,
        method,
        convention: H_CONVENTION,
    })
}

/// Attaches `H_1..H_len` to a table (recurrence method).
pub fn with_super_legal(table: &SequenceTable) -> Result<SequenceTable> {
    let h = count_super_legal(
        table.spec(),
        table.len(),
        CountMethod::Recurrence,
        Budget::default(),
    )?;
    Ok(table.clone().with_h(h.h_values))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioPoint {
    pub n: usize,
    /// `H_n / G_n` as `"num/den"`.
    pub exact: String,
    pub value: f64,
}

/// Series `H_n / G_n` and its tail estimate of `B / A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub points: Vec<RatioPoint>,
    /// `|r_n − r_{n−1}|` for consecutive points.
    pub deltas: Vec<f64>,
    pub limit_estimate: f64,
}

pub fn hn_gn_ratio(
    table: &SequenceTable,
    window: std::ops::RangeInclusive<usize>,
) -> Result<RatioReport> {
    let h = table.h_values().ok_or(ZeckError::MissingHValues)?;
    let (lo, hi) = (*window.start(), *window.end());
    if lo == 0 || hi > table.len() || hi > h.len() || lo > hi {
        return Err(ZeckError::MissingHValues);
    }
    let points: Vec<RatioPoint> = (lo..=hi)
        .map(|n| {
            let r = to_rational(&h[n - 1], table.g(n));
            RatioPoint {
                n,
                exact: rational_string(&r),
                value: rational_to_f64(&r),
            }
        })
        .collect();
    let deltas = points
        .windows(2)
        .map(|w| (w[1].value - w[0].value).abs())
        .collect();
    let limit_estimate = points.last().map(|p| p.value).unwrap_or(0.0);
    Ok(RatioReport {
        points,
        deltas,
        limit_estimate,
    })
}

/// `G_1..G_{n+1}` and `H_0..H_n` for one string length.
pub(crate) struct Tables {
    g: Vec<BigUint>,
    h: Vec<BigUint>,
}

impl Tables {
    pub(crate) fn new(table: &SequenceTable, n: usize) -> Result<Self> {
        let mut t = table.clone();
        t.extend_to(n + 1);
        let g = t.g_values()[..n + 1].to_vec();
        let mut h = vec![BigUint::one()];
        match table.h_values() {
            Some(attached) if attached.len() >= n => h.extend_from_slice(&attached[..n]),
            _ => h.extend(
                count_super_legal(t.spec(), n, CountMethod::Recurrence, Budget::default())?
                    .h_values,
            ),
        }
        Ok(Tables { g, h })
    }

    /// `G_i`, 1-based.
    fn g(&self, i: usize) -> &BigUint {
        &self.g[i - 1]
    }

    /// `H_i`, with `H_0 = 1`.
    fn h(&self, i: usize) -> &BigUint {
        &self.h[i]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockPositionCount {
    pub n: usize,
    pub j: usize,
    pub k: u32,
    pub length: usize,
    pub position: usize,
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
    pub route: Route,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn check_indices(
    spec: &RecurrenceSpec,
    n: usize,
    j: usize,
    length: usize,
    position: usize,
) -> Result<()> {
    if j == 0 || j > n {
        return Err(ZeckError::IndexOutOfRange(format!(
            "j = {j} not in 1..={n}"
        )));
    }
    if position == 0 || position > length || length > spec.depth() {
        return Err(ZeckError::IndexOutOfRange(format!(
            "need 1 <= r <= l <= L, got r = {position}, l = {length}, L = {}",
            spec.depth()
        )));
    }
    Ok(())
}

/// Multiplicity of digit `k` at position `r` of a closed length-`l` block:
/// `c_l` when `r < l` and `k = c_r`, one when `r = l` and `k < c_r`.
fn block_multiplicity(spec: &RecurrenceSpec, k: u32, length: usize, position: usize) -> u32 {
    if position < length && k == spec.c(position) {
        spec.c(length)
    } else if position == length && k < spec.c(position) {
        1
    } else {
        0
    }
}

fn formula_count(
    spec: &RecurrenceSpec,
    tables: &Tables,
    n: usize,
    j: usize,
    k: u32,
    length: usize,
    position: usize,
) -> Option<BigUint> {
    // block occupies j-r+1 ..= j-r+l
    let before = j.checked_sub(position)?;
    let after = (n + position).checked_sub(j + length)?;
    let mult = block_multiplicity(spec, k, length, position);
    if mult == 0 {
        return Some(BigUint::zero());
    }
    Some(tables.g(after + 1) * tables.h(before) * mult)
}

/// Number of `m ∈ [0, G_{n+1})` whose length-`n` string has `a_j = k` at
/// position `r` of a closed block of length `l`.
#[allow(clippy::too_many_arguments)]
pub fn block_position_count(
    table: &SequenceTable,
    n: usize,
    j: usize,
    k: u32,
    length: usize,
    position: usize,
    route: Route,
    budget: Budget,
) -> Result<BlockPositionCount> {
    let spec = table.spec();
    check_indices(spec, n, j, length, position)?;
    let count = match route {
        Route::Formula => {
            let tables = Tables::new(table, n)?;
            formula_count(spec, &tables, n, j, k, length, position).ok_or(
                ZeckError::BoundaryRegime {
                    n,
                    j,
                    length,
                    position,
                },
            )?
        }
        Route::Enumeration => {
            let tally = block_position_tally(table, n, budget, 1)?;
            tally
                .get(&(j, k, length, position))
                .map(|&c| BigUint::from(c))
                .unwrap_or_default()
        }
    };
    Ok(BlockPositionCount {
        n,
        j,
        k,
        length,
        position,
        count,
        route,
    })
}

/// Key `(j, k, l, r)`.
pub type PositionKey = (usize, u32, usize, usize);

/// Brute-force counts for every `(j, k, l, r)` over closed blocks.
pub fn block_position_tally(
    table: &SequenceTable,
    n: usize,
    budget: Budget,
    workers: usize,
) -> Result<BTreeMap<PositionKey, u64>> {
    let spec = table.spec();
    fold_legal(
        table,
        n,
        budget,
        workers,
        BTreeMap::new,
        |acc, digits, _, _| {
            let fine = fine_positions(digits, spec).expect("enumerated strings are legal");
            for (idx, pos) in fine.iter().enumerate() {
                if pos.closing == Closing::Condition2 {
                    *acc.entry((idx + 1, digits[idx], pos.length, pos.position))
                        .or_insert(0) += 1;
                }
            }
        },
        merge_tallies,
    )
}

fn merge_tallies<K: Ord>(mut a: BTreeMap<K, u64>, b: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (key, v) in b {
        *a.entry(key).or_insert(0) += v;
    }
    a
}

/// Every interior `(j, k, l, r)` with `k ≤ max c_i`, i.e. those where the
/// closed-form count applies.
pub fn interior_keys(spec: &RecurrenceSpec, n: usize) -> Vec<PositionKey> {
    let mut keys = Vec::new();
    for j in 1..=n {
        for length in 1..=spec.depth() {
            for position in 1..=length {
                if position > j || j + length > n + position {
                    continue;
                }
                for k in 0..=spec.max_coeff() {
                    keys.push((j, k, length, position));
                }
            }
        }
    }
    keys
}

/// Exact `p_{j,k}(n) = count_{j,k} / G_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientDistribution {
    pub n: usize,
    pub denominator: BigUint,
    /// `counts[j-1][k]` for `k = 0..=max c_i`.
    pub counts: Vec<Vec<BigUint>>,
    /// Asymptotic `p_k(n)` from the dominant-root constants.
    pub marginal: Vec<f64>,
    pub route: Route,
}

impl CoefficientDistribution {
    pub fn probability(&self, j: usize, k: u32) -> BigRational {
        let count = self
            .counts
            .get(j - 1)
            .and_then(|row| row.get(k as usize))
            .cloned()
            .unwrap_or_default();
        to_rational(&count, &self.denominator)
    }

    pub fn probability_f64(&self, j: usize, k: u32) -> f64 {
        rational_to_f64(&self.probability(j, k))
    }

    /// `Σ_j Σ_k k · p_{j,k}(n)`, the expected number of summands.
    pub fn expected_summands(&self) -> BigRational {
        let mut total = BigUint::zero();
        for row in &self.counts {
            for (k, c) in row.iter().enumerate() {
                total += c * k as u64;
            }
        }
        to_rational(&total, &self.denominator)
    }

    /// CSV with columns `n,j,k,numerator,denominator,float_value`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "j", "k", "numerator", "denominator", "float_value"])
            .expect("in-memory write");
        let den = self.denominator.to_string();
        for (j, row) in self.counts.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                let f = crate::numeric::round_sig(ratio_f64(c, &self.denominator), 12);
                w.write_record([
                    self.n.to_string(),
                    (j + 1).to_string(),
                    k.to_string(),
                    c.to_string(),
                    den.clone(),
                    f.to_string(),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// Strings ending in a short final block: the block covers the last `u`
/// positions and the prefix before it is super-legal.
fn final_block_mass(spec: &RecurrenceSpec, tables: &Tables, n: usize, j: usize, k: u32) -> BigUint {
    let mut total = BigUint::zero();
    for u in 1..spec.depth() {
        if u > n || j + u <= n {
            continue;
        }
        let position = j + u - n;
        if spec.c(position) == k {
            total += tables.h(n - u);
        }
    }
    total
}

/// `p_k(n) = (A B / G_{n+1}) Σ_{l,r} w_{k,l,r} λ1^{n−l+1}`.
fn asymptotic_marginal(spec: &RecurrenceSpec, tables: &Tables, n: usize) -> Vec<f64> {
    let lambda = dominant_root(spec, 1e-14);
    let ln_lambda = lambda.ln();
    // tail estimates of ln A and ln B from the longest available terms
    let ln_a = ln_big(tables.g(n + 1)) - (n + 1) as f64 * ln_lambda;
    let ln_b = if n >= 1 {
        ln_big(tables.h(n)) - n as f64 * ln_lambda
    } else {
        0.0
    };
    let ln_g = ln_big(tables.g(n + 1));
    (0..=spec.max_coeff())
        .map(|k| {
            let mut p = 0.0;
            for length in 1..=spec.depth() {
                for position in 1..=length {
                    let mult = block_multiplicity(spec, k, length, position);
                    if mult > 0 {
                        let ln_term =
                            ln_a + ln_b + (n as f64 - length as f64 + 1.0) * ln_lambda - ln_g;
                        p += mult as f64 * ln_term.exp();
                    }
                }
            }
            p
        })
        .collect()
}

/// Exact coefficient distribution at string length `n`.
///
/// The formula route sums the closed-form block counts for blocks that fit
/// inside the string and adds the mass of strings whose short final block
/// covers position `j`. The enumeration route tallies digits directly.
pub fn coefficient_distribution(
    table: &SequenceTable,
    n: usize,
    route: Route,
    budget: Budget,
) -> Result<CoefficientDistribution> {
    if n == 0 {
        return Err(ZeckError::IndexOutOfRange("n must be at least 1".into()));
    }
    let spec = table.spec();
    let tables = Tables::new(table, n)?;
    let width = spec.max_coeff() as usize + 1;
    let counts = match route {
        Route::Formula => (1..=n)
            .map(|j| {
                (0..width as u32)
                    .map(|k| {
                        let mut total = final_block_mass(spec, &tables, n, j, k);
                        for length in 1..=spec.depth() {
                            for position in 1..=length {
                                if let Some(c) =
                                    formula_count(spec, &tables, n, j, k, length, position)
                                {
                                    total += c;
                                }
                            }
                        }
                        total
                    })
                    .collect()
            })
            .collect(),
        Route::Enumeration => {
            let flat = fold_legal(
                table,
                n,
                budget,
                1,
                || vec![0u64; n * width],
                |acc, digits, _, _| {
                    for (j, &d) in digits.iter().enumerate() {
                        acc[j * width + d as usize] += 1;
                    }
                },
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )?;
            flat.chunks(width)
                .map(|row| row.iter().map(|&c| BigUint::from(c)).collect())
                .collect()
        }
    };
    Ok(CoefficientDistribution {
        n,
        denominator: tables.g(n + 1).clone(),
        counts,
        marginal: asymptotic_marginal(spec, &tables, n),
        route,
    })
}

/// `P(a_j = l | a_i = k)` by exact counting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalReport {
    pub n: usize,
    pub i: usize,
    pub k: u32,
    pub j: usize,
    pub l: u32,
    /// `"num/den"`.
    pub exact: String,
    pub value: f64,
    /// Unconditional `p_{j,l}(n)`.
    pub unconditional: f64,
    /// `value / unconditional`; one under independence.
    pub product_ratio: f64,
    #[serde(skip)]
    pub probability: BigRational,
}

pub fn conditional_distribution(
    table: &SequenceTable,
    n: usize,
    i: usize,
    k: u32,
    j: usize,
    l: u32,
    budget: Budget,
) -> Result<ConditionalReport> {
    if i == 0 || i >= j || j > n {
        return Err(ZeckError::IndexOutOfRange(format!(
            "need 1 <= i < j <= n, got i = {i}, j = {j}, n = {n}"
        )));
    }
    let (given, both, marginal, total) = fold_legal(
        table,
        n,
        budget,
        1,
        || (0u64, 0u64, 0u64, 0u64),
        |acc, digits, _, _| {
            acc.3 += 1;
            let hit_j = digits[j - 1] == l;
            if hit_j {
                acc.2 += 1;
            }
            if digits[i - 1] == k {
                acc.0 += 1;
                if hit_j {
                    acc.1 += 1;
                }
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3),
    )?;
    if given == 0 {
        return Err(ZeckError::EmptyCondition { i, k });
    }
    let probability = to_rational(&BigUint::from(both), &BigUint::from(given));
    let value = rational_to_f64(&probability);
    let unconditional = marginal as f64 / total as f64;
    Ok(ConditionalReport {
        n,
        i,
        k,
        j,
        l,
        exact: rational_string(&probability),
        value,
        unconditional,
        product_ratio: if unconditional > 0.0 {
            value / unconditional
        } else {
            f64::NAN
        },
        probability,
    })
}

/// Outcome of the bijection audit at one string length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub spec: RecurrenceSpec,
    pub n: usize,
    pub string_count: u64,
    pub bound: String,
    pub bijective: bool,
    /// Values in `[0, G_{n+1})` with no legal string (first 100).
    pub missing: Vec<u64>,
    /// Values hit more than once, or outside the range (first 100).
    pub duplicated: Vec<u64>,
    /// Whether `decompose` returned the oracle's string for every value.
    pub decompose_agrees: bool,
}

const LIST_CAP: usize = 100;

/// Checks that length-`n` legal strings map one-to-one onto `[0, G_{n+1})`
/// and that the greedy decomposition reproduces each of them.
pub fn bijection_oracle(table: &SequenceTable, n: usize, budget: Budget) -> Result<OracleReport> {
    let mut t = table.clone();
    t.extend_to(n + 1);
    let bound = t.g(n + 1).clone();
    budget.check(&bound)?;
    let spec = t.spec().clone();
    let bound_u = u64::try_from(&bound).expect("checked against budget");
    let mut hits = vec![0u8; bound_u as usize];
    let mut duplicated = Vec::new();
    let mut count = 0u64;
    let mut agrees = true;
    let mut it = crate::enumerate::enumerate_legal(&t, n, budget)?;
    while let Some((digits, value)) = it.advance() {
        count += 1;
        if value >= bound_u {
            if duplicated.len() < LIST_CAP {
                duplicated.push(value);
            }
            agrees = false;
            continue;
        }
        let slot = &mut hits[value as usize];
        *slot = slot.saturating_add(1);
        if *slot == 2 && duplicated.len() < LIST_CAP {
            duplicated.push(value);
        }
        if agrees {
            match decompose(&BigUint::from(value), &t) {
                Ok(d) if d.len() <= n && d.padded(n) == digits => {}
                _ => agrees = false,
            }
        }
    }
    let missing: Vec<u64> = hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h == 0)
        .map(|(v, _)| v as u64)
        .collect();
    let bijective = missing.is_empty() && duplicated.is_empty() && BigUint::from(count) == bound;
    if !missing.is_empty() {
        agrees = false;
    }
    Ok(OracleReport {
        spec,
        n,
        string_count: count,
        bound: bound.to_string(),
        bijective,
        missing: missing.into_iter().take(LIST_CAP).collect(),
        duplicated,
        decompose_agrees: agrees,
    })
}

/// Legal strings of length `n` as a cursor; re-exported for convenience.
pub fn legal_strings(table: &SequenceTable, n: usize, budget: Budget) -> Result<LegalStrings<'_>> {
    crate::enumerate::enumerate_legal(table, n, budget)
}
