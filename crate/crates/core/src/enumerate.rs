//! Brute-force enumeration of fixed-length legal strings.
//!
//! This is the oracle every closed-form count is checked against. Strings
//! are produced in lexicographic digit order (which is increasing value
//! order for canonical specs). Parallel folds split the work by legal
//! prefix and merge results in prefix order, so the answer never depends on
//! the number of workers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::decomposition::GrammarState;
use crate::error::{Result, ZeckError};
use crate::recurrence::{RecurrenceSpec, SequenceTable};

/// Default cap on the number of strings an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "ZECK_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_strings: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_strings: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(max_strings: u64) -> Self {
        Budget { max_strings }
    }

    /// Reads `ZECK_BUDGET`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    pub(crate) fn check(&self, needed: &BigUint) -> Result<()> {
        if needed > &BigUint::from(self.max_strings) {
            Err(ZeckError::BudgetExceeded {
                needed: needed.to_string(),
                budget: self.max_strings,
            })
        } else {
            Ok(())
        }
    }
}

/// Number of legal strings of length `n`, by dynamic programming over
/// grammar states. Index `0` of the result counts strings ending between
/// blocks (the super-legal ones).
pub fn count_by_state(spec: &RecurrenceSpec, n: usize) -> Vec<BigUint> {
    let depth = spec.depth();
    let mut counts = vec![BigUint::zero(); depth];
    counts[0] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); depth];
        for (r, count) in counts.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            let state = GrammarState(r);
            let Some(max) = state.max_digit(spec) else {
                continue;
            };
            for d in 0..=max {
                if let Some((s, _)) = state.step(d, spec) {
                    next[s.0] += count;
                }
            }
        }
        counts = next;
    }
    counts
}

pub fn legal_string_count(spec: &RecurrenceSpec, n: usize) -> BigUint {
    count_by_state(spec, n).into_iter().sum()
}

/// Place values `G_n, ..., G_1` as machine integers.
fn weights(table: &SequenceTable, n: usize) -> Result<Vec<u64>> {
    let mut t = table.clone();
    t.extend_to(n);
    let max_digit = t.spec().max_coeff() as u64;
    let mut total: u64 = 0;
    let mut out = Vec::with_capacity(n);
    for i in (1..=n).rev() {
        let g = t.g(i).to_u64().ok_or_else(|| ZeckError::BudgetExceeded {
            needed: t.g(i).to_string(),
            budget: u64::MAX,
        })?;
        total = g
            .checked_mul(max_digit)
            .and_then(|x| x.checked_add(total))
            .ok_or_else(|| ZeckError::BudgetExceeded {
                needed: "value overflow".into(),
                budget: u64::MAX,
            })?;
        out.push(g);
    }
    Ok(out)
}

/// Cursor over all legal strings of length `n` sharing a fixed prefix.
pub struct LegalStrings<'a> {
    spec: &'a RecurrenceSpec,
    weights: Vec<u64>,
    fixed: usize,
    digits: Vec<u32>,
    states: Vec<GrammarState>,
    value: u64,
    fresh: bool,
    done: bool,
}

impl<'a> LegalStrings<'a> {
    fn with_weights(spec: &'a RecurrenceSpec, weights: Vec<u64>, prefix: &[u32]) -> Self {
        let n = weights.len();
        let mut it = LegalStrings {
            spec,
            weights,
            fixed: prefix.len().min(n),
            digits: vec![0; n],
            states: vec![GrammarState::START; n + 1],
            value: 0,
            fresh: true,
            done: false,
        };
        it.digits[..it.fixed].copy_from_slice(&prefix[..it.fixed]);
        it.done = !it.refill(0);
        it
    }

    /// Recomputes states and value from position `from` onward, resetting
    /// free positions after `from` to zero. False if the fixed prefix is
    /// rejected.
    fn refill(&mut self, from: usize) -> bool {
        for i in from..self.digits.len() {
            if i > from && i >= self.fixed {
                self.digits[i] = 0;
            }
            match self.states[i].step(self.digits[i], self.spec) {
                Some((s, _)) => self.states[i + 1] = s,
                None => return false,
            }
        }
        self.value = self
            .digits
            .iter()
            .zip(&self.weights)
            .map(|(&d, &w)| d as u64 * w)
            .sum();
        true
    }

    /// Moves to the next string, returning its digits and value.
    pub fn advance(&mut self) -> Option<(&[u32], u64)> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some((&self.digits, self.value));
        }
        let mut i = self.digits.len();
        loop {
            if i <= self.fixed {
                self.done = true;
                return None;
            }
            i -= 1;
            let max = self.states[i].max_digit(self.spec).unwrap_or(0);
            if self.digits[i] < max {
                self.digits[i] += 1;
                self.refill(i);
                return Some((&self.digits, self.value));
            }
        }
    }

    /// Grammar state after the last digit of the current string.
    pub fn final_state(&self) -> GrammarState {
        self.states[self.digits.len()]
    }
}

impl Iterator for LegalStrings<'_> {
    type Item = (Vec<u32>, u64);

    fn next(&mut self) -> Option<Self::Item> {
        self.advance().map(|(d, v)| (d.to_vec(), v))
    }
}

/// Every legal string of length `n` with its value, checked against the
/// budget first.
pub fn enumerate_legal<'a>(
    table: &'a SequenceTable,
    n: usize,
    budget: Budget,
) -> Result<LegalStrings<'a>> {
    budget.check(&legal_string_count(table.spec(), n))?;
    Ok(LegalStrings::with_weights(
        table.spec(),
        weights(table, n)?,
        &[],
    ))
}

/// Runs `fold` over every legal string of length `n` on up to `workers`
/// threads and merges per-prefix partial results in prefix order.
pub fn fold_legal<T, I, F, M>(
    table: &SequenceTable,
    n: usize,
    budget: Budget,
    workers: usize,
    identity: I,
    fold: F,
    merge: M,
) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &[u32], u64, GrammarState) + Sync,
    M: Fn(T, T) -> T,
{
    let spec = table.spec();
    budget.check(&legal_string_count(spec, n))?;
    let weights = weights(table, n)?;
    let split = n.min(4);
    let prefixes: Vec<Vec<u32>> = if workers <= 1 {
        vec![Vec::new()]
    } else {
        let head = LegalStrings::with_weights(spec, vec![0; split], &[]);
        head.map(|(d, _)| d).collect()
    };
    let run_prefix = |prefix: &Vec<u32>| {
        let mut acc = identity();
        let mut it = LegalStrings::with_weights(spec, weights.clone(), prefix);
        while it.advance().is_some() {
            fold(&mut acc, &it.digits, it.value, it.final_state());
        }
        acc
    };
    let parts: Vec<T> = if workers <= 1 {
        prefixes.iter().map(run_prefix).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| ZeckError::InvalidParameter(e.to_string()))?;
        pool.install(|| prefixes.par_iter().map(run_prefix).collect())
    };
    Ok(parts.into_iter().fold(identity(), merge))
}
