//! Independent oracles for the integration and acceptance tests. Nothing
//! here calls the library's grammar automaton, counting formulas or
//! enumerator: legal strings are built directly from the block definition.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;

/// Every complete block `(c_1, ..., c_{s-1}, a)` with `a < c_s`.
pub fn complete_blocks(c: &[u32]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for s in 1..=c.len() {
        for a in 0..c[s - 1] {
            let mut b = c[..s - 1].to_vec();
            b.push(a);
            out.push(b);
        }
    }
    out
}

/// Short final blocks `(c_1, ..., c_t)`, `1 <= t < L`.
pub fn short_blocks(c: &[u32]) -> Vec<Vec<u32>> {
    (1..c.len()).map(|t| c[..t].to_vec()).collect()
}

/// Literal recursive legality: empty, a short final block, or a complete
/// block followed by a legal remainder.
pub fn literal_legal(digits: &[u32], c: &[u32]) -> bool {
    if digits.is_empty() || short_blocks(c).iter().any(|b| b == digits) {
        return true;
    }
    complete_blocks(c)
        .iter()
        .any(|b| digits.starts_with(b) && literal_legal(&digits[b.len()..], c))
}

/// Literal super-legality: a concatenation of complete blocks.
pub fn literal_super_legal(digits: &[u32], c: &[u32]) -> bool {
    digits.is_empty()
        || complete_blocks(c)
            .iter()
            .any(|b| digits.starts_with(b) && literal_super_legal(&digits[b.len()..], c))
}

/// A length-`n` legal string with its complete blocks as `(start, len)`
/// (0-based start) and whether it ends in a short block.
#[derive(Debug, Clone)]
pub struct OracleString {
    pub digits: Vec<u32>,
    pub blocks: Vec<(usize, usize)>,
    pub short_tail: bool,
}

/// All legal strings of length `n`, built block by block.
pub fn legal_strings(c: &[u32], n: usize) -> Vec<OracleString> {
    let complete = complete_blocks(c);
    let short = short_blocks(c);
    let mut out = Vec::new();
    let mut digits = Vec::new();
    let mut blocks = Vec::new();
    grow(&complete, &short, n, &mut digits, &mut blocks, &mut out);
    let distinct: HashSet<&Vec<u32>> = out.iter().map(|s| &s.digits).collect();
    assert_eq!(distinct.len(), out.len(), "block parse must be unique");
    out
}

fn grow(
    complete: &[Vec<u32>],
    short: &[Vec<u32>],
    n: usize,
    digits: &mut Vec<u32>,
    blocks: &mut Vec<(usize, usize)>,
    out: &mut Vec<OracleString>,
) {
    let at = digits.len();
    if at == n {
        out.push(OracleString {
            digits: digits.clone(),
            blocks: blocks.clone(),
            short_tail: false,
        });
        return;
    }
    for b in short {
        if at + b.len() == n {
            let mut d = digits.clone();
            d.extend_from_slice(b);
            out.push(OracleString {
                digits: d,
                blocks: blocks.clone(),
                short_tail: true,
            });
        }
    }
    for b in complete {
        if at + b.len() <= n {
            digits.extend_from_slice(b);
            blocks.push((at, b.len()));
            grow(complete, short, n, digits, blocks, out);
            blocks.pop();
            digits.truncate(at);
        }
    }
}

/// `G_1..G_count` straight from the recurrence.
pub fn sequence(c: &[u32], initial: &[u64], count: usize) -> Vec<BigUint> {
    let mut g: Vec<BigUint> = initial.iter().map(|&x| BigUint::from(x)).collect();
    while g.len() < count {
        let next = c
            .iter()
            .enumerate()
            .map(|(i, &ci)| &g[g.len() - 1 - i] * ci)
            .sum();
        g.push(next);
    }
    g.truncate(count);
    g
}

/// `G_1 = 1`, `G_{n+1} = c_1 G_n + ... + c_n G_1 + 1` for `n < L`.
pub fn canonical_initial(c: &[u32]) -> Vec<u64> {
    let mut g: Vec<u64> = Vec::new();
    for _ in 0..c.len() {
        let next = 1 + g
            .iter()
            .rev()
            .zip(c)
            .map(|(&x, &ci)| x * ci as u64)
            .sum::<u64>();
        g.push(next);
    }
    g
}

/// Value of a most-significant-first string over `G_n, ..., G_1`.
pub fn value(digits: &[u32], g: &[BigUint]) -> BigUint {
    let n = digits.len();
    digits
        .iter()
        .enumerate()
        .map(|(i, &d)| &g[n - 1 - i] * d)
        .sum()
}

/// Tally of `(j, k, l, r)` over every digit in a complete block, with `j`
/// counted from the most significant digit.
pub fn position_tally(strings: &[OracleString]) -> BTreeMap<(usize, u32, usize, usize), u64> {
    let mut tally = BTreeMap::new();
    for s in strings {
        for &(start, len) in &s.blocks {
            for r in 1..=len {
                let idx = start + r - 1;
                *tally.entry((idx + 1, s.digits[idx], len, r)).or_insert(0) += 1;
            }
        }
    }
    tally
}

/// Number of super-legal strings of length `n`.
pub fn super_legal_count(c: &[u32], n: usize) -> u64 {
    legal_strings(c, n).iter().filter(|s| !s.short_tail).count() as u64
}
