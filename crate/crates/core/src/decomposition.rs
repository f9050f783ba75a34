//! Legal and super-legal digit strings and the decompositions built from them.
//!
//! A digit string `a_1..a_n` stands for `Σ a_i G_{n+1-i}`. Legality is a
//! regular language over the digit alphabet: reading left to right, the
//! reader tracks how many digits of the current block have matched the
//! coefficient prefix `c_1, c_2, ...`. A digit below the next coefficient
//! closes the block; a digit equal to it extends the block; anything larger,
//! or matching all `L` coefficients, is rejected. A string that ends inside
//! a block finishes with a short final block `(c_1..c_u)`, `u < L`, which is
//! legal but not super-legal.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZeckError};
use crate::recurrence::{RecurrenceSpec, SequenceTable};

/// Which clause of the legality grammar a block satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Closing {
    /// Final short block equal to `(c_1, ..., c_u)` with `u < L`.
    Condition1,
    /// Block `(c_1, ..., c_{s-1}, a_s)` with `a_s < c_s`.
    Condition2,
}

/// Reader state: digits of the open block matched so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GrammarState(pub usize);

impl GrammarState {
    pub const START: GrammarState = GrammarState(0);

    /// Largest digit accepted in this state.
    pub fn max_digit(self, spec: &RecurrenceSpec) -> Option<u32> {
        let next = self.0 + 1;
        let c = spec.c(next);
        if next < spec.depth() {
            Some(c)
        } else if c == 0 {
            None
        } else {
            Some(c - 1)
        }
    }

    /// Consumes one digit. `None` if the digit is rejected.
    pub fn step(self, digit: u32, spec: &RecurrenceSpec) -> Option<(GrammarState, bool)> {
        let next = self.0 + 1;
        let c = spec.c(next);
        if digit < c {
            Some((GrammarState::START, true))
        } else if digit == c && next < spec.depth() {
            Some((GrammarState(next), false))
        } else {
            None
        }
    }

    /// Between blocks: everything read so far was super-legal.
    pub fn is_closed(self) -> bool {
        self.0 == 0
    }
}

/// Where one digit sits in the fine segmentation of a legal string, in
/// which every zero following a closed block is its own length-1 block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FinePosition {
    pub length: usize,
    /// 1-based position inside the block.
    pub position: usize,
    pub closing: Closing,
}

/// Runs the grammar over `digits`, returning the final state or `None`.
fn run(digits: &[u32], spec: &RecurrenceSpec) -> Option<GrammarState> {
    digits.iter().try_fold(GrammarState::START, |state, &d| {
        state.step(d, spec).map(|(s, _)| s)
    })
}

pub fn is_legal(digits: &[u32], spec: &RecurrenceSpec) -> bool {
    run(digits, spec).is_some()
}

/// Legal with every block closing by a digit below its coefficient. The
/// empty string counts as super-legal.
pub fn is_super_legal(digits: &[u32], spec: &RecurrenceSpec) -> bool {
    run(digits, spec).is_some_and(GrammarState::is_closed)
}

/// Per-digit block membership in the fine segmentation.
pub fn fine_positions(digits: &[u32], spec: &RecurrenceSpec) -> Result<Vec<FinePosition>> {
    let mut out = Vec::with_capacity(digits.len());
    let mut state = GrammarState::START;
    let mut open = 0usize;
    for &d in digits {
        let (next, closed) = state.step(d, spec).ok_or(ZeckError::NotLegal)?;
        open += 1;
        if closed {
            out.extend((1..=open).map(|position| FinePosition {
                length: open,
                position,
                closing: Closing::Condition2,
            }));
            open = 0;
        }
        state = next;
    }
    if open > 0 {
        out.extend((1..=open).map(|position| FinePosition {
            length: open,
            position,
            closing: Closing::Condition1,
        }));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// 1-based index of the block's first digit.
    pub start: usize,
    pub length: usize,
    pub digits: Vec<u32>,
    pub closing: Closing,
    /// Padding zeros after the block, not counted in its length.
    pub trailing_zeros: usize,
}

/// Canonical block segmentation: leading zeros are kept as metadata and
/// zeros after a block are padding attributed to that block.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Segmentation {
    pub leading_zeros: usize,
    pub blocks: Vec<Block>,
}

impl Segmentation {
    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.length).collect()
    }

    /// Reassembles the digit string.
    pub fn to_digits(&self) -> Vec<u32> {
        let mut out = vec![0; self.leading_zeros];
        for b in &self.blocks {
            out.extend_from_slice(&b.digits);
            out.extend(std::iter::repeat_n(0, b.trailing_zeros));
        }
        out
    }
}

pub fn segment_blocks(digits: &[u32], spec: &RecurrenceSpec) -> Result<Segmentation> {
    let fine = fine_positions(digits, spec)?;
    let mut seg = Segmentation::default();
    let mut i = 0;
    while i < digits.len() {
        let FinePosition {
            length, closing, ..
        } = fine[i];
        let lone_zero = length == 1 && digits[i] == 0 && closing == Closing::Condition2;
        if lone_zero {
            match seg.blocks.last_mut() {
                Some(prev) => prev.trailing_zeros += 1,
                None => seg.leading_zeros += 1,
            }
        } else {
            seg.blocks.push(Block {
                start: i + 1,
                length,
                digits: digits[i..i + length].to_vec(),
                closing,
                trailing_zeros: 0,
            });
        }
        i += length;
    }
    Ok(seg)
}

/// `Σ a_i G_{k+1-i}` for a string of length `k ≤ table.len()`.
pub fn digits_value(digits: &[u32], table: &SequenceTable) -> BigUint {
    let k = digits.len();
    let mut acc = BigUint::zero();
    for (i, &a) in digits.iter().enumerate() {
        if a != 0 {
            acc += table.g(k - i) * a;
        }
    }
    acc
}

/// A legal decomposition with no leading zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    coeffs: Vec<u32>,
    value: BigUint,
}

impl Decomposition {
    /// `a_1..a_n`, `a_1` paired with `G_n`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// Number of sequence terms spanned (`n`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Fixed-width view over `G_width..G_1`, padded with leading zeros.
    pub fn padded(&self, width: usize) -> Vec<u32> {
        assert!(
            width >= self.coeffs.len(),
            "width shorter than decomposition"
        );
        let mut out = vec![0; width - self.coeffs.len()];
        out.extend_from_slice(&self.coeffs);
        out
    }

    /// Coefficient of `G_i` (1-based), zero beyond the leading term.
    pub fn coeff_of(&self, i: usize) -> u32 {
        let n = self.coeffs.len();
        if i == 0 || i > n {
            0
        } else {
            self.coeffs[n - i]
        }
    }

    pub fn to_json(&self, spec: &RecurrenceSpec) -> DecompositionJson {
        let blocks = segment_blocks(&self.coeffs, spec)
            .expect("decompositions are legal")
            .blocks
            .into_iter()
            .map(|b| BlockJson {
                length: b.length,
                digits: b.digits,
                closing: b.closing,
                trailing_zeros: b.trailing_zeros,
            })
            .collect();
        DecompositionJson {
            value: self.value.to_string(),
            coeffs: self.coeffs.clone(),
            blocks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub digits: Vec<u32>,
    pub length: usize,
    pub closing: Closing,
    pub trailing_zeros: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub value: String,
    pub coeffs: Vec<u32>,
    pub blocks: Vec<BlockJson>,
}

/// Largest digit `d ≤ cap` with `d · g ≤ rem`; subtracts `d · g` from `rem`.
fn take_digit(rem: &mut BigUint, g: &BigUint, cap: u32) -> u32 {
    if cap <= 8 {
        let mut d = 0;
        while d < cap && &*rem >= g {
            *rem -= g;
            d += 1;
        }
        d
    } else {
        let q = (&*rem / g).to_u32().unwrap_or(u32::MAX).min(cap);
        *rem -= g * q;
        q
    }
}

/// Capped greedy decomposition of `m` over `table`.
///
/// Scans from the largest term `G_i ≤ m` downward. In each grammar state the
/// digit is the largest multiple that fits, capped by the largest digit the
/// state accepts.
pub fn decompose(m: &BigUint, table: &SequenceTable) -> Result<Decomposition> {
    let bound = table.bound();
    if m >= &bound {
        return Err(ZeckError::OutOfRange {
            value: m.to_string(),
            bound: bound.to_string(),
        });
    }
    if m.is_zero() {
        return Ok(Decomposition {
            coeffs: Vec::new(),
            value: BigUint::zero(),
        });
    }
    let spec = table.spec();
    let top = (1..=table.len()).rev().find(|&i| table.g(i) <= m);
    let Some(top) = top else {
        return Err(ZeckError::Unrepresentable {
            value: m.to_string(),
        });
    };
    let mut rem = m.clone();
    let mut coeffs = Vec::with_capacity(top);
    let mut state = GrammarState::START;
    for i in (1..=top).rev() {
        let cap = state.max_digit(spec).unwrap_or(0);
        let d = take_digit(&mut rem, table.g(i), cap);
        state = match state.step(d, spec) {
            Some((s, _)) => s,
            None => unreachable!("capped digit is always accepted"),
        };
        coeffs.push(d);
    }
    if !rem.is_zero() || coeffs.first().is_none_or(|&a| a == 0) {
        return Err(ZeckError::Unrepresentable {
            value: m.to_string(),
        });
    }
    let d = Decomposition {
        coeffs,
        value: m.clone(),
    };
    if !is_legal(&d.coeffs, spec) || reconstruct(&d, table) != *m {
        return Err(ZeckError::Unrepresentable {
            value: m.to_string(),
        });
    }
    Ok(d)
}

/// Builds a decomposition from a legal digit string, stripping leading zeros.
pub fn from_digits(digits: &[u32], table: &SequenceTable) -> Result<Decomposition> {
    if !is_legal(digits, table.spec()) {
        return Err(ZeckError::NotLegal);
    }
    if digits.len() > table.len() {
        return Err(ZeckError::IndexOutOfRange(format!(
            "{} digits over a table of {} terms",
            digits.len(),
            table.len()
        )));
    }
    let first = digits.iter().position(|&a| a != 0).unwrap_or(digits.len());
    let coeffs = digits[first..].to_vec();
    let value = digits_value(&coeffs, table);
    Ok(Decomposition { coeffs, value })
}

/// `Σ a_i G_{n+1-i}`.
pub fn reconstruct(d: &Decomposition, table: &SequenceTable) -> BigUint {
    digits_value(&d.coeffs, table)
}

/// Number of summands counted with multiplicity.
pub fn summand_count(d: &Decomposition) -> u64 {
    d.coeffs.iter().map(|&a| a as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::generate_sequence;

    fn example_spec() -> RecurrenceSpec {
        RecurrenceSpec::with_initial(&[1, 2, 3], &[1, 3, 8]).unwrap()
    }

    #[test]
    fn example_decompositions() {
        let table = generate_sequence(&example_spec(), 8);
        let d = decompose(&BigUint::from(1274u32), &table).unwrap();
        assert_eq!(d.coeffs(), &[1, 2, 2, 1, 0, 0, 0, 1]);
        assert_eq!(summand_count(&d), 7);
        assert!(!is_super_legal(d.coeffs(), table.spec()));
        let d = decompose(&BigUint::from(1277u32), &table).unwrap();
        assert_eq!(d.coeffs(), &[1, 2, 2, 1, 0, 0, 1, 1]);
        assert_eq!(summand_count(&d), 8);
        assert!(is_super_legal(d.coeffs(), table.spec()));
    }

    #[test]
    fn zero_is_empty() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 5);
        let d = decompose(&BigUint::zero(), &table).unwrap();
        assert!(d.is_empty());
        assert_eq!(reconstruct(&d, &table), BigUint::zero());
        assert_eq!(summand_count(&d), 0);
    }

    #[test]
    fn fibonacci_hundred() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 12);
        let d = decompose(&BigUint::from(100u32), &table).unwrap();
        // 89 = G_10, 8 = G_5, 3 = G_3
        assert_eq!(d.coeffs(), &[1, 0, 0, 0, 0, 1, 0, 1, 0, 0]);
        assert_eq!(d.coeff_of(10), 1);
        assert_eq!(d.coeff_of(5), 1);
        assert_eq!(d.coeff_of(3), 1);
    }

    #[test]
    fn out_of_range_and_unrepresentable() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 5);
        assert!(matches!(
            decompose(&BigUint::from(13u32), &table),
            Err(ZeckError::OutOfRange { .. })
        ));
        let table = generate_sequence(&example_spec(), 8);
        assert_eq!(
            decompose(&BigUint::from(2u32), &table),
            Err(ZeckError::Unrepresentable { value: "2".into() })
        );
    }

    #[test]
    fn reconstruct_small() {
        let table = generate_sequence(&RecurrenceSpec::fibonacci(), 3);
        let d = from_digits(&[1, 0, 1], &table).unwrap();
        assert_eq!(reconstruct(&d, &table), BigUint::from(4u32));
    }

    #[test]
    fn legality_casework() {
        let spec = example_spec();
        assert!(is_legal(&[1, 2, 2, 1, 0, 0, 0, 1], &spec));
        assert!(!is_legal(&[2, 0, 0], &spec));
        let fib = RecurrenceSpec::fibonacci();
        assert!(!is_legal(&[1, 1], &fib));
        assert!(is_legal(&[], &fib));
        assert!(is_super_legal(&[], &fib));
    }

    #[test]
    fn segmentation_examples() {
        let spec = example_spec();
        let seg = segment_blocks(&[1, 2, 2, 1, 0, 0, 0, 1], &spec).unwrap();
        assert_eq!(seg.lengths(), vec![3, 2, 1]);
        assert_eq!(seg.blocks[0].digits, vec![1, 2, 2]);
        assert_eq!(seg.blocks[1].digits, vec![1, 0]);
        assert_eq!(seg.blocks[1].trailing_zeros, 2);
        assert_eq!(seg.blocks[2].closing, Closing::Condition1);

        let fib = RecurrenceSpec::fibonacci();
        let seg = segment_blocks(&[1, 0, 1, 0], &fib).unwrap();
        assert_eq!(seg.blocks.len(), 2);
        assert!(seg.blocks.iter().all(|b| b.digits == vec![1, 0]));

        let seg = segment_blocks(&[0, 0, 0], &fib).unwrap();
        assert!(seg.blocks.is_empty());
        assert_eq!(seg.leading_zeros, 3);
        assert_eq!(seg.to_digits(), vec![0, 0, 0]);

        assert_eq!(segment_blocks(&[1, 1], &fib), Err(ZeckError::NotLegal));
    }

    #[test]
    fn fine_positions_mark_closing_clause() {
        let fib = RecurrenceSpec::fibonacci();
        let fine = fine_positions(&[0, 1, 0, 0, 1], &fib).unwrap();
        assert_eq!(fine[0].length, 1);
        assert_eq!((fine[1].length, fine[1].position), (2, 1));
        assert_eq!((fine[2].length, fine[2].position), (2, 2));
        assert_eq!(fine[4].closing, Closing::Condition1);
    }

    #[test]
    fn decomposition_json_shape() {
        let table = generate_sequence(&example_spec(), 8);
        let d = decompose(&BigUint::from(1274u32), &table).unwrap();
        let json = serde_json::to_value(d.to_json(table.spec())).unwrap();
        assert_eq!(json["value"], "1274");
        assert_eq!(json["blocks"][1]["trailing_zeros"], 2);
        assert_eq!(json["blocks"][2]["closing"], "condition1");
    }
}
