//! Generalized Zeckendorf decompositions over positive linear recurrences.
//!
//! A positive linear recurrence `G_{n+1} = c_1 G_n + ... + c_L G_{n+1-L}`
//! (with `c_1, c_L ≥ 1`) gives every integer in `[0, G_{n+1})` a unique
//! legal digit string over `G_n..G_1` when the initial terms are chosen
//! canonically. This crate builds those decompositions, counts them exactly,
//! and measures how the summands distribute over sets of positive density,
//! including leading-digit (Benford) sets.
//!
//! ```
//! use num_bigint::BigUint;
//! use zeck::{decompose, generate_sequence, RecurrenceSpec};
//!
//! let spec = RecurrenceSpec::with_initial(&[1, 2, 3], &[1, 3, 8]).unwrap();
//! let table = generate_sequence(&spec, 8);
//! let d = decompose(&BigUint::from(1274u32), &table).unwrap();
//! assert_eq!(d.coeffs(), &[1, 2, 2, 1, 0, 0, 0, 1]);
//! ```

pub mod benford;
pub mod cli;
pub mod counting;
pub mod decomposition;
pub mod enumerate;
pub mod error;
pub mod numeric;
pub mod recurrence;
pub mod stochastic;

pub use benford::{
    benford_target, density_qsn, leading_digit, sequence_benford_report, significand,
    DensityEstimate, DigitHistogram, SequenceBenfordReport, SetPredicate,
};
pub use counting::{
    bijection_oracle, block_position_count, block_position_tally, coefficient_distribution,
    conditional_distribution, count_super_legal, hn_gn_ratio, with_super_legal, BlockPositionCount,
    CoefficientDistribution, CountMethod, OracleReport, RatioReport, Route, SuperLegalTable,
};
pub use decomposition::{
    decompose, fine_positions, is_legal, is_super_legal, reconstruct, segment_blocks,
    summand_count, Block, Closing, Decomposition, Segmentation,
};
pub use enumerate::{enumerate_legal, Budget};
pub use error::{Result, ZeckError};
pub use recurrence::{
    canonical_initial_terms, dominant_root, fit_binet_constant, generate_sequence, validate_spec,
    BinetFit, RecurrenceSpec, SequenceTable,
};
pub use stochastic::{
    concentration, sample_uniform, summand_digit_report, xy_ladder, xy_stats, ConcentrationReport,
    ExperimentReport, Plan,
};
