//! Constant weight binary codes: `n`-bit words of weight `w` with pairwise
//! Hamming distance at least `d`.
//!
//! Construction methods:
//! - [`tabu`]: local search over single bit swaps on a fixed-size word list.
//! - [`rsdh`]: greedy selection by randomly scored distance histograms.
//! - [`sliced`]: the RSDH variants that first build inside slices fixed by
//!   the low-order bits.
//!
//! [`verify`] is the independent validity check that every produced code goes
//! through, and [`harness`] runs parallel multi-replica campaigns over
//! instance catalogs.

pub mod budget;
pub mod code;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod rng;
pub mod rsdh;
pub mod sliced;
pub mod tabu;
pub mod verify;
pub mod word;

pub use budget::Budget;
pub use code::{format_code, parse_code, read_code_file, write_code, Code};
pub use error::{CwcError, Result};
pub use rng::{derive_seed, RngStream};
pub use rsdh::{
    greedy_build, objective_trajectory, rand_vec, rerun_with_sv, run_rsdh, CandidatePool, GreedyOutcome,
    ScoringVector,
};
pub use sliced::{run_msrsdh, run_srsdh, seed_scores, slice_candidates, SliceConfig};
pub use tabu::{run_tabu, Move, StepOutcome, TabuConfig, TabuOutcome, TabuState};
pub use verify::{persist_verified, verify, VerifyReport};
pub use word::{
    binomial, enumerate_weight_w, hamming_distance, min_pairwise_distance, pairwise_histogram, Codeword,
    DistanceHistogram, Params, DEFAULT_MEMORY_LIMIT,
};
