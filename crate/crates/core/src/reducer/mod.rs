//! Iterated support reduction: case selection, the `w₀^60(a, a^r)`
//! contraction step, word-length bookkeeping, and the experiments around it.

mod cases;
mod generate;
mod hosting;
mod ledger;
mod step;
mod wordsearch;

pub use cases::{select_case, verify_lemma5, CaseId, CaseSelection, AnchorCase, AnchorReport};
pub use generate::{check_generates, group_order, GenerationReport, GroupClass};
pub use hosting::{
    all_perms, check_fixed_bound, hosted_fixed_bound, hosting_by_propagation, hosting_injections, FixedBoundReport,
};
pub use ledger::{Ledger, LedgerOp};
pub use step::{
    contract, heuristic_three_cycle, reduce_step, run_reduction, walk_length, Reduction, ReductionConfig,
    ReductionStatus, RSampler, StepOutcome, StepRecord, UniformConditional, CONTRACTION_SCALE, STEP_LETTERS,
    W0_POWER,
};
pub use wordsearch::{
    balanced_alternating_words, canonical_representative, score_words, symmetry_class, top_margin, word_search,
    WordScore, WordSearchConfig, SHORT_CYCLE,
};

use thiserror::Error;

use crate::perm::PermError;
use crate::walks::WalkError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("inventory unavailable: {0}")]
    Inventory(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}
