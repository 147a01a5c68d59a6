//! Core domain types and pure algorithms for the WMA web-agent toolkit:
//! accessibility-tree parsing, the web-action grammar, sequence similarity,
//! assignment-based transition diffing, and the shared trajectory records
//! that the agent, dataset, and evaluation layers exchange.
//!
//! Everything in this crate is deterministic and free of I/O. All types are
//! immutable values after construction and safe to share across threads.

pub mod abstraction;
pub mod action;
pub mod assignment;
pub mod axtree;
pub mod diff;
pub mod instruction;
pub mod similarity;
pub mod trajectory;

/// Scalar used for costs, weights, and rewards throughout the pipeline.
///
/// The assignment kernel in [`assignment`] is generic over
/// [`num_traits::Float`]; the rest of the toolkit fixes this alias.
pub type Cost = f64;

pub use abstraction::{delta_digest, render_delta_text, AbstractedObservation, AbstractionMode};
pub use action::{parse_action, render_action, Action, ActionKind, ParseActionError};
pub use assignment::Matrix;
pub use axtree::{parse_axtree, AxElement, AxTree, ParseTreeError};
pub use diff::{
    build_cost_matrix, compute_delta, solve_assignment, tao_state, DiffError, FieldChange,
    LocationSource, MatchWeights, Matching, TransitionDelta, UnmatchedRule, UpdatedPair,
};
pub use instruction::Instruction;
pub use similarity::similarity_ratio;
pub use trajectory::{
    Candidate, CandidateFlags, EpisodeOutcome, StepCounters, StepRecord, Trajectory,
};
