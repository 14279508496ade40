//! Solver toolkit for delegation under flexible, entropy-priced information
//! acquisition.
//!
//! An agent chooses how much and what to learn about an unknown state before
//! acting, paying `lambda` per nat of mutual information; a principal who
//! bears none of that cost decides whom to delegate to, or how to steer the
//! agent with transfers, outcome contracts, or menu restrictions. The crate
//! provides:
//!
//! - [`agent`]: the agent's problem — a certified multiplicative fixed-point
//!   solver, the logit closed forms for the binary matching problem, and a
//!   brute-force simplex-grid oracle for cross-checking.
//! - [`delegation`]: the principal's problem under state-matching payoffs —
//!   optimal unconditional choice probabilities, the square-root rule for the
//!   optimal agent prior, consideration-set comparisons, and inversion from
//!   target choice probabilities back to a prior.
//! - [`instruments`]: action transfers, outcome contracts, menu restriction,
//!   and the linear-feasibility certificate that separates implementable from
//!   non-implementable choice probabilities.
//! - [`communication`]: recommendation posteriors and the obedience check
//!   showing the delegation outcome survives when the principal keeps the
//!   final decision.
//!
//! All types are immutable after construction and every operation is a pure
//! function, so parameter sweeps can fan out across threads freely.

pub mod agent;
pub mod communication;
pub mod delegation;
mod error;
pub mod instruments;
mod linalg;
pub mod simplex;
mod types;
pub mod values;

pub use error::{Error, Result};
pub use types::{
    AgentSolution, Belief, ChoiceDistribution, DecisionRule, PayoffMatrix, RIInstance,
    DEFAULT_SUPPORT_THRESHOLD, RENORMALIZE_BAND,
};
