//! Error type shared by all solver and construction paths.

use thiserror::Error;

/// Errors produced by constructors, solvers, and inversion routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A probability vector does not sum to 1 beyond the renormalization band.
    #[error("probability vector sums to {sum}, expected 1 within {tolerance}")]
    NotAProbabilityVector { sum: f64, tolerance: f64 },

    /// A probability vector has a negative entry.
    #[error("probability entry {value} at index {index} is negative")]
    NegativeProbability { index: usize, value: f64 },

    /// Vector or matrix dimensions are inconsistent.
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A payoff matrix entry is NaN or infinite.
    #[error("payoff entry at ({action}, {state}) is not finite")]
    NonFinitePayoff { action: usize, state: usize },

    /// A matrix flagged state-matching is not an identity-structured square.
    #[error("state-matching flag set on a matrix that is not 1 on the diagonal and 0 off it")]
    NotStateMatching,

    /// The information cost parameter must be strictly positive.
    #[error("cost parameter lambda must be positive and finite, got {0}")]
    InvalidLambda(f64),

    /// An operation that requires state-matching payoffs received a general matrix.
    #[error("{0} requires state-matching payoffs")]
    RequiresStateMatching(&'static str),

    /// A scalar argument fell outside its admissible range.
    #[error("argument {name} = {value} outside {range}")]
    ArgumentOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// The fixed-point solver exhausted its iteration budget.
    #[error("solver did not converge: residual {residual:.3e} after {iterations} iterations (tolerance {tolerance:.1e})")]
    NonConvergence {
        residual: f64,
        iterations: usize,
        tolerance: f64,
    },

    /// A brute-force grid would exceed the configured point cap.
    #[error("simplex grid of {points} points exceeds cap {cap}")]
    GridTooLarge { points: u128, cap: u128 },

    /// No prior belief induces the requested choice probabilities.
    #[error("no non-negative prior solves the inversion system (certified infeasible)")]
    Infeasible,

    /// The inversion system is solvable but the solver does not reproduce the
    /// target at the recovered prior (non-unique optimum at a degenerate payoff).
    #[error("inversion round trip failed: max choice-probability deviation {max_deviation:.3e}")]
    RoundTripMismatch { max_deviation: f64 },

    /// An action subset argument was empty or referenced a missing action.
    #[error("invalid action subset: {0}")]
    InvalidActionSubset(&'static str),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
