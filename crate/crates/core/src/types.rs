//! Domain types: beliefs, payoff matrices, decision rules, and solutions.
//!
//! All types validate their invariants on construction and are immutable
//! afterwards, so they can be shared freely across threads during sweeps.

use crate::error::{Error, Result};

/// Probability vectors within this distance of summing to 1 are renormalized;
/// anything further off is rejected as invalid input.
pub const RENORMALIZE_BAND: f64 = 1e-9;

/// Default mass below which an action is treated as outside the
/// consideration set. The fixed-point solver drives excluded actions to
/// numerically-zero mass, never exactly zero.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-9;

fn validate_probability_vector(probs: &mut [f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "probability vector must be non-empty",
            expected: 1,
            got: 0,
        });
    }
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::NegativeProbability { index: i, value: p });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > RENORMALIZE_BAND {
        return Err(Error::NotAProbabilityVector {
            sum,
            tolerance: RENORMALIZE_BAND,
        });
    }
    for p in probs.iter_mut() {
        *p /= sum;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Belief
// ---------------------------------------------------------------------------

/// A probability distribution over states.
#[derive(Debug, Clone, PartialEq)]
pub struct Belief {
    probs: Vec<f64>,
}

impl Belief {
    /// Builds a belief, renormalizing sums within `RENORMALIZE_BAND` of 1.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let mut probs = probs;
        validate_probability_vector(&mut probs)?;
        Ok(Self { probs })
    }

    /// Uniform belief over `n` states.
    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n.max(1)],
        }
    }

    /// Binary belief assigning `p_r` to the second state (the "right" state).
    ///
    /// State order is (l, r) so that index 1 carries the probability `p_r`,
    /// matching the convention that action index 1 is "R".
    pub fn binary(p_r: f64) -> Result<Self> {
        Self::new(vec![1.0 - p_r, p_r])
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }
}

// ---------------------------------------------------------------------------
// PayoffMatrix
// ---------------------------------------------------------------------------

/// Terminal utilities `u(a_i, w_j)`, stored as actions x states.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    u: Vec<Vec<f64>>,
    n_actions: usize,
    n_states: usize,
    state_matching: bool,
}

impl PayoffMatrix {
    /// State-matching payoffs of size `n`: 1 on the diagonal, 0 elsewhere.
    pub fn state_matching(n: usize) -> Self {
        let u = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            u,
            n_actions: n,
            n_states: n,
            state_matching: true,
        }
    }

    /// General payoff matrix from rows indexed by action. The state-matching
    /// flag is set automatically when the matrix has exactly the
    /// identity structure.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_actions = rows.len();
        if n_actions == 0 {
            return Err(Error::DimensionMismatch {
                context: "payoff matrix needs at least one action row",
                expected: 1,
                got: 0,
            });
        }
        let n_states = rows[0].len();
        if n_states == 0 {
            return Err(Error::DimensionMismatch {
                context: "payoff matrix needs at least one state column",
                expected: 1,
                got: 0,
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_states {
                return Err(Error::DimensionMismatch {
                    context: "ragged payoff matrix row",
                    expected: n_states,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinitePayoff {
                        action: i,
                        state: j,
                    });
                }
            }
        }
        let state_matching = n_actions == n_states
            && rows.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, &v)| v == if i == j { 1.0 } else { 0.0 })
            });
        Ok(Self {
            u: rows,
            n_actions,
            n_states,
            state_matching,
        })
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn is_state_matching(&self) -> bool {
        self.state_matching
    }

    /// Payoff of action `i` in state `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.u[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.u
    }

    /// Returns a copy with `tau[i]` added to every payoff of action `i`.
    pub fn with_action_shift(&self, tau: &[f64]) -> Result<Self> {
        if tau.len() != self.n_actions {
            return Err(Error::DimensionMismatch {
                context: "transfer schedule length vs actions",
                expected: self.n_actions,
                got: tau.len(),
            });
        }
        let rows = self
            .u
            .iter()
            .zip(tau)
            .map(|(row, &t)| row.iter().map(|&v| v + t).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Returns a copy keeping only the action rows in `allowed` (in order).
    pub fn restrict_actions(&self, allowed: &[usize]) -> Result<Self> {
        if allowed.is_empty() {
            return Err(Error::InvalidActionSubset("empty subset"));
        }
        let mut rows = Vec::with_capacity(allowed.len());
        for &i in allowed {
            if i >= self.n_actions {
                return Err(Error::InvalidActionSubset("action index out of range"));
            }
            rows.push(self.u[i].clone());
        }
        Self::from_rows(rows)
    }
}

// ---------------------------------------------------------------------------
// RIInstance
// ---------------------------------------------------------------------------

/// One agent problem: a prior, payoffs, and an information cost parameter.
///
/// `lambda` is in utils per nat; all entropies in this crate use natural
/// logarithms.
#[derive(Debug, Clone)]
pub struct RIInstance {
    pub mu: Belief,
    pub u: PayoffMatrix,
    pub lambda: f64,
}

impl RIInstance {
    pub fn new(mu: Belief, u: PayoffMatrix, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidLambda(lambda));
        }
        if mu.len() != u.n_states() {
            return Err(Error::DimensionMismatch {
                context: "belief length vs payoff states",
                expected: u.n_states(),
                got: mu.len(),
            });
        }
        Ok(Self { mu, u, lambda })
    }

    /// Binary state-matching instance with agent prior `mu_r` on state r.
    pub fn binary_state_matching(mu_r: f64, lambda: f64) -> Result<Self> {
        Self::new(Belief::binary(mu_r)?, PayoffMatrix::state_matching(2), lambda)
    }

    pub fn n_actions(&self) -> usize {
        self.u.n_actions()
    }

    pub fn n_states(&self) -> usize {
        self.u.n_states()
    }

    /// `e^(1/lambda) - 1`, the spread factor of the state-matching logit.
    pub fn delta(&self) -> f64 {
        (1.0 / self.lambda).exp_m1()
    }
}

// ---------------------------------------------------------------------------
// DecisionRule
// ---------------------------------------------------------------------------

/// Conditional choice probabilities `pi(a_i | w_j)`, stored as actions x states.
/// Each state column is a distribution over actions.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRule {
    pi: Vec<Vec<f64>>,
    n_actions: usize,
    n_states: usize,
}

impl DecisionRule {
    pub fn new(pi: Vec<Vec<f64>>) -> Result<Self> {
        let n_actions = pi.len();
        if n_actions == 0 {
            return Err(Error::DimensionMismatch {
                context: "decision rule needs at least one action row",
                expected: 1,
                got: 0,
            });
        }
        let n_states = pi[0].len();
        for row in &pi {
            if row.len() != n_states {
                return Err(Error::DimensionMismatch {
                    context: "ragged decision rule row",
                    expected: n_states,
                    got: row.len(),
                });
            }
        }
        let mut pi = pi;
        for j in 0..n_states {
            let mut col: Vec<f64> = (0..n_actions).map(|i| pi[i][j]).collect();
            validate_probability_vector(&mut col).map_err(|e| match e {
                Error::NotAProbabilityVector { sum, tolerance } => {
                    Error::NotAProbabilityVector { sum, tolerance }
                }
                other => other,
            })?;
            for i in 0..n_actions {
                pi[i][j] = col[i];
            }
        }
        Ok(Self {
            pi,
            n_actions,
            n_states,
        })
    }

    /// Probability of action `i` in state `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pi[i][j]
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.pi
    }

    /// Largest absolute entry difference against another rule.
    pub fn max_abs_diff(&self, other: &DecisionRule) -> f64 {
        let mut worst: f64 = 0.0;
        for (ra, rb) in self.pi.iter().zip(other.pi.iter()) {
            for (a, b) in ra.iter().zip(rb.iter()) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// ChoiceDistribution
// ---------------------------------------------------------------------------

/// Unconditional choice probabilities `beta(a_i)` with a support threshold
/// defining the consideration set.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceDistribution {
    beta: Vec<f64>,
    support_threshold: f64,
}

impl ChoiceDistribution {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        Self::with_threshold(beta, DEFAULT_SUPPORT_THRESHOLD)
    }

    pub fn with_threshold(beta: Vec<f64>, support_threshold: f64) -> Result<Self> {
        if !(support_threshold > 0.0) {
            return Err(Error::ArgumentOutOfRange {
                name: "support_threshold",
                value: support_threshold,
                range: "(0, inf)",
            });
        }
        let mut beta = beta;
        validate_probability_vector(&mut beta)?;
        let out = Self {
            beta,
            support_threshold,
        };
        if out.consideration_set().is_empty() {
            return Err(Error::ArgumentOutOfRange {
                name: "beta",
                value: 0.0,
                range: "at least one entry above the support threshold",
            });
        }
        Ok(out)
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            beta: vec![1.0 / n as f64; n.max(1)],
            support_threshold: DEFAULT_SUPPORT_THRESHOLD,
        }
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.beta
    }

    pub fn get(&self, i: usize) -> f64 {
        self.beta[i]
    }

    pub fn support_threshold(&self) -> f64 {
        self.support_threshold
    }

    /// Indices chosen with probability above the support threshold.
    pub fn consideration_set(&self) -> Vec<usize> {
        (0..self.beta.len())
            .filter(|&i| self.beta[i] > self.support_threshold)
            .collect()
    }

    /// Size of the consideration set.
    pub fn consideration_size(&self) -> usize {
        self.beta
            .iter()
            .filter(|&&b| b > self.support_threshold)
            .count()
    }

    pub fn max_abs_diff(&self, other: &ChoiceDistribution) -> f64 {
        self.beta
            .iter()
            .zip(other.beta.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------------------
// AgentSolution
// ---------------------------------------------------------------------------

/// Output of the agent problem: choice probabilities, the induced decision
/// rule, and the value decomposition, plus the optimality-system residual.
#[derive(Debug, Clone)]
pub struct AgentSolution {
    pub beta: ChoiceDistribution,
    pub pi: DecisionRule,
    /// Expected terminal payoff under the agent's prior.
    pub gross_value: f64,
    /// lambda times the mutual information of the rule.
    pub info_cost: f64,
    /// `gross_value - info_cost`.
    pub net_value: f64,
    /// Largest violation of the first-order system at `beta`.
    pub kkt_residual: f64,
    /// Multiplicative updates spent by the solver (0 for closed forms).
    pub iterations: usize,
}
