//! The principal's delegation problem under state-matching payoffs.
//!
//! With payoff 1 for matching the state and 0 otherwise, the principal's
//! value of inducing unconditional choice probabilities `beta` is
//!
//! ```text
//!     sum_j mu_p(w_j) beta_j e^{1/lambda} / (1 + delta beta_j),
//!     delta = e^{1/lambda} - 1.
//! ```
//!
//! The maximizer has a water-filling form over the actions sorted by the
//! principal's prior: an action is considered iff
//! `(L + delta) w_L > sum_{j<=L} w_j` for its rank L, with weights
//! `w = sqrt(mu_p)` for the principal's optimum and `w = mu` for an agent
//! best-responding to his own prior. The agent prior that implements the
//! optimum reweights the principal's prior by square roots and is free of
//! `lambda`. Any target `beta` is implementable by some prior: the inversion
//! is the linear system solved by `invert_beta_to_belief`.

use crate::agent::{conditional_from_unconditional, solve_agent, SolverConfig};
use crate::error::{Error, Result};
use crate::instruments::solve_primal_system;
use crate::simplex::{for_each_composition, grid_point_count};
use crate::types::{Belief, ChoiceDistribution, DecisionRule, PayoffMatrix, RIInstance};

/// Agreement required between the closed forms and the fixed point when one
/// cross-checks the other.
const CROSS_CHECK_TOL: f64 = 1e-8;

fn delta_of(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok((1.0 / lambda).exp_m1())
}

// ---------------------------------------------------------------------------
// Water-filling choice probabilities
// ---------------------------------------------------------------------------

/// Stable descending order, original index as tie-break.
fn descending_order(weights: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..weights.len()).collect();
    idx.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).unwrap());
    idx
}

/// Size of the consideration set for descending weights `w`: the largest L
/// with `(L + delta) w_L - sum_{j<=L} w_j > 0`. The gap is decreasing in L,
/// so the first non-positive gap settles it; a boundary action with gap
/// exactly 0 is excluded.
fn consideration_size(w_desc: &[f64], delta: f64) -> usize {
    let mut running = 0.0;
    for (l, &w) in w_desc.iter().enumerate() {
        running += w;
        let gap = (l as f64 + 1.0 + delta) * w - running;
        if gap <= 0.0 {
            return l; // previous rank was the last strictly positive gap
        }
    }
    w_desc.len()
}

/// Choice probabilities of water-filling form for arbitrary non-negative
/// weights: `beta_i = max(0, ((K + delta) w_i / S - 1) / delta)` with `K`
/// the consideration size and `S` the sum of considered weights.
fn water_filling(weights: &[f64], delta: f64) -> Vec<f64> {
    let order = descending_order(weights);
    let w_desc: Vec<f64> = order.iter().map(|&i| weights[i]).collect();
    let k = consideration_size(&w_desc, delta).max(1);
    let s: f64 = w_desc[..k].iter().sum();
    let mut beta = vec![0.0; weights.len()];
    for (rank, &i) in order.iter().enumerate() {
        if rank < k {
            beta[i] = (((k as f64 + delta) * w_desc[rank] / s) - 1.0) / delta;
        }
    }
    beta
}

/// Unconditional choice probabilities the principal would most like to
/// induce: water-filling over `sqrt(mu_p)`.
pub fn optimal_unconditional(mu_p: &Belief, lambda: f64) -> Result<ChoiceDistribution> {
    let delta = delta_of(lambda)?;
    let w: Vec<f64> = mu_p.probs().iter().map(|&p| p.sqrt()).collect();
    ChoiceDistribution::new(water_filling(&w, delta))
}

/// Unconditional choice probabilities chosen by an agent whose prior is `mu`:
/// water-filling over `mu` itself.
pub fn aligned_unconditional(mu: &Belief, lambda: f64) -> Result<ChoiceDistribution> {
    let delta = delta_of(lambda)?;
    ChoiceDistribution::new(water_filling(mu.probs(), delta))
}

/// Consideration-set sizes (aligned, optimal) for a principal prior:
/// the aligned size uses weights `mu_p`, the optimal size `sqrt(mu_p)`.
/// The optimal size is never smaller.
pub fn consideration_sizes(mu_p: &Belief, lambda: f64) -> Result<(usize, usize)> {
    let delta = delta_of(lambda)?;
    let order = descending_order(mu_p.probs());
    let sorted: Vec<f64> = order.iter().map(|&i| mu_p.get(i)).collect();
    let sqrt_sorted: Vec<f64> = sorted.iter().map(|&p| p.sqrt()).collect();
    Ok((
        consideration_size(&sorted, delta).max(1),
        consideration_size(&sqrt_sorted, delta).max(1),
    ))
}

// ---------------------------------------------------------------------------
// Principal values
// ---------------------------------------------------------------------------

/// The principal's expected payoff from induced probabilities `beta` under
/// state-matching payoffs: `sum_j mu_p_j beta_j e^{1/lambda} / (1 + delta beta_j)`.
pub fn principal_value_state_matching(
    mu_p: &Belief,
    beta: &ChoiceDistribution,
    lambda: f64,
) -> Result<f64> {
    let delta = delta_of(lambda)?;
    if mu_p.len() != beta.len() {
        return Err(Error::DimensionMismatch {
            context: "principal belief vs beta length",
            expected: mu_p.len(),
            got: beta.len(),
        });
    }
    let e1 = delta + 1.0;
    Ok(mu_p
        .probs()
        .iter()
        .zip(beta.probs())
        .map(|(&p, &b)| p * b * e1 / (1.0 + delta * b))
        .sum())
}

/// Shortcut value `(1 + delta) / (K + delta) * sum_{i in C} mu_p_i`, valid
/// when `beta` is the water-filling best response to the prior `mu_p` itself
/// (possibly within a restricted action menu). Agrees with
/// [`principal_value_state_matching`] to machine precision in that case.
pub fn common_prior_value_identity(
    mu_p: &Belief,
    beta: &ChoiceDistribution,
    lambda: f64,
) -> Result<f64> {
    let delta = delta_of(lambda)?;
    let c = beta.consideration_set();
    let k = c.len() as f64;
    let covered: f64 = c.iter().map(|&i| mu_p.get(i)).sum();
    Ok((1.0 + delta) / (k + delta) * covered)
}

/// Brute-force maximizer of the principal's state-matching value over a
/// simplex grid of unconditional probabilities; oracle for
/// [`optimal_unconditional`].
pub fn grid_search_unconditional(
    mu_p: &Belief,
    lambda: f64,
    grid_step: f64,
) -> Result<ChoiceDistribution> {
    let delta = delta_of(lambda)?;
    if !(grid_step > 0.0 && grid_step < 0.5) {
        return Err(Error::ArgumentOutOfRange {
            name: "grid_step",
            value: grid_step,
            range: "(0, 0.5)",
        });
    }
    let n = mu_p.len();
    let m = (1.0 / grid_step).round() as usize;
    let points = grid_point_count(n, m);
    if points > crate::agent::DEFAULT_GRID_CAP {
        return Err(Error::GridTooLarge {
            points,
            cap: crate::agent::DEFAULT_GRID_CAP,
        });
    }
    let e1 = delta + 1.0;
    // The objective is separable across coordinates; tabulate each term.
    let table: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            (0..=m)
                .map(|k| {
                    let b = k as f64 / m as f64;
                    mu_p.get(j) * b * e1 / (1.0 + delta * b)
                })
                .collect()
        })
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut best_counts = vec![0usize; n];
    for_each_composition(n, m, |counts| {
        let v: f64 = counts.iter().zip(&table).map(|(&k, t)| t[k]).sum();
        if v > best {
            best = v;
            best_counts.copy_from_slice(counts);
        }
    });
    ChoiceDistribution::new(best_counts.iter().map(|&k| k as f64 / m as f64).collect())
}

// ---------------------------------------------------------------------------
// Optimal agent priors
// ---------------------------------------------------------------------------

/// The prior of the principal's preferred binary agent:
/// `sqrt(mu_p) / (sqrt(mu_p) + sqrt(1 - mu_p))`. Free of lambda.
pub fn optimal_belief_binary(mu_p_r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu_p_r) {
        return Err(Error::ArgumentOutOfRange {
            name: "mu_p_r",
            value: mu_p_r,
            range: "[0, 1]",
        });
    }
    let a = mu_p_r.sqrt();
    let b = (1.0 - mu_p_r).sqrt();
    Ok(a / (a + b))
}

/// The prior of the principal's preferred agent in general:
/// `mu*(w_i) = sqrt(mu_p(w_i)) / sum_j sqrt(mu_p(w_j))`.
///
/// Satisfies the ratio law `mu*_i / mu*_j = sqrt(mu_p_i / mu_p_j)`; the
/// chosen agent is more uncertain than the principal between any two states.
pub fn optimal_belief_general(mu_p: &Belief) -> Result<Belief> {
    let w: Vec<f64> = mu_p.probs().iter().map(|&p| p.sqrt()).collect();
    let s: f64 = w.iter().sum();
    Belief::new(w.iter().map(|&x| x / s).collect())
}

// ---------------------------------------------------------------------------
// Inversion: from target probabilities to a prior
// ---------------------------------------------------------------------------

/// Finds a prior belief at which the agent's optimum generates the target
/// unconditional probabilities `beta`.
///
/// For state-matching payoffs the solution is closed-form,
/// `mu_i = (1 + delta beta_i) / (K + delta)` on the consideration set and 0
/// off it (always feasible). For general payoffs the first-order system is
/// solved as a small non-negative linear system; `Error::Infeasible` reports
/// that no non-negative solution exists. Either way the result is verified
/// by a round trip through the solver; a verified system whose round trip
/// still fails (a degenerate payoff with a non-unique optimum) returns
/// `Error::RoundTripMismatch`.
pub fn invert_beta_to_belief(
    beta: &ChoiceDistribution,
    u: &PayoffMatrix,
    lambda: f64,
) -> Result<Belief> {
    let delta = delta_of(lambda)?;
    if beta.len() != u.n_actions() {
        return Err(Error::DimensionMismatch {
            context: "beta length vs payoff actions",
            expected: u.n_actions(),
            got: beta.len(),
        });
    }

    let mu = if u.is_state_matching() {
        let c = beta.consideration_set();
        let k = c.len() as f64;
        let mut mu = vec![0.0; u.n_states()];
        for &i in &c {
            mu[i] = (1.0 + delta * beta.get(i)) / (k + delta);
        }
        Belief::new(mu)?
    } else {
        let m = solve_primal_system(beta, u, lambda).ok_or(Error::Infeasible)?;
        Belief::new(m)?
    };

    // Round trip: the agent at `mu` must choose `beta` back.
    let inst = RIInstance::new(mu.clone(), u.clone(), lambda)?;
    let sol = solve_agent(&inst, &SolverConfig::precise())?;
    let dev = sol.beta.max_abs_diff(beta);
    if dev > CROSS_CHECK_TOL {
        return Err(Error::RoundTripMismatch { max_deviation: dev });
    }
    Ok(mu)
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

/// Everything the principal wants to know about one delegation problem.
#[derive(Debug, Clone)]
pub struct DelegationReport {
    pub mu_p: Belief,
    pub lambda: f64,
    /// Prior of the optimally chosen agent.
    pub mu_star: Belief,
    /// Choice probabilities that agent generates.
    pub beta_star: ChoiceDistribution,
    /// The decision rule behind them.
    pub pi_star: DecisionRule,
    /// Consideration-set size under the optimal agent.
    pub k_star: usize,
    /// Consideration-set size under an agent sharing the principal's prior.
    pub k_aligned: usize,
    /// Principal's value with the optimal agent.
    pub value_optimal: f64,
    /// Principal's value with the aligned agent.
    pub value_aligned: f64,
    /// Best value with no information: the largest prior mass.
    pub value_no_learning: f64,
}

/// Builds the full delegation report and cross-checks the closed form against
/// the fixed-point solver at the optimal prior.
pub fn delegation_report(mu_p: &Belief, lambda: f64) -> Result<DelegationReport> {
    let beta_star = optimal_unconditional(mu_p, lambda)?;
    let beta_aligned = aligned_unconditional(mu_p, lambda)?;
    let mu_star = optimal_belief_general(mu_p)?;
    let n = mu_p.len();
    let u = PayoffMatrix::state_matching(n);
    let inst_star = RIInstance::new(mu_star.clone(), u, lambda)?;
    let solved = solve_agent(&inst_star, &SolverConfig::precise())?;
    let dev = solved.beta.max_abs_diff(&beta_star);
    if dev > CROSS_CHECK_TOL {
        return Err(Error::RoundTripMismatch { max_deviation: dev });
    }
    let pi_star = conditional_from_unconditional(&beta_star, &inst_star)?;
    let (k_aligned, k_star) = consideration_sizes(mu_p, lambda)?;
    let value_optimal = principal_value_state_matching(mu_p, &beta_star, lambda)?;
    let value_aligned = principal_value_state_matching(mu_p, &beta_aligned, lambda)?;
    let value_no_learning = mu_p.probs().iter().cloned().fold(f64::MIN, f64::max);
    Ok(DelegationReport {
        mu_p: mu_p.clone(),
        lambda,
        mu_star,
        beta_star,
        pi_star,
        k_star,
        k_aligned,
        value_optimal,
        value_aligned,
        value_no_learning,
    })
}

// ---------------------------------------------------------------------------
// All-or-nothing learning benchmark
// ---------------------------------------------------------------------------

/// Delegation answer for the binary all-or-nothing benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PandoraDelegation {
    /// The weakly optimal agent prior: maximal uncertainty.
    pub optimal_mu: f64,
    /// Priors at which an agent pays for information: `[c, 1 - c]`.
    pub learning_interval: (f64, f64),
}

/// With all-or-nothing learning at cost `c`, the most uncertain agent is
/// weakly optimal for every principal prior; agents learn exactly on
/// `{mu : max(mu, 1 - mu) <= 1 - c}`.
pub fn pandora_optimal_agent(_mu_p_r: f64, c: f64) -> Result<PandoraDelegation> {
    if !(0.0..=0.5).contains(&c) {
        return Err(Error::ArgumentOutOfRange {
            name: "c",
            value: c,
            range: "[0, 0.5]",
        });
    }
    Ok(PandoraDelegation {
        optimal_mu: 0.5,
        learning_interval: (c, 1.0 - c),
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const E: f64 = std::f64::consts::E;

    fn belief(v: &[f64]) -> Belief {
        Belief::new(v.to_vec()).unwrap()
    }

    #[test]
    fn optimal_unconditional_three_states() {
        let b = optimal_unconditional(&belief(&[0.5, 0.3, 0.2]), 1.0).unwrap();
        assert_abs_diff_eq!(b.get(0), 0.5588087398082721, epsilon = 1e-10);
        assert_abs_diff_eq!(b.get(1), 0.3016719004462991, epsilon = 1e-10);
        assert_abs_diff_eq!(b.get(2), 0.1395193597454284, epsilon = 1e-10);
        assert_eq!(b.consideration_size(), 3);
    }

    #[test]
    fn optimal_unconditional_uniform_is_uniform() {
        let b = optimal_unconditional(&Belief::uniform(4), 1.3).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(b.get(i), 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn optimal_unconditional_drops_third_action() {
        let b = optimal_unconditional(&belief(&[0.7, 0.2, 0.1]), 1.0).unwrap();
        assert_eq!(b.get(2), 0.0);
        assert_eq!(b.consideration_size(), 2);
    }

    #[test]
    fn optimal_unconditional_unsorted_input() {
        // Order of states must not matter beyond a permutation.
        let a = optimal_unconditional(&belief(&[0.2, 0.5, 0.3]), 1.0).unwrap();
        let b = optimal_unconditional(&belief(&[0.5, 0.3, 0.2]), 1.0).unwrap();
        assert_abs_diff_eq!(a.get(1), b.get(0), epsilon = 1e-12);
        assert_abs_diff_eq!(a.get(2), b.get(1), epsilon = 1e-12);
        assert_abs_diff_eq!(a.get(0), b.get(2), epsilon = 1e-12);
    }

    #[test]
    fn aligned_examples() {
        let b = aligned_unconditional(&belief(&[0.7, 0.2, 0.1]), 1.0).unwrap();
        assert_eq!(b.probs(), &[1.0, 0.0, 0.0]);
        let c = aligned_unconditional(&belief(&[0.6, 0.3, 0.1]), 1.0).unwrap();
        assert_eq!(c.consideration_size(), 2);
        let u = aligned_unconditional(&Belief::uniform(3), 1.0).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(u.get(i), 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn consideration_sizes_examples() {
        assert_eq!(
            consideration_sizes(&belief(&[0.7, 0.2, 0.1]), 1.0).unwrap(),
            (1, 2)
        );
        assert_eq!(
            consideration_sizes(&belief(&[0.6, 0.3, 0.1]), 1.0).unwrap(),
            (2, 2)
        );
        assert_eq!(consideration_sizes(&Belief::uniform(5), 0.7).unwrap(), (5, 5));
    }

    #[test]
    fn principal_value_examples() {
        // Degenerate beta earns the covered prior mass.
        let mu_p = belief(&[0.6, 0.25, 0.15]);
        let b = ChoiceDistribution::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(
            principal_value_state_matching(&mu_p, &b, 1.0).unwrap(),
            0.6,
            epsilon = 1e-12
        );
        // Uniform beta on the uniform binary prior: e/(e+1).
        let v = principal_value_state_matching(
            &Belief::uniform(2),
            &ChoiceDistribution::uniform(2),
            1.0,
        )
        .unwrap();
        assert_abs_diff_eq!(v, E / (E + 1.0), epsilon = 1e-12);
        // The optimal beta beats the best uninformed guess.
        let mu_p = belief(&[0.5, 0.3, 0.2]);
        let b = optimal_unconditional(&mu_p, 1.0).unwrap();
        assert!(principal_value_state_matching(&mu_p, &b, 1.0).unwrap() > 0.5);
    }

    #[test]
    fn identity_matches_value_for_common_prior_response() {
        for (probs, lambda) in [
            (vec![0.7, 0.2, 0.1], 1.0),
            (vec![0.4, 0.3, 0.2, 0.1], 0.6),
            (vec![0.5, 0.5], 2.0),
        ] {
            let mu = belief(&probs);
            let b = aligned_unconditional(&mu, lambda).unwrap();
            let direct = principal_value_state_matching(&mu, &b, lambda).unwrap();
            let shortcut = common_prior_value_identity(&mu, &b, lambda).unwrap();
            assert_abs_diff_eq!(direct, shortcut, epsilon = 1e-12);
        }
    }

    #[test]
    fn optimal_belief_binary_examples() {
        assert_abs_diff_eq!(optimal_belief_binary(0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            optimal_belief_binary(0.7).unwrap(),
            0.60435607626104,
            epsilon = 1e-12
        );
        assert_eq!(optimal_belief_binary(0.0).unwrap(), 0.0);
        assert_eq!(optimal_belief_binary(1.0).unwrap(), 1.0);
    }

    #[test]
    fn optimal_belief_general_examples() {
        let m = optimal_belief_general(&belief(&[0.5, 0.3, 0.2])).unwrap();
        assert_abs_diff_eq!(m.get(0), 0.4154459132, epsilon = 1e-9);
        assert_abs_diff_eq!(m.get(1), 0.3218030206, epsilon = 1e-9);
        assert_abs_diff_eq!(m.get(2), 0.2627510660, epsilon = 1e-9);

        let b = optimal_belief_general(&belief(&[0.3, 0.7])).unwrap();
        assert_abs_diff_eq!(
            b.get(1),
            optimal_belief_binary(0.7).unwrap(),
            epsilon = 1e-12
        );

        let u = optimal_belief_general(&Belief::uniform(3)).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(u.get(i), 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bracketing_of_optimal_belief() {
        let mu_p = belief(&[0.55, 0.25, 0.2]);
        let m = optimal_belief_general(&mu_p).unwrap();
        assert!(m.get(0) <= mu_p.get(0));
        assert!(m.get(2) >= mu_p.get(2));
    }

    #[test]
    fn invert_symmetric_binary() {
        let beta = ChoiceDistribution::uniform(2);
        let mu = invert_beta_to_belief(&beta, &PayoffMatrix::state_matching(2), 1.0).unwrap();
        assert_abs_diff_eq!(mu.get(0), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn invert_skewed_binary() {
        let beta = ChoiceDistribution::new(vec![0.7, 0.3]).unwrap();
        let mu = invert_beta_to_belief(&beta, &PayoffMatrix::state_matching(2), 1.0).unwrap();
        assert_abs_diff_eq!(mu.get(0), 0.5924234314520020, epsilon = 1e-9);
        assert_abs_diff_eq!(mu.get(1), 0.4075765685479981, epsilon = 1e-9);
    }

    #[test]
    fn delegation_report_binary_07() {
        let r = delegation_report(&belief(&[0.3, 0.7]), 1.0).unwrap();
        assert_abs_diff_eq!(r.mu_star.get(1), 0.60435607626104, epsilon = 1e-10);
        assert_abs_diff_eq!(r.value_optimal, 0.7665779694629825, epsilon = 1e-9);
        assert_abs_diff_eq!(r.value_no_learning, 0.7, epsilon = 1e-15);
        assert!(r.value_optimal >= r.value_aligned);
        assert!(r.value_aligned >= r.value_no_learning - 1e-10);
        assert!(r.k_star >= r.k_aligned);
    }

    #[test]
    fn delegation_report_symmetric_is_aligned() {
        let r = delegation_report(&Belief::uniform(2), 1.0).unwrap();
        assert_abs_diff_eq!(r.mu_star.get(0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.value_optimal, r.value_aligned, epsilon = 1e-12);
    }

    #[test]
    fn delegation_report_extreme_prior_no_learning() {
        // sqrt odds above e: even the optimal agent learns nothing.
        let r = delegation_report(&belief(&[0.05, 0.95]), 1.0).unwrap();
        assert_abs_diff_eq!(r.value_optimal, 0.95, epsilon = 1e-9);
        assert_abs_diff_eq!(r.value_no_learning, 0.95, epsilon = 1e-15);
    }

    #[test]
    fn grid_search_matches_water_filling() {
        let mu_p = belief(&[0.5, 0.3, 0.2]);
        let exact = optimal_unconditional(&mu_p, 1.0).unwrap();
        let grid = grid_search_unconditional(&mu_p, 1.0, 0.002).unwrap();
        assert!(exact.max_abs_diff(&grid) <= 0.005);
    }

    #[test]
    fn pandora_examples() {
        let p = pandora_optimal_agent(0.7, 0.2).unwrap();
        assert_eq!(p.optimal_mu, 0.5);
        assert_eq!(p.learning_interval, (0.2, 0.8));
        assert_eq!(
            pandora_optimal_agent(0.6, 0.5).unwrap().learning_interval,
            (0.5, 0.5)
        );
        assert_eq!(
            pandora_optimal_agent(0.6, 0.0).unwrap().learning_interval,
            (0.0, 1.0)
        );
    }
}
