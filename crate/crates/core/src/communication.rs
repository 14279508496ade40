//! Recommendation instead of delegation: the agent reports the action he
//! would have taken, the principal updates her own prior on the report and
//! acts. Under state-matching payoffs the principal always finds it optimal
//! to follow the recommendation of the optimally chosen agent, so keeping
//! the final decision changes nothing.

use crate::agent::conditional_from_unconditional;
use crate::delegation::{optimal_belief_general, optimal_unconditional};
use crate::error::{Error, Result};
use crate::types::{Belief, DecisionRule, PayoffMatrix, RIInstance};

/// Slack granted to the recommended action in best-response comparisons;
/// exact posterior ties resolve in its favour.
const TIE_TOL: f64 = 1e-12;

/// The principal's posterior after each on-path recommendation.
///
/// Row `posteriors[k]` is her belief after hearing `recommendations[k]`;
/// recommendations that never occur under her prior carry no row.
#[derive(Debug, Clone)]
pub struct PosteriorTable {
    pub recommendations: Vec<usize>,
    pub posteriors: Vec<Belief>,
    /// Probability the principal assigns to hearing each recommendation.
    pub reach_probs: Vec<f64>,
}

/// Bayes updates of the principal's prior on the agent's recommended action:
/// `mu_p(w_j | a_i) = pi(a_i|w_j) mu_p(w_j) / sum_k mu_p(w_k) pi(a_i|w_k)`.
pub fn principal_posterior(mu_p: &Belief, pi_agent: &DecisionRule) -> Result<PosteriorTable> {
    if mu_p.len() != pi_agent.n_states() {
        return Err(Error::DimensionMismatch {
            context: "principal belief vs rule states",
            expected: pi_agent.n_states(),
            got: mu_p.len(),
        });
    }
    let mut recommendations = Vec::new();
    let mut posteriors = Vec::new();
    let mut reach_probs = Vec::new();
    for i in 0..pi_agent.n_actions() {
        let reach: f64 = (0..mu_p.len()).map(|j| mu_p.get(j) * pi_agent.get(i, j)).sum();
        if reach <= 0.0 {
            continue; // off-path: no posterior defined
        }
        let row: Vec<f64> = (0..mu_p.len())
            .map(|j| mu_p.get(j) * pi_agent.get(i, j) / reach)
            .collect();
        recommendations.push(i);
        posteriors.push(Belief::new(row)?);
        reach_probs.push(reach);
    }
    Ok(PosteriorTable {
        recommendations,
        posteriors,
        reach_probs,
    })
}

/// Obedience check in closed form for an agent prior `mu_star`: for each
/// considered action i, following the recommendation is optimal whenever
///
/// ```text
///     e^{1/lambda} sqrt(mu_star(w_i)) >= sqrt(mu_star(w_1)),
/// ```
///
/// with `w_1` the most likely state. Holds for every considered action of
/// the square-root-rule prior.
#[derive(Debug, Clone)]
pub struct ObedienceReport {
    /// Considered actions, in the order of `mu_star`'s indices.
    pub consideration: Vec<usize>,
    /// Whether the closed-form condition holds for each of them.
    pub obedient: Vec<bool>,
}

impl ObedienceReport {
    pub fn all_obedient(&self) -> bool {
        self.obedient.iter().all(|&b| b)
    }
}

/// Evaluates the closed-form obedience condition at an agent prior.
pub fn obedience_check(mu_star: &Belief, lambda: f64) -> Result<ObedienceReport> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    let beta = crate::delegation::aligned_unconditional(mu_star, lambda)?;
    let consideration = beta.consideration_set();
    let e1 = (1.0 / lambda).exp();
    let top = mu_star
        .probs()
        .iter()
        .cloned()
        .fold(f64::MIN, f64::max)
        .sqrt();
    let obedient = consideration
        .iter()
        .map(|&i| e1 * mu_star.get(i).sqrt() >= top)
        .collect();
    Ok(ObedienceReport {
        consideration,
        obedient,
    })
}

/// Builds the delegation outcome for `mu_p`, routes it through
/// recommendation and Bayes updating, and checks that the principal's best
/// response to every on-path recommendation is the recommended action
/// (posterior ties resolved in its favour). True means recommendation
/// replicates delegation exactly.
pub fn verify_communication_equilibrium(mu_p: &Belief, lambda: f64) -> Result<bool> {
    let mu_star = optimal_belief_general(mu_p)?;
    let beta_star = optimal_unconditional(mu_p, lambda)?;
    let n = mu_p.len();
    let u = PayoffMatrix::state_matching(n);
    let inst = RIInstance::new(mu_star, u.clone(), lambda)?;
    let pi_star = conditional_from_unconditional(&beta_star, &inst)?;

    let table = principal_posterior(mu_p, &pi_star)?;
    for (slot, &rec) in table.recommendations.iter().enumerate() {
        let post = &table.posteriors[slot];
        // State-matching: acting on a posterior means picking its top state.
        let rec_value = post.get(rec);
        let best = post.probs().iter().cloned().fold(f64::MIN, f64::max);
        if rec_value < best - TIE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
