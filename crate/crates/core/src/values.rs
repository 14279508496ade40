//! Entropy arithmetic and the agent/principal value functions.
//!
//! Everything is in nats; the cost parameter lambda therefore carries units
//! of utils per nat.

use crate::error::{Error, Result};
use crate::types::{Belief, DecisionRule, PayoffMatrix};

/// Shannon entropy `-sum p ln p` with the `0 ln 0 = 0` convention.
///
/// Always lands in `[0, ln N]` for a valid belief.
pub fn entropy(b: &Belief) -> f64 {
    b.probs()
        .iter()
        .map(|&p| if p > 0.0 { -p * p.ln() } else { 0.0 })
        .sum()
}

/// Unconditional choice probabilities induced by a rule under prior `mu`:
/// `beta(a_i) = sum_j mu_j pi(a_i | w_j)`.
pub fn unconditional_probs(mu: &Belief, pi: &DecisionRule) -> Result<Vec<f64>> {
    if mu.len() != pi.n_states() {
        return Err(Error::DimensionMismatch {
            context: "belief length vs decision rule states",
            expected: pi.n_states(),
            got: mu.len(),
        });
    }
    let mut beta = vec![0.0; pi.n_actions()];
    for (i, b) in beta.iter_mut().enumerate() {
        *b = (0..mu.len()).map(|j| mu.get(j) * pi.get(i, j)).sum();
    }
    Ok(beta)
}

/// Mutual information (nats) between state and action under `mu` and `pi`:
/// `sum_j mu_j sum_i pi_ij ln(pi_ij / beta_i)` with `beta` the induced
/// unconditional probabilities.
///
/// Zero exactly when every state column of `pi` equals `beta`.
pub fn mutual_information(mu: &Belief, pi: &DecisionRule) -> Result<f64> {
    let beta = unconditional_probs(mu, pi)?;
    let mut mi = 0.0;
    for j in 0..mu.len() {
        let w = mu.get(j);
        if w == 0.0 {
            continue;
        }
        for (i, &b) in beta.iter().enumerate() {
            let p = pi.get(i, j);
            if p > 0.0 {
                mi += w * p * (p / b).ln();
            }
        }
    }
    // Exact arithmetic gives mi >= 0; rounding can leave a tiny negative.
    Ok(mi.max(0.0))
}

/// Information cost `lambda * I(state; action)` in utils.
pub fn info_cost(mu: &Belief, pi: &DecisionRule, lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(lambda * mutual_information(mu, pi)?)
}

/// Expected terminal payoff `sum_j mu_j sum_i pi_ij u_ij` without any cost.
pub fn expected_payoff(mu: &Belief, pi: &DecisionRule, u: &PayoffMatrix) -> Result<f64> {
    if mu.len() != u.n_states() || pi.n_states() != u.n_states() {
        return Err(Error::DimensionMismatch {
            context: "belief/rule states vs payoff states",
            expected: u.n_states(),
            got: mu.len(),
        });
    }
    if pi.n_actions() != u.n_actions() {
        return Err(Error::DimensionMismatch {
            context: "rule actions vs payoff actions",
            expected: u.n_actions(),
            got: pi.n_actions(),
        });
    }
    let mut v = 0.0;
    for j in 0..mu.len() {
        let w = mu.get(j);
        if w == 0.0 {
            continue;
        }
        for i in 0..u.n_actions() {
            v += w * pi.get(i, j) * u.get(i, j);
        }
    }
    Ok(v)
}

/// The agent's objective: expected payoff under his prior minus the
/// information cost.
pub fn agent_value(
    mu: &Belief,
    pi: &DecisionRule,
    u: &PayoffMatrix,
    lambda: f64,
) -> Result<f64> {
    Ok(expected_payoff(mu, pi, u)? - info_cost(mu, pi, lambda)?)
}

/// The principal's objective: expected payoff under her own prior. The
/// information cost is borne by the agent and does not appear.
pub fn principal_value(mu_p: &Belief, pi: &DecisionRule, u: &PayoffMatrix) -> Result<f64> {
    expected_payoff(mu_p, pi, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rule(rows: Vec<Vec<f64>>) -> DecisionRule {
        DecisionRule::new(rows).unwrap()
    }

    #[test]
    fn entropy_degenerate_is_zero() {
        assert_eq!(entropy(&Belief::new(vec![1.0, 0.0]).unwrap()), 0.0);
    }

    #[test]
    fn entropy_uniform_binary_is_ln2() {
        let h = entropy(&Belief::uniform(2));
        assert_abs_diff_eq!(h, std::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn entropy_skewed_binary() {
        let h = entropy(&Belief::new(vec![0.7, 0.3]).unwrap());
        assert_abs_diff_eq!(h, 0.6108643020548935, epsilon = 1e-12);
    }

    #[test]
    fn mi_fully_revealing_uniform_is_ln2() {
        let mu = Belief::uniform(2);
        let pi = rule(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_abs_diff_eq!(
            mutual_information(&mu, &pi).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn mi_uninformative_is_zero() {
        let mu = Belief::new(vec![0.3, 0.45, 0.25]).unwrap();
        let pi = rule(vec![vec![0.2, 0.2, 0.2], vec![0.8, 0.8, 0.8]]);
        assert_eq!(mutual_information(&mu, &pi).unwrap(), 0.0);
    }

    #[test]
    fn mi_binary_logit_optimum() {
        // Optimal binary rule at lambda=1, mu=0.5 has both precisions e/(1+e);
        // its information is ln 2 - H(e/(1+e)) = ln 2 - ln(1+e) + e/(1+e).
        let e = std::f64::consts::E;
        let p = e / (1.0 + e);
        let mu = Belief::uniform(2);
        let pi = rule(vec![vec![p, 1.0 - p], vec![1.0 - p, p]]);
        let expected = std::f64::consts::LN_2 - (1.0 + e).ln() + p;
        assert_abs_diff_eq!(expected, 0.11094407167172737, epsilon = 1e-12);
        assert_abs_diff_eq!(
            mutual_information(&mu, &pi).unwrap(),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn info_cost_linear_in_lambda() {
        let mu = Belief::new(vec![0.6, 0.4]).unwrap();
        let pi = rule(vec![vec![0.9, 0.2], vec![0.1, 0.8]]);
        let c1 = info_cost(&mu, &pi, 1.0).unwrap();
        let c2 = info_cost(&mu, &pi, 2.0).unwrap();
        assert_abs_diff_eq!(c2, 2.0 * c1, epsilon = 1e-14);
        assert!(info_cost(&mu, &pi, -1.0).is_err());
    }

    #[test]
    fn info_cost_fully_revealing_uniform() {
        let mu = Belief::uniform(2);
        let pi = rule(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_abs_diff_eq!(
            info_cost(&mu, &pi, 1.0).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn agent_value_uninformative_state_matching() {
        // Rule concentrated on the first action earns mu(w_1) at zero cost.
        let mu = Belief::new(vec![0.35, 0.65]).unwrap();
        let pi = rule(vec![vec![1.0, 1.0], vec![0.0, 0.0]]);
        let u = PayoffMatrix::state_matching(2);
        assert_abs_diff_eq!(agent_value(&mu, &pi, &u, 1.0).unwrap(), 0.35, epsilon = 1e-15);
    }

    #[test]
    fn agent_value_binary_optimum() {
        let e = std::f64::consts::E;
        let p = e / (1.0 + e);
        let mu = Belief::uniform(2);
        let pi = rule(vec![vec![p, 1.0 - p], vec![1.0 - p, p]]);
        let u = PayoffMatrix::state_matching(2);
        // gross = p; cost = ln2 - ln(1+e) + p; net = their difference.
        assert_abs_diff_eq!(
            agent_value(&mu, &pi, &u, 1.0).unwrap(),
            0.6201145069582775,
            epsilon = 1e-12
        );
    }

    #[test]
    fn principal_value_examples() {
        let u = PayoffMatrix::state_matching(2);
        let identity = rule(vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let mu_p = Belief::new(vec![0.7, 0.3]).unwrap();
        assert_abs_diff_eq!(
            principal_value(&mu_p, &identity, &u).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let stubborn = rule(vec![vec![1.0, 1.0], vec![0.0, 0.0]]);
        assert_abs_diff_eq!(
            principal_value(&mu_p, &stubborn, &u).unwrap(),
            0.7,
            epsilon = 1e-15
        );
    }

    #[test]
    fn principal_value_bounded_by_max_payoff() {
        let u = PayoffMatrix::from_rows(vec![vec![0.3, 1.7], vec![0.9, 0.1]]).unwrap();
        let mu_p = Belief::new(vec![0.25, 0.75]).unwrap();
        let pi = rule(vec![vec![0.6, 0.4], vec![0.4, 0.6]]);
        assert!(principal_value(&mu_p, &pi, &u).unwrap() <= 1.7);
    }
}
