//! Alternative instruments for steering the agent: action-contingent
//! transfers, outcome contracts, menu restriction, and the feasibility
//! certificate separating implementable from non-implementable choice
//! probabilities.
//!
//! Action transfers shift payoff rows and act exactly like a change of
//! prior: the transfer solution's probabilities, reweighted by
//! `e^{tau_i/lambda}`, generate the same decision rule on the unshifted
//! payoffs. Outcome contracts with a bonus `tau_high` for matching the state
//! rescale the information cost. Menu restriction never helps a principal
//! who can already pick the agent. Whether a target `beta` is reachable by
//! any prior is a linear feasibility question; when it is not, a separating
//! vector `z` certifies it:
//!
//! ```text
//!     sum_{i in C} z_i e^{u_ij/lambda} >= 0  for every state j,
//!     sum_{i in C} z_i < 0.
//! ```

use crate::agent::{binary_precisions, solve_agent, BinaryPrecisions, SolverConfig};
use crate::linalg::{solve_least_squares, solve_square};
use crate::error::{Error, Result};
use crate::types::{AgentSolution, Belief, ChoiceDistribution, PayoffMatrix, RIInstance};
use crate::values;

const CROSS_CHECK_TOL: f64 = 1e-8;
/// Verification tolerance for feasibility certificates.
pub const CERTIFICATE_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Transfer schedules
// ---------------------------------------------------------------------------

/// Action-contingent payments (or intrinsic action biases) `tau(a_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSchedule {
    tau: Vec<f64>,
    limited_liability: bool,
}

impl TransferSchedule {
    pub fn new(tau: Vec<f64>, limited_liability: bool) -> Result<Self> {
        for (i, &t) in tau.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::NonFinitePayoff { action: i, state: 0 });
            }
            if limited_liability && t < 0.0 {
                return Err(Error::ArgumentOutOfRange {
                    name: "tau",
                    value: t,
                    range: "[0, inf) under limited liability",
                });
            }
        }
        Ok(Self {
            tau,
            limited_liability,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            tau: vec![0.0; n],
            limited_liability: true,
        }
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn limited_liability(&self) -> bool {
        self.limited_liability
    }
}

/// Solves the agent problem with payoffs shifted by the transfer schedule.
pub fn solve_agent_with_action_transfers(
    inst: &RIInstance,
    tau: &TransferSchedule,
    cfg: &SolverConfig,
) -> Result<AgentSolution> {
    let shifted = inst.u.with_action_shift(tau.tau())?;
    let shifted_inst = RIInstance::new(inst.mu.clone(), shifted, inst.lambda)?;
    solve_agent(&shifted_inst, cfg)
}

/// The transfer on the second action that makes a binary agent with prior
/// `mu_agent` implement the decision rule the principal would pick herself:
///
/// ```text
///     tau(R) = lambda ln[ ((1-mu)/mu e^{1/lambda} + r) / ((1-mu)/mu + e^{1/lambda} r) ],
///     r = sqrt((1-mu_p)/mu_p),
/// ```
///
/// with `tau(L) = 0`. Non-negative exactly when the agent leans toward L
/// harder than the principal's preferred agent would.
pub fn belief_to_transfers(mu_agent: f64, mu_p_r: f64, lambda: f64) -> Result<TransferSchedule> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    if !(mu_agent > 0.0 && mu_agent < 1.0) {
        return Err(Error::ArgumentOutOfRange {
            name: "mu_agent",
            value: mu_agent,
            range: "(0, 1)",
        });
    }
    if !(mu_p_r > 0.0 && mu_p_r < 1.0) {
        return Err(Error::ArgumentOutOfRange {
            name: "mu_p_r",
            value: mu_p_r,
            range: "(0, 1)",
        });
    }
    let e1 = (1.0 / lambda).exp();
    let odds_l = (1.0 - mu_agent) / mu_agent;
    let r = ((1.0 - mu_p_r) / mu_p_r).sqrt();
    let tau_r = lambda * ((odds_l * e1 + r) / (odds_l + e1 * r)).ln();
    TransferSchedule::new(vec![0.0, tau_r], false)
}

/// Recovers the prior belief equivalent to acting under `tau`: the agent's
/// transfer solution, reweighted by `e^{tau/lambda}`, is inverted back to a
/// prior, and the round trip through the plain problem must reproduce the
/// transfer-driven decision rule.
pub fn transfers_to_belief(tau: &TransferSchedule, inst: &RIInstance) -> Result<Belief> {
    if !inst.u.is_state_matching() {
        return Err(Error::RequiresStateMatching("transfers_to_belief"));
    }
    let cfg = SolverConfig::precise();
    let sol = solve_agent_with_action_transfers(inst, tau, &cfg)?;
    let weights: Vec<f64> = sol
        .beta
        .probs()
        .iter()
        .zip(tau.tau())
        .map(|(&b, &t)| b * (t / inst.lambda).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let beta_prime = ChoiceDistribution::new(weights.iter().map(|&w| w / total).collect())?;
    let mu = crate::delegation::invert_beta_to_belief(&beta_prime, &inst.u, inst.lambda)?;

    // The plain problem at the recovered prior must act like the transfers.
    let plain = RIInstance::new(mu.clone(), inst.u.clone(), inst.lambda)?;
    let plain_sol = solve_agent(&plain, &cfg)?;
    let dev = plain_sol.pi.max_abs_diff(&sol.pi);
    if dev > CROSS_CHECK_TOL {
        return Err(Error::RoundTripMismatch { max_deviation: dev });
    }
    Ok(mu)
}

// ---------------------------------------------------------------------------
// Outcome contracts
// ---------------------------------------------------------------------------

/// A bonus `tau_high` paid when the action matches the state and `tau_low`
/// otherwise; `rho` is the principal's marginal utility of money.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeContract {
    pub tau_high: f64,
    pub tau_low: f64,
    pub rho: f64,
}

impl OutcomeContract {
    pub fn new(tau_high: f64, tau_low: f64, rho: f64) -> Result<Self> {
        if !(tau_high.is_finite() && tau_high >= 0.0) {
            return Err(Error::ArgumentOutOfRange {
                name: "tau_high",
                value: tau_high,
                range: "[0, inf)",
            });
        }
        if !(tau_low.is_finite() && tau_low >= 0.0) {
            return Err(Error::ArgumentOutOfRange {
                name: "tau_low",
                value: tau_low,
                range: "[0, inf)",
            });
        }
        if !rho.is_finite() {
            return Err(Error::ArgumentOutOfRange {
                name: "rho",
                value: rho,
                range: "finite",
            });
        }
        Ok(Self {
            tau_high,
            tau_low,
            rho,
        })
    }
}

/// Binary agent behaviour under a match bonus: the bonus scales the stakes,
/// so the precisions are the plain closed forms with `e^{1/lambda}` replaced
/// by `e^{(1 + tau_high)/lambda}` — equivalently, cost parameter
/// `lambda / (1 + tau_high)`.
pub fn outcome_contract_agent(
    mu_r: f64,
    lambda: f64,
    contract: &OutcomeContract,
) -> Result<BinaryPrecisions> {
    if contract.tau_low != 0.0 {
        return Err(Error::ArgumentOutOfRange {
            name: "tau_low",
            value: contract.tau_low,
            range: "exactly 0 in the closed-form branch",
        });
    }
    binary_precisions(mu_r, lambda / (1.0 + contract.tau_high))
}

/// The principal's objective under a match bonus `tau_high` with money
/// weight `rho`: `(1 - rho tau_high) (mu_p pi(R|r) + (1-mu_p) pi(L|l))`.
pub fn outcome_contract_value(
    mu_r: f64,
    mu_p_r: f64,
    lambda: f64,
    tau_high: f64,
    rho: f64,
) -> Result<f64> {
    let contract = OutcomeContract::new(tau_high, 0.0, rho)?;
    let p = outcome_contract_agent(mu_r, lambda, &contract)?;
    Ok((1.0 - rho * tau_high) * (mu_p_r * p.p_rr + (1.0 - mu_p_r) * p.p_ll))
}

/// Left side of the bonus first-order condition: depends only on the two
/// priors. Minimized over `mu` at the square-root-rule prior, where it
/// equals `2 sqrt(mu_p (1 - mu_p)) < 1`.
fn foc_priors_side(mu_r: f64, mu_p_r: f64) -> f64 {
    mu_p_r * (1.0 - mu_r) / mu_r + (1.0 - mu_p_r) * mu_r / (1.0 - mu_r)
}

/// Right side of the bonus first-order condition; continuous and increasing
/// in `tau_high` from a value >= 1 at 0 up to `e^{2/lambda}` at 1.
fn foc_bonus_side(tau_high: f64, lambda: f64) -> f64 {
    let e2 = (2.0 * (1.0 + tau_high) / lambda).exp();
    let e1 = ((1.0 + tau_high) / lambda).exp();
    let a = lambda * (e2 - 1.0);
    e1 * (a + 2.0 * (1.0 - tau_high)) / (a + (e2 + 1.0) * (1.0 - tau_high))
}

/// Interior bisection of the first-order condition to this accuracy.
const FOC_TOL: f64 = 1e-12;

/// The optimal match bonus for a binary principal with `rho = 1` and
/// `mu_p > 1/2`: zero when the first-order condition has no root in (0, 1)
/// or when paying nothing does better; otherwise the unique interior root.
pub fn optimal_outcome_contract(mu_r: f64, mu_p_r: f64, lambda: f64) -> Result<OutcomeContract> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    if !(mu_r > 0.0 && mu_r < 1.0) {
        return Err(Error::ArgumentOutOfRange {
            name: "mu_r",
            value: mu_r,
            range: "(0, 1)",
        });
    }
    if !(mu_p_r > 0.5 && mu_p_r < 1.0) {
        return Err(Error::ArgumentOutOfRange {
            name: "mu_p_r",
            value: mu_p_r,
            range: "(0.5, 1)",
        });
    }
    let target = foc_priors_side(mu_r, mu_p_r);
    let zero = OutcomeContract::new(0.0, 0.0, 1.0)?;
    if target < foc_bonus_side(0.0, lambda) || target > foc_bonus_side(1.0, lambda) {
        return Ok(zero);
    }
    // The bonus side is increasing: bisect.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > FOC_TOL {
        let mid = 0.5 * (lo + hi);
        if foc_bonus_side(mid, lambda) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    // The first-order condition is necessary only; compare with paying nothing.
    let v_root = outcome_contract_value(mu_r, mu_p_r, lambda, root, 1.0)?;
    let v_zero = outcome_contract_value(mu_r, mu_p_r, lambda, 0.0, 1.0)?;
    if v_root > v_zero {
        OutcomeContract::new(root, 0.0, 1.0)
    } else {
        Ok(zero)
    }
}

/// Grid maximization of the bonus objective for general `rho`; complements
/// the `rho = 1` closed-form path.
pub fn outcome_contract_grid_search(
    mu_r: f64,
    mu_p_r: f64,
    lambda: f64,
    rho: f64,
    steps: usize,
) -> Result<OutcomeContract> {
    if steps < 2 {
        return Err(Error::ArgumentOutOfRange {
            name: "steps",
            value: steps as f64,
            range: ">= 2",
        });
    }
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64 * 0.999_999;
        let v = outcome_contract_value(mu_r, mu_p_r, lambda, t, rho)?;
        if v > best.0 {
            best = (v, t);
        }
    }
    OutcomeContract::new(best.1, 0.0, rho)
}

/// Prior misalignment boundaries of the bonus region: the two solutions of
/// `foc_priors_side(mu, mu_p) = foc_bonus_side(0, lambda)` bracketing the
/// square-root-rule prior. Located numerically by bisection; no closed form.
pub fn outcome_foc_boundaries(mu_p_r: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(mu_p_r > 0.5 && mu_p_r < 1.0) {
        return Err(Error::ArgumentOutOfRange {
            name: "mu_p_r",
            value: mu_p_r,
            range: "(0.5, 1)",
        });
    }
    let chi0 = foc_bonus_side(0.0, lambda);
    let mu_star = crate::delegation::optimal_belief_binary(mu_p_r)?;
    let f = |m: f64| foc_priors_side(m, mu_p_r) - chi0;
    let bisect = |mut lo: f64, mut hi: f64, increasing: bool| -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = f(mid);
            if (v > 0.0) ^ increasing {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    // Left branch decreases from +inf to a value < 1 <= chi0 at mu_star.
    let mu1 = bisect(1e-12, mu_star, false);
    // Right branch increases back to +inf.
    let mu2 = bisect(mu_star, 1.0 - 1e-12, true);
    Ok((mu1, mu2))
}

// ---------------------------------------------------------------------------
// Menu restriction
// ---------------------------------------------------------------------------

/// Solves the agent problem with actions outside `allowed` banned; the
/// returned probabilities and rule are full-size with zeros on banned rows.
pub fn restricted_agent(
    inst: &RIInstance,
    allowed: &[usize],
    cfg: &SolverConfig,
) -> Result<AgentSolution> {
    let mut menu: Vec<usize> = allowed.to_vec();
    menu.sort_unstable();
    menu.dedup();
    let sub_u = inst.u.restrict_actions(&menu)?;
    let sub_inst = RIInstance::new(inst.mu.clone(), sub_u, inst.lambda)?;
    let sub = solve_agent(&sub_inst, cfg)?;

    let n = inst.n_actions();
    let mut beta = vec![0.0; n];
    let mut pi = vec![vec![0.0; inst.n_states()]; n];
    for (slot, &action) in menu.iter().enumerate() {
        beta[action] = sub.beta.get(slot);
        pi[action].clone_from_slice(&sub.pi.rows()[slot]);
    }
    Ok(AgentSolution {
        beta: ChoiceDistribution::with_threshold(beta, sub.beta.support_threshold())?,
        pi: crate::types::DecisionRule::new(pi)?,
        gross_value: sub.gross_value,
        info_cost: sub.info_cost,
        net_value: sub.net_value,
        kkt_residual: sub.kkt_residual,
        iterations: sub.iterations,
    })
}

/// Exhaustively scores every nonempty action menu for a principal sharing
/// the agent's prior and returns a best one. The full menu is always among
/// the maximizers; the implementation verifies that and prefers it on ties.
pub fn optimal_restriction(mu_p: &Belief, lambda: f64, max_n: usize) -> Result<Vec<usize>> {
    let n = mu_p.len();
    if n > max_n {
        return Err(Error::ArgumentOutOfRange {
            name: "n_actions",
            value: n as f64,
            range: "<= max_n for exhaustive enumeration",
        });
    }
    let u = PayoffMatrix::state_matching(n);
    let inst = RIInstance::new(mu_p.clone(), u, lambda)?;
    let cfg = SolverConfig::precise();

    let mut best_value = f64::NEG_INFINITY;
    let mut best_menu: Vec<usize> = Vec::new();
    let mut full_value = f64::NEG_INFINITY;
    for mask in 1u32..(1 << n) {
        let menu: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sol = restricted_agent(&inst, &menu, &cfg)?;
        let v = values::principal_value(mu_p, &sol.pi, &inst.u)?;
        if menu.len() == n {
            full_value = v;
        }
        if v > best_value {
            best_value = v;
            best_menu = menu;
        }
    }
    // No proper menu may strictly beat the full one.
    if full_value < best_value - 1e-10 {
        return Err(Error::RoundTripMismatch {
            max_deviation: best_value - full_value,
        });
    }
    if best_value <= full_value + 1e-12 {
        best_menu = (0..n).collect();
    }
    Ok(best_menu)
}

// ---------------------------------------------------------------------------
// Feasibility certificates
// ---------------------------------------------------------------------------

/// Outcome of the implementability check: a prior that generates the target
/// probabilities, or a separating vector proving none exists.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityCertificate {
    /// A prior solving the first-order system for the target.
    Feasible { mu: Belief },
    /// A separating vector over the considered actions (zeros elsewhere).
    Infeasible { dual_witness: Vec<f64> },
}

impl FeasibilityCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityCertificate::Feasible { .. })
    }

    pub fn mu(&self) -> Option<&Belief> {
        match self {
            FeasibilityCertificate::Feasible { mu } => Some(mu),
            _ => None,
        }
    }

    pub fn dual_witness(&self) -> Option<&[f64]> {
        match self {
            FeasibilityCertificate::Infeasible { dual_witness } => Some(dual_witness),
            _ => None,
        }
    }
}

fn exp_weights(u: &PayoffMatrix, lambda: f64) -> Vec<Vec<f64>> {
    u.rows()
        .iter()
        .map(|row| row.iter().map(|&v| (v / lambda).exp()).collect())
        .collect()
}

/// Enumerates index subsets of {0..n} of each size in 1..=max_size, in
/// lexicographic order, until `f` returns true.
fn any_subset<F: FnMut(&[usize]) -> bool>(n: usize, max_size: usize, mut f: F) -> bool {
    fn rec<F: FnMut(&[usize]) -> bool>(
        n: usize,
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut F,
    ) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(n, size, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    (1..=max_size).any(|size| rec(n, size, 0, &mut cur, &mut f))
}

/// Non-negative solution of the first-order system for the target `beta`:
/// finds `m >= 0` with `sum_j m_j e^{u_ij/lambda} = 1` on the consideration
/// set, and returns the prior `mu_j = m_j Z_j` (`Z_j` the target's state
/// partition sums; the normalization `sum mu = 1` is then automatic).
/// Searches basic solutions of the small system exhaustively; None when no
/// non-negative solution exists.
pub(crate) fn solve_primal_system(
    beta: &ChoiceDistribution,
    u: &PayoffMatrix,
    lambda: f64,
) -> Option<Vec<f64>> {
    let ew = exp_weights(u, lambda);
    let c = beta.consideration_set();
    let n_states = u.n_states();
    // Rows: considered actions; columns: states.
    let a: Vec<Vec<f64>> = c.iter().map(|&i| ew[i].clone()).collect();
    let k = a.len();

    let z: Vec<f64> = (0..n_states)
        .map(|j| (0..u.n_actions()).map(|i| beta.get(i) * ew[i][j]).sum())
        .collect();

    let mut found: Option<Vec<f64>> = None;
    // A solvable system has a basic solution supported on at most rank(A)
    // independent columns; trying every support up to size k covers them all.
    any_subset(n_states, k.min(n_states), |subset| {
        let sub: Vec<Vec<f64>> = a
            .iter()
            .map(|row| subset.iter().map(|&j| row[j]).collect())
            .collect();
        let ones = vec![1.0; k];
        let x = if subset.len() == k {
            solve_square(sub.clone(), ones.clone()).or_else(|| solve_least_squares(&sub, &ones))
        } else {
            solve_least_squares(&sub, &ones)
        };
        let Some(x) = x else { return false };
        if x.iter().any(|&v| v < -1e-11 || !v.is_finite()) {
            return false;
        }
        let mut m = vec![0.0; n_states];
        for (&j, &v) in subset.iter().zip(&x) {
            m[j] = v.max(0.0);
        }
        // Verify the full system.
        for row in &a {
            let s: f64 = row.iter().zip(&m).map(|(&e, &mj)| e * mj).sum();
            if (s - 1.0).abs() > CERTIFICATE_TOL {
                return false;
            }
        }
        let mut mu: Vec<f64> = m.iter().zip(&z).map(|(&mj, &zj)| mj * zj).collect();
        let total: f64 = mu.iter().sum();
        if !(total > 0.0) || (total - 1.0).abs() > 1e-6 {
            return false;
        }
        for v in mu.iter_mut() {
            *v /= total;
        }
        found = Some(mu);
        true
    });
    found
}

/// Searches for a separating vector `z` over the considered actions with
/// `sum_i z_i e^{u_ij/lambda} >= 0` for every state and `sum_i z_i <= -1`
/// (any strictly negative sum rescales to this normalization). Enumerates
/// vertices of the boxed polytope; None when the system is infeasible.
fn find_dual_witness(
    beta: &ChoiceDistribution,
    u: &PayoffMatrix,
    lambda: f64,
) -> Option<Vec<f64>> {
    const BOX: f64 = 1e6;
    let ew = exp_weights(u, lambda);
    let c = beta.consideration_set();
    let k = c.len();
    let n_states = u.n_states();

    // Constraint rows g . z >= h.
    let mut g: Vec<Vec<f64>> = Vec::new();
    let mut h: Vec<f64> = Vec::new();
    for j in 0..n_states {
        g.push(c.iter().map(|&i| ew[i][j]).collect());
        h.push(0.0);
    }
    g.push(vec![-1.0; k]); // -sum z >= 1
    h.push(1.0);
    for i in 0..k {
        let mut row = vec![0.0; k];
        row[i] = 1.0;
        g.push(row.clone());
        h.push(-BOX);
        row[i] = -1.0;
        g.push(row);
        h.push(-BOX);
    }

    let rows = g.len();
    let feasible = |z: &[f64]| -> bool {
        g.iter().zip(&h).all(|(row, &hh)| {
            let v: f64 = row.iter().zip(z).map(|(&a, &b)| a * b).sum();
            v >= hh - CERTIFICATE_TOL
        })
    };

    // Vertices: every set of k active constraints.
    fn combos<F: FnMut(&[usize])>(n: usize, k: usize, f: &mut F) {
        fn rec<F: FnMut(&[usize])>(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut F) {
            if cur.len() == k {
                f(cur);
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, k, i + 1, cur, f);
                cur.pop();
            }
        }
        let mut cur = Vec::new();
        rec(n, k, 0, &mut cur, f);
    }

    let mut result: Option<Vec<f64>> = None;
    combos(rows, k, &mut |active| {
        if result.is_some() {
            return;
        }
        let a: Vec<Vec<f64>> = active.iter().map(|&r| g[r].clone()).collect();
        let b: Vec<f64> = active.iter().map(|&r| h[r]).collect();
        if let Some(z) = solve_square(a, b) {
            if z.iter().all(|v| v.is_finite()) && feasible(&z) {
                result = Some(z);
            }
        }
    });
    result
}

/// Checks a separating vector against its defining inequalities.
pub fn verify_dual_witness(
    z_considered: &[f64],
    beta: &ChoiceDistribution,
    u: &PayoffMatrix,
    lambda: f64,
) -> bool {
    let ew = exp_weights(u, lambda);
    let c = beta.consideration_set();
    if z_considered.len() != c.len() {
        return false;
    }
    let sum: f64 = z_considered.iter().sum();
    if sum >= 0.0 {
        return false;
    }
    (0..u.n_states()).all(|j| {
        let v: f64 = c
            .iter()
            .zip(z_considered)
            .map(|(&i, &zi)| ew[i][j] * zi)
            .sum();
        v >= -CERTIFICATE_TOL
    })
}

/// Decides whether any prior generates the target probabilities `beta` under
/// payoffs `u`: returns the prior when one exists, otherwise a verified
/// separating vector. Exactly one side is ever populated.
pub fn implementability_check(
    beta: &ChoiceDistribution,
    u: &PayoffMatrix,
    lambda: f64,
) -> Result<FeasibilityCertificate> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    if beta.len() != u.n_actions() {
        return Err(Error::DimensionMismatch {
            context: "beta length vs payoff actions",
            expected: u.n_actions(),
            got: beta.len(),
        });
    }
    if let Some(mu) = solve_primal_system(beta, u, lambda) {
        return Ok(FeasibilityCertificate::Feasible {
            mu: Belief::new(mu)?,
        });
    }
    let z = find_dual_witness(beta, u, lambda).ok_or(Error::Infeasible)?;
    debug_assert!(verify_dual_witness(&z, beta, u, lambda));
    Ok(FeasibilityCertificate::Infeasible { dual_witness: z })
}

/// A 3x3 payoff family probing the limits of prior-based implementation:
/// two actions that pay `ln 3` in their own state, plus a safe action paying
/// `ln(2 + epsilon)` everywhere. At `lambda = 1` and `epsilon = 0` the safe
/// action's exponentiated payoff equals the mean of the others, the exact
/// boundary of implementability; `epsilon > 0` (or `lambda > 1`) pushes
/// interior targets strictly outside the implementable set.
pub fn safe_action_matrix(epsilon: f64) -> Result<PayoffMatrix> {
    if !(epsilon >= 0.0) {
        return Err(Error::ArgumentOutOfRange {
            name: "epsilon",
            value: epsilon,
            range: "[0, inf)",
        });
    }
    let l3 = 3.0f64.ln();
    let ls = (2.0 + epsilon).ln();
    PayoffMatrix::from_rows(vec![
        vec![l3, 0.0, 0.0],
        vec![0.0, l3, 0.0],
        vec![ls, ls, ls],
    ])
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delegation::{invert_beta_to_belief, optimal_belief_binary};
    use approx::assert_abs_diff_eq;

    const E: f64 = std::f64::consts::E;

    #[test]
    fn zero_transfers_change_nothing() {
        let inst = RIInstance::binary_state_matching(0.6, 1.0).unwrap();
        let cfg = SolverConfig::default();
        let plain = solve_agent(&inst, &cfg).unwrap();
        let shifted =
            solve_agent_with_action_transfers(&inst, &TransferSchedule::zero(2), &cfg).unwrap();
        assert!(plain.pi.max_abs_diff(&shifted.pi) < 1e-12);
    }

    #[test]
    fn constant_transfers_cancel() {
        let inst = RIInstance::binary_state_matching(0.6, 1.0).unwrap();
        let cfg = SolverConfig::precise();
        let plain = solve_agent(&inst, &cfg).unwrap();
        let tau = TransferSchedule::new(vec![0.37, 0.37], true).unwrap();
        let shifted = solve_agent_with_action_transfers(&inst, &tau, &cfg).unwrap();
        assert!(plain.pi.max_abs_diff(&shifted.pi) < 1e-9);
    }

    #[test]
    fn transfer_formula_aligned_agent() {
        // Aligned agent at mu_p = 0.7 needs a pull-back toward L.
        let tau = belief_to_transfers(0.7, 0.7, 1.0).unwrap();
        assert_abs_diff_eq!(tau.tau()[1], -0.19350044154013926, epsilon = 1e-12);
        assert_eq!(tau.tau()[0], 0.0);
    }

    #[test]
    fn transfer_sign_law() {
        let mu_star = optimal_belief_binary(0.7).unwrap();
        // At the optimal prior the transfer vanishes.
        let at_star = belief_to_transfers(mu_star, 0.7, 1.0).unwrap();
        assert_abs_diff_eq!(at_star.tau()[1], 0.0, epsilon = 1e-12);
        // Below it the transfer pushes toward R, above it pulls back.
        assert!(belief_to_transfers(0.5, 0.7, 1.0).unwrap().tau()[1] > 0.0);
        assert!(belief_to_transfers(0.69, 0.7, 1.0).unwrap().tau()[1] < 0.0);
    }

    #[test]
    fn transfers_implement_the_optimal_rule() {
        // The transfer-driven rule equals the optimal-delegation rule.
        let (mu_p, mu, lambda) = (0.7, 0.7, 1.0);
        let tau = belief_to_transfers(mu, mu_p, lambda).unwrap();
        let inst = RIInstance::binary_state_matching(mu, lambda).unwrap();
        let sol =
            solve_agent_with_action_transfers(&inst, &tau, &SolverConfig::precise()).unwrap();
        let mu_star = optimal_belief_binary(mu_p).unwrap();
        let target = binary_precisions(mu_star, lambda).unwrap().decision_rule();
        assert!(sol.pi.max_abs_diff(&target) < 1e-8);
    }

    #[test]
    fn transfers_roundtrip_to_optimal_belief() {
        let tau = belief_to_transfers(0.7, 0.7, 1.0).unwrap();
        let inst = RIInstance::binary_state_matching(0.7, 1.0).unwrap();
        let mu = transfers_to_belief(&tau, &inst).unwrap();
        assert_abs_diff_eq!(mu.get(1), optimal_belief_binary(0.7).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn zero_transfers_roundtrip_to_own_prior() {
        let inst = RIInstance::binary_state_matching(0.6, 1.0).unwrap();
        let mu = transfers_to_belief(&TransferSchedule::zero(2), &inst).unwrap();
        assert_abs_diff_eq!(mu.get(1), 0.6, epsilon = 1e-7);
    }

    #[test]
    fn outcome_contract_zero_bonus_is_plain() {
        let c = OutcomeContract::new(0.0, 0.0, 1.0).unwrap();
        let with = outcome_contract_agent(0.6, 1.0, &c).unwrap();
        let plain = binary_precisions(0.6, 1.0).unwrap();
        assert_eq!(with, plain);
    }

    #[test]
    fn outcome_contract_bonus_unlocks_learning() {
        // Odds 9 lock the agent at lambda = 1; a bonus above ln 9 - 1 unlocks.
        let locked = outcome_contract_agent(0.9, 1.0, &OutcomeContract::new(0.0, 0.0, 1.0).unwrap())
            .unwrap();
        assert!(!locked.interior);
        let bonus = OutcomeContract::new(1.3, 0.0, 1.0).unwrap();
        let open = outcome_contract_agent(0.9, 1.0, &bonus).unwrap();
        assert!(open.interior);
        // Enormous bonus: near-perfect precision.
        let huge = OutcomeContract::new(50.0, 0.0, 1.0).unwrap();
        let sharp = outcome_contract_agent(0.9, 1.0, &huge).unwrap();
        assert!(sharp.p_rr > 0.999 && sharp.p_ll > 0.999);
    }

    #[test]
    fn outcome_contract_monotone_in_bonus() {
        let mut last = outcome_contract_agent(0.6, 1.0, &OutcomeContract::new(0.0, 0.0, 1.0).unwrap())
            .unwrap();
        for k in 1..20 {
            let c = OutcomeContract::new(k as f64 * 0.1, 0.0, 1.0).unwrap();
            let p = outcome_contract_agent(0.6, 1.0, &c).unwrap();
            assert!(p.p_rr >= last.p_rr - 1e-12);
            assert!(p.p_ll >= last.p_ll - 1e-12);
            last = p;
        }
    }

    #[test]
    fn aligned_prior_gets_no_bonus() {
        let c = optimal_outcome_contract(0.7, 0.7, 1.0).unwrap();
        assert_eq!(c.tau_high, 0.0);
    }

    #[test]
    fn misaligned_prior_gets_bonus() {
        // mu = 0.30 sits inside the bonus region for mu_p = 0.7 at lambda 1.
        let c = optimal_outcome_contract(0.30, 0.7, 1.0).unwrap();
        assert!(c.tau_high > 0.0 && c.tau_high < 1.0);
        // The root actually satisfies the first-order condition.
        assert_abs_diff_eq!(
            foc_bonus_side(c.tau_high, 1.0),
            foc_priors_side(0.30, 0.7),
            epsilon = 1e-9
        );
    }

    #[test]
    fn foc_boundaries_bracket_priors() {
        let (m1, m2) = outcome_foc_boundaries(0.7, 1.0).unwrap();
        let mu_star = optimal_belief_binary(0.7).unwrap();
        assert!(m1 < mu_star && mu_star < 0.7 && 0.7 < m2);
        assert_abs_diff_eq!(m1, 0.33456882789149833, epsilon = 1e-6);
        assert_abs_diff_eq!(m2, 0.8227207187016885, epsilon = 1e-6);
        // chi(0, 1) = (e^2 + 1) / (2 e).
        assert_abs_diff_eq!(
            foc_bonus_side(0.0, 1.0),
            (E * E + 1.0) / (2.0 * E),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(foc_bonus_side(1.0, 1.0), E * E, epsilon = 1e-12);
    }

    #[test]
    fn restriction_full_menu_is_identity() {
        let inst = RIInstance::binary_state_matching(0.6, 1.0).unwrap();
        let cfg = SolverConfig::default();
        let full = restricted_agent(&inst, &[0, 1], &cfg).unwrap();
        let plain = solve_agent(&inst, &cfg).unwrap();
        assert!(full.pi.max_abs_diff(&plain.pi) < 1e-12);
    }

    #[test]
    fn restriction_singleton_menu() {
        let inst = RIInstance::binary_state_matching(0.6, 1.0).unwrap();
        let only = restricted_agent(&inst, &[0], &SolverConfig::default()).unwrap();
        assert_eq!(only.beta.get(0), 1.0);
        assert_eq!(only.info_cost, 0.0);
    }

    #[test]
    fn restriction_never_helps() {
        let mu_p = Belief::new(vec![0.7, 0.2, 0.1]).unwrap();
        let menu = optimal_restriction(&mu_p, 1.0, 6).unwrap();
        assert_eq!(menu, vec![0, 1, 2]);
        // Dropping the favourite action strictly loses.
        let inst = RIInstance::new(mu_p.clone(), PayoffMatrix::state_matching(3), 1.0).unwrap();
        let cfg = SolverConfig::precise();
        let full = restricted_agent(&inst, &[0, 1, 2], &cfg).unwrap();
        let cut = restricted_agent(&inst, &[1, 2], &cfg).unwrap();
        let v_full = values::principal_value(&mu_p, &full.pi, &inst.u).unwrap();
        let v_cut = values::principal_value(&mu_p, &cut.pi, &inst.u).unwrap();
        assert!(v_cut < v_full - 1e-6);
    }

    #[test]
    fn implementability_state_matching_always_feasible() {
        let beta = ChoiceDistribution::new(vec![0.55, 0.25, 0.2]).unwrap();
        let cert =
            implementability_check(&beta, &PayoffMatrix::state_matching(3), 1.0).unwrap();
        assert!(cert.is_feasible());
    }

    #[test]
    fn implementability_boundary_payoffs_still_feasible() {
        // At lambda = 1 the safe-action family with epsilon = 0 sits exactly
        // on the feasibility boundary: the system solves with a prior that
        // zeroes the third state.
        let beta = ChoiceDistribution::new(vec![0.5, 0.3, 0.2]).unwrap();
        let u = safe_action_matrix(0.0).unwrap();
        let cert = implementability_check(&beta, &u, 1.0).unwrap();
        let mu = cert.mu().expect("boundary case is primal-feasible");
        assert_abs_diff_eq!(mu.get(0), 0.55, epsilon = 1e-9);
        assert_abs_diff_eq!(mu.get(1), 0.45, epsilon = 1e-9);
        assert_abs_diff_eq!(mu.get(2), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn implementability_infeasible_beyond_boundary() {
        // Raising lambda above 1 (or epsilon above 0) moves interior targets
        // strictly outside the implementable set; the witness is the scaled
        // (-1, -1, ~2) separating vector.
        let beta = ChoiceDistribution::new(vec![1.0 / 3.0; 3]).unwrap();
        let u = safe_action_matrix(0.0).unwrap();
        let cert = implementability_check(&beta, &u, 2.0).unwrap();
        let z = cert.dual_witness().expect("infeasible at lambda = 2");
        assert!(verify_dual_witness(z, &beta, &u, 2.0));

        let cert_eps = implementability_check(
            &ChoiceDistribution::new(vec![0.4, 0.35, 0.25]).unwrap(),
            &safe_action_matrix(0.5).unwrap(),
            1.0,
        )
        .unwrap();
        assert!(!cert_eps.is_feasible());
    }

    #[test]
    fn infeasible_target_has_no_generating_prior() {
        // Independent confirmation of the certificate: inversion fails too.
        let beta = ChoiceDistribution::new(vec![1.0 / 3.0; 3]).unwrap();
        let u = safe_action_matrix(0.0).unwrap();
        let err = invert_beta_to_belief(&beta, &u, 2.0).unwrap_err();
        assert_eq!(err, Error::Infeasible);
    }

    #[test]
    fn degenerate_beta_feasible_with_extreme_prior() {
        let beta = ChoiceDistribution::new(vec![1.0, 0.0]).unwrap();
        let cert = implementability_check(&beta, &PayoffMatrix::state_matching(2), 1.0).unwrap();
        assert!(cert.is_feasible());
    }
}
