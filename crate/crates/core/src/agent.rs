//! The agent's information-acquisition problem.
//!
//! The agent picks conditional choice probabilities `pi(a|w)` to maximize
//! expected payoff minus `lambda` times the mutual information between state
//! and action. At an optimum the rule has the logit form
//!
//! ```text
//!     pi(a_i|w_j) = beta_i e^{u_ij/lambda} / sum_k beta_k e^{u_kj/lambda}
//! ```
//!
//! and the unconditional probabilities `beta` satisfy, for every supported i,
//!
//! ```text
//!     sum_j mu_j e^{u_ij/lambda} / Z_j = 1,    Z_j = sum_k beta_k e^{u_kj/lambda},
//! ```
//!
//! with the left-hand side at most 1 for unsupported actions. `solve_agent`
//! finds `beta` by the multiplicative fixed point `beta_i <- beta_i * m_i`
//! (`m_i` the left-hand side above), which preserves zeros and converges
//! linearly from the uniform start. Convergence is declared on the residual
//! of this first-order system, never on iterate movement, so the returned
//! solution always carries its own optimality certificate.
//!
//! Near a consideration-set boundary the plain iteration can crawl: an
//! action excluded in the limit keeps a multiplier just below 1 and sheds
//! mass geometrically slowly. When the residual stalls, the solver freezes
//! such actions to zero as a *candidate*, re-converges on the reduced
//! support, and keeps the result only if the full certificate passes;
//! otherwise the wrongly dropped action is restored and iteration resumes.

use crate::error::{Error, Result};
use crate::simplex::{for_each_composition, grid_point_count};
use crate::types::{
    AgentSolution, ChoiceDistribution, DecisionRule, RIInstance,
    DEFAULT_SUPPORT_THRESHOLD,
};
use crate::values;

// ---------------------------------------------------------------------------
// Solver configuration
// ---------------------------------------------------------------------------

/// Iteration budget and tolerances for the fixed-point solver.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Hard cap on multiplicative updates (summed across restarts).
    pub max_iters: usize,
    /// Residual below which the first-order system counts as satisfied.
    pub fp_tolerance: f64,
    /// Mass below which an action is snapped to zero after convergence.
    pub prune_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            fp_tolerance: 1e-10,
            prune_threshold: 1e-9,
        }
    }
}

impl SolverConfig {
    /// Tighter tolerance with a larger budget, for round-trip checks.
    pub fn precise() -> Self {
        Self {
            max_iters: 2_000_000,
            fp_tolerance: 1e-13,
            prune_threshold: 1e-9,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::ArgumentOutOfRange {
                name: "max_iters",
                value: 0.0,
                range: ">= 1",
            });
        }
        if !(self.fp_tolerance > 0.0) {
            return Err(Error::ArgumentOutOfRange {
                name: "fp_tolerance",
                value: self.fp_tolerance,
                range: "(0, inf)",
            });
        }
        if !(self.prune_threshold > 0.0) {
            return Err(Error::ArgumentOutOfRange {
                name: "prune_threshold",
                value: self.prune_threshold,
                range: "(0, inf)",
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Logit rule and optimality residual
// ---------------------------------------------------------------------------

/// Exponentiated payoffs `e^{u_ij / lambda}`, actions x states.
fn exp_payoffs(inst: &RIInstance) -> Vec<Vec<f64>> {
    inst.u
        .rows()
        .iter()
        .map(|row| row.iter().map(|&v| (v / inst.lambda).exp()).collect())
        .collect()
}

fn partition_by_state(beta: &[f64], ew: &[Vec<f64>], n_states: usize) -> Vec<f64> {
    (0..n_states)
        .map(|j| beta.iter().zip(ew).map(|(&b, row)| b * row[j]).sum())
        .collect()
}

/// Multipliers `m_i = sum_j mu_j e^{u_ij/lambda} / Z_j` of the first-order
/// system; fixed points with `m_i = 1` on the support are optimal.
fn multipliers(beta: &[f64], mu: &[f64], ew: &[Vec<f64>]) -> Vec<f64> {
    let n_states = mu.len();
    let z = partition_by_state(beta, ew, n_states);
    ew.iter()
        .map(|row| {
            (0..n_states)
                .map(|j| if mu[j] > 0.0 { mu[j] * row[j] / z[j] } else { 0.0 })
                .sum()
        })
        .collect()
}

fn residual_from_multipliers(beta: &[f64], m: &[f64], support_cut: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for (&b, &mi) in beta.iter().zip(m) {
        if b > support_cut {
            worst = worst.max((mi - 1.0).abs());
        } else {
            worst = worst.max((mi - 1.0).max(0.0));
        }
    }
    worst
}

/// The RI-logit rule generated by unconditional probabilities `beta`:
/// `pi(a_i|w_j) = beta_i e^{u_ij/lambda} / Z_j`.
pub fn conditional_from_unconditional(
    beta: &ChoiceDistribution,
    inst: &RIInstance,
) -> Result<DecisionRule> {
    if beta.len() != inst.n_actions() {
        return Err(Error::DimensionMismatch {
            context: "beta length vs instance actions",
            expected: inst.n_actions(),
            got: beta.len(),
        });
    }
    let ew = exp_payoffs(inst);
    let z = partition_by_state(beta.probs(), &ew, inst.n_states());
    let rows = (0..inst.n_actions())
        .map(|i| {
            (0..inst.n_states())
                .map(|j| beta.get(i) * ew[i][j] / z[j])
                .collect()
        })
        .collect();
    DecisionRule::new(rows)
}

/// Largest violation of the first-order system at `beta`: deviation of the
/// multiplier from 1 on the consideration set, positive excess above 1 off it.
pub fn optimality_residual(beta: &ChoiceDistribution, inst: &RIInstance) -> Result<f64> {
    if beta.len() != inst.n_actions() {
        return Err(Error::DimensionMismatch {
            context: "beta length vs instance actions",
            expected: inst.n_actions(),
            got: beta.len(),
        });
    }
    let ew = exp_payoffs(inst);
    let m = multipliers(beta.probs(), inst.mu.probs(), &ew);
    Ok(residual_from_multipliers(
        beta.probs(),
        &m,
        beta.support_threshold(),
    ))
}

// ---------------------------------------------------------------------------
// Fixed-point solver
// ---------------------------------------------------------------------------

/// Residual-stall window: rescue steps are attempted whenever a window of
/// iterations passes without the residual at least halving.
const STALL_WINDOW: usize = 512;

/// Upper bound on the log of an extrapolation jump's growth factor.
const JUMP_LOG_MAX: f64 = 2.0;

struct FixedPoint {
    beta: Vec<f64>,
    spent: usize,
}

fn renormalize(beta: &mut [f64]) {
    let s: f64 = beta.iter().sum();
    for b in beta.iter_mut() {
        *b /= s;
    }
}

/// Runs the plain multiplicative iteration until the residual (with support
/// classified by `prune`) drops to `tol`, the budget runs out, or the
/// residual stalls. Returns (multipliers, residual, window decay ratio,
/// stalled flag).
fn iterate(
    fp: &mut FixedPoint,
    mu: &[f64],
    ew: &[Vec<f64>],
    tol: f64,
    prune: f64,
    budget: usize,
    allow_stall_exit: bool,
) -> (Vec<f64>, f64, f64, bool) {
    let mut window_anchor = f64::INFINITY;
    let mut window_left = STALL_WINDOW;
    loop {
        let m = multipliers(&fp.beta, mu, ew);
        let res = residual_from_multipliers(&fp.beta, &m, prune);
        if res <= tol || fp.spent >= budget {
            return (m, res, 0.0, false);
        }
        if allow_stall_exit {
            window_left -= 1;
            if window_left == 0 {
                let ratio = res / window_anchor;
                if ratio > 0.5 {
                    return (m, res, ratio, true);
                }
                window_anchor = res;
                window_left = STALL_WINDOW;
            }
        }
        for (b, &mi) in fp.beta.iter_mut().zip(&m) {
            *b *= mi;
        }
        renormalize(&mut fp.beta);
        fp.spent += 1;
    }
}

/// Active-set Newton polish of the first-order system on a given support.
///
/// One redundant equation is replaced by the normalization (the system
/// satisfies `sum_i beta_i m_i = 1` identically on the simplex). A
/// coordinate driven to the boundary leaves the active set and stays at
/// zero. Returns a candidate only; the caller decides by re-evaluating the
/// certificate.
fn newton_polish(
    beta0: &[f64],
    start_support: &[usize],
    mu: &[f64],
    ew: &[Vec<f64>],
    tol: f64,
) -> Option<Vec<f64>> {
    let n = beta0.len();
    let n_states = mu.len();
    let mut support: Vec<usize> = start_support.to_vec();
    let mut beta = vec![0.0; n];
    // Coordinates resurrected into the support start from a small but
    // meaningful mass; damped Newton tolerates rough starts at these sizes.
    for &i in &support {
        beta[i] = beta0[i].max(1e-3 / n as f64);
    }
    renormalize(&mut beta);

    'active_set: loop {
        if support.is_empty() {
            return None;
        }
        if support.len() == 1 {
            let mut out = vec![0.0; n];
            out[support[0]] = 1.0;
            return Some(out);
        }
        for _ in 0..60 {
            let z = partition_by_state(&beta, ew, n_states);
            if z.iter().any(|&v| !(v > 0.0)) {
                return None;
            }
            let m = multipliers(&beta, mu, ew);
            let sum_dev: f64 = support.iter().map(|&i| beta[i]).sum::<f64>() - 1.0;
            let worst = support
                .iter()
                .map(|&i| (m[i] - 1.0).abs())
                .fold(sum_dev.abs(), f64::max);
            if worst <= 0.1 * tol {
                return Some(beta);
            }
            // Equations: m_i - 1 = 0 for all support coords but the heaviest,
            // plus the normalization; unknowns: support coords.
            let anchor = *support
                .iter()
                .max_by(|&&a, &&b| beta[a].partial_cmp(&beta[b]).unwrap())?;
            let k = support.len();
            let mut jac = vec![vec![0.0; k]; k];
            let mut rhs = vec![0.0; k];
            let mut row = 0;
            for &i in &support {
                if i == anchor {
                    continue;
                }
                for (col, &kk) in support.iter().enumerate() {
                    // d m_i / d beta_k = -sum_j mu_j E_ij E_kj / Z_j^2
                    jac[row][col] = -(0..n_states)
                        .map(|j| mu[j] * ew[i][j] * ew[kk][j] / (z[j] * z[j]))
                        .sum::<f64>();
                }
                rhs[row] = -(m[i] - 1.0);
                row += 1;
            }
            for col in 0..k {
                jac[row][col] = 1.0;
            }
            rhs[row] = -sum_dev;
            let step = crate::linalg::solve_square(jac, rhs)?;

            // Damp the step to stay strictly positive; a coordinate pinned
            // at the boundary is removed from the active set instead.
            let mut t = 1.0f64;
            for (col, &i) in support.iter().enumerate() {
                if step[col] < 0.0 {
                    t = t.min(-0.9 * beta[i] / step[col]).min(1.0);
                }
            }
            if t < 1e-4 {
                let (drop_col, &drop_idx) = support
                    .iter()
                    .enumerate()
                    .filter(|(col, _)| step[*col] < 0.0)
                    .min_by(|(ca, &a), (cb, &b)| {
                        (beta[a] / -step[*ca])
                            .partial_cmp(&(beta[b] / -step[*cb]))
                            .unwrap()
                    })?;
                let _ = drop_col;
                beta[drop_idx] = 0.0;
                support.retain(|&i| i != drop_idx);
                renormalize(&mut beta);
                continue 'active_set;
            }
            for (col, &i) in support.iter().enumerate() {
                beta[i] += t * step[col];
            }
        }
        return Some(beta);
    }
}

/// Solves the agent problem, returning the choice probabilities, the logit
/// rule they generate, the value decomposition, and the certificate residual.
///
/// States with zero prior mass are payoff-irrelevant and are dropped before
/// iterating; the returned rule still covers them (the logit formula is well
/// defined there).
///
/// The plain iteration converges linearly, but the rate degrades near
/// consideration-set boundaries. When the residual stalls, the solver first
/// tries a Newton polish of the first-order system on the current support,
/// then a geometric extrapolation of the iteration tail
/// (`beta_i <- beta_i m_i^P`, reverted if it does not pay off). Both rescue
/// steps are candidates only: every return re-evaluates the certificate, so
/// the rescue machinery affects speed, never correctness.
pub fn solve_agent(inst: &RIInstance, cfg: &SolverConfig) -> Result<AgentSolution> {
    cfg.validate()?;
    let n_actions = inst.n_actions();

    // Drop zero-mass states for the fixed point.
    let live_states: Vec<usize> = (0..inst.n_states())
        .filter(|&j| inst.mu.get(j) > 0.0)
        .collect();
    let mu_live: Vec<f64> = live_states.iter().map(|&j| inst.mu.get(j)).collect();
    let ew_full = exp_payoffs(inst);
    let ew_live: Vec<Vec<f64>> = ew_full
        .iter()
        .map(|row| live_states.iter().map(|&j| row[j]).collect())
        .collect();

    let mut fp = FixedPoint {
        beta: vec![1.0 / n_actions as f64; n_actions],
        spent: 0,
    };
    // Trust bound on the log-shrink a jump may apply; shrinks when a jump
    // fails to pay off.
    let mut jump_trust = 46.0f64;
    let mut last_res;

    loop {
        let (m, res, decay, stalled) = iterate(
            &mut fp,
            &mu_live,
            &ew_live,
            cfg.fp_tolerance,
            cfg.prune_threshold,
            cfg.max_iters,
            true,
        );
        last_res = res;

        if res <= cfg.fp_tolerance {
            let dusty = fp
                .beta
                .iter()
                .any(|&b| b > 0.0 && b < cfg.prune_threshold);
            if !dusty {
                return finish(inst, fp.beta, res, fp.spent);
            }
            // Snap dust to exact zeros, renormalize, and re-verify; the
            // multiplicative update preserves the zeros while the remaining
            // support re-converges.
            for b in fp.beta.iter_mut() {
                if *b < cfg.prune_threshold {
                    *b = 0.0;
                }
            }
            renormalize(&mut fp.beta);
            let (_, res2, _, _) = iterate(
                &mut fp,
                &mu_live,
                &ew_live,
                cfg.fp_tolerance,
                cfg.prune_threshold,
                cfg.max_iters,
                false,
            );
            last_res = res2;
            if res2 <= cfg.fp_tolerance {
                return finish(inst, fp.beta, res2, fp.spent);
            }
        }

        if fp.spent >= cfg.max_iters {
            break;
        }

        if stalled {
            // Rescue 1: Newton polish on a ladder of candidate supports.
            // Coordinates with multipliers measurably below 1 are the usual
            // stall culprits (they shed mass geometrically slowly), so the
            // first candidate drops them all; later candidates are more
            // conservative. A zeroed coordinate whose multiplier exceeds 1
            // re-enters every candidate — the multiplicative update could
            // never resurrect it, but Newton can. Wrong guesses cost
            // microseconds: acceptance is by certificate only.
            let keep_above = |cut: f64| -> Vec<usize> {
                (0..n_actions)
                    .filter(|&i| {
                        (fp.beta[i] > cfg.prune_threshold && m[i] >= cut)
                            || m[i] > 1.0 + cfg.fp_tolerance
                    })
                    .collect::<Vec<_>>()
            };
            let mut candidates = vec![
                keep_above(1.0 - 10.0 * cfg.fp_tolerance),
                keep_above(1.0 - 0.5 * res),
                keep_above(0.0),
            ];
            candidates.dedup();
            let mut rescued = false;
            for support in candidates.into_iter().filter(|s| !s.is_empty()) {
                if let Some(candidate) =
                    newton_polish(&fp.beta, &support, &mu_live, &ew_live, cfg.fp_tolerance)
                {
                    let cm = multipliers(&candidate, &mu_live, &ew_live);
                    let cres = residual_from_multipliers(&candidate, &cm, cfg.prune_threshold);
                    fp.spent += 1;
                    if cres <= cfg.fp_tolerance {
                        fp.beta = candidate;
                        rescued = true;
                        break;
                    }
                }
            }
            if rescued {
                continue;
            }
            // Rescue 2: geometric extrapolation of the iteration tail. With
            // per-window residual ratio r, the remaining tail multiplies each
            // coordinate by roughly m^(W / -ln r); apply that power now,
            // clamped by the trust bound, and revert if a follow-up window
            // shows no progress. A worsening window carries no tail estimate,
            // so fall back to a moderate fixed power there.
            let saved = fp.beta.clone();
            let saved_res = res;
            let power = if decay < 1.0 {
                STALL_WINDOW as f64 / (-decay.ln()).max(1e-12)
            } else {
                16.0 * STALL_WINDOW as f64
            };
            for (b, &mi) in fp.beta.iter_mut().zip(&m) {
                if *b > 0.0 {
                    *b *= (power * mi.ln()).clamp(-jump_trust, JUMP_LOG_MAX).exp();
                }
            }
            renormalize(&mut fp.beta);
            fp.spent += 1;
            let probe_budget = cfg.max_iters.min(fp.spent + STALL_WINDOW);
            let (probe_m, probe_res, _, _) = iterate(
                &mut fp,
                &mu_live,
                &ew_live,
                cfg.fp_tolerance,
                cfg.prune_threshold,
                probe_budget,
                false,
            );
            // A jump that leaves a banished coordinate wanting back in has
            // created a state the multiplicative update cannot escape.
            let banished_wanter = fp
                .beta
                .iter()
                .zip(&probe_m)
                .any(|(&b, &mi)| b <= cfg.prune_threshold && mi > 1.0 + cfg.fp_tolerance);
            if probe_res > 0.9 * saved_res || banished_wanter {
                fp.beta = saved;
                jump_trust = (jump_trust * 0.25).max(2.0);
            } else {
                jump_trust = (jump_trust * 2.0).min(46.0);
            }
        }
    }
    Err(Error::NonConvergence {
        residual: last_res,
        iterations: fp.spent,
        tolerance: cfg.fp_tolerance,
    })
}

fn finish(inst: &RIInstance, beta: Vec<f64>, res: f64, iterations: usize) -> Result<AgentSolution> {
    let beta = ChoiceDistribution::with_threshold(beta, DEFAULT_SUPPORT_THRESHOLD)?;
    let pi = conditional_from_unconditional(&beta, inst)?;
    let gross_value = values::expected_payoff(&inst.mu, &pi, &inst.u)?;
    let info_cost = values::info_cost(&inst.mu, &pi, inst.lambda)?;
    Ok(AgentSolution {
        beta,
        pi,
        gross_value,
        info_cost,
        net_value: gross_value - info_cost,
        kkt_residual: res,
        iterations,
    })
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Cap on oracle grid points; grids beyond this are refused.
pub const DEFAULT_GRID_CAP: u128 = 200_000_000;

/// Exhaustive search over a simplex grid of unconditional probabilities.
///
/// Every grid point is expanded to its logit rule and scored with the exact
/// objective (expected payoff minus information cost), so this path shares
/// no algebra with the fixed point it cross-checks. Within `O(grid_step)`
/// of the optimum by continuity.
pub fn brute_force_agent(inst: &RIInstance, grid_step: f64) -> Result<AgentSolution> {
    brute_force_agent_capped(inst, grid_step, DEFAULT_GRID_CAP)
}

/// `brute_force_agent` with an explicit grid-point cap.
pub fn brute_force_agent_capped(
    inst: &RIInstance,
    grid_step: f64,
    cap: u128,
) -> Result<AgentSolution> {
    if !(grid_step > 0.0 && grid_step < 0.5) {
        return Err(Error::ArgumentOutOfRange {
            name: "grid_step",
            value: grid_step,
            range: "(0, 0.5)",
        });
    }
    let n = inst.n_actions();
    let m = (1.0 / grid_step).round() as usize;
    let points = grid_point_count(n, m);
    if points > cap {
        return Err(Error::GridTooLarge { points, cap });
    }

    let mut best_value = f64::NEG_INFINITY;
    let mut best_beta: Vec<f64> = Vec::new();
    let mut probe = vec![0.0f64; n];
    let mut err: Option<Error> = None;
    for_each_composition(n, m, |counts| {
        if err.is_some() {
            return;
        }
        for (p, &c) in probe.iter_mut().zip(counts) {
            *p = c as f64 / m as f64;
        }
        let beta = match ChoiceDistribution::new(probe.clone()) {
            Ok(b) => b,
            Err(_) => return, // grid corners with all mass below threshold cannot occur
        };
        let pi = match conditional_from_unconditional(&beta, inst) {
            Ok(pi) => pi,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        match values::agent_value(&inst.mu, &pi, &inst.u, inst.lambda) {
            Ok(v) => {
                if v > best_value {
                    best_value = v;
                    best_beta = beta.probs().to_vec();
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }

    let beta = ChoiceDistribution::new(best_beta)?;
    let pi = conditional_from_unconditional(&beta, inst)?;
    let gross_value = values::expected_payoff(&inst.mu, &pi, &inst.u)?;
    let info_cost = values::info_cost(&inst.mu, &pi, inst.lambda)?;
    let kkt_residual = optimality_residual(&beta, inst)?;
    Ok(AgentSolution {
        beta,
        pi,
        gross_value,
        info_cost,
        net_value: gross_value - info_cost,
        kkt_residual,
        iterations: 0,
    })
}

// ---------------------------------------------------------------------------
// Binary closed forms
// ---------------------------------------------------------------------------

/// The two decision precisions of the binary state-matching problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryPrecisions {
    /// pi(R | r): probability of the matching action in the "r" state.
    pub p_rr: f64,
    /// pi(L | l): probability of the matching action in the "l" state.
    pub p_ll: f64,
    /// True when both precisions are strictly inside (0, 1), i.e. the agent
    /// acquires information.
    pub interior: bool,
}

impl BinaryPrecisions {
    /// The 2x2 decision rule with states ordered (l, r) and actions (L, R).
    pub fn decision_rule(&self) -> DecisionRule {
        DecisionRule::new(vec![
            vec![self.p_ll, 1.0 - self.p_rr],
            vec![1.0 - self.p_ll, self.p_rr],
        ])
        .expect("precisions in [0,1] form valid columns")
    }
}

/// Closed-form precisions of the binary state-matching problem:
///
/// ```text
///     pi(R|r) = (mu e^{1/l} - (1-mu)) e^{1/l} / ((e^{2/l} - 1) mu)
/// ```
///
/// and symmetrically for pi(L|l), each cropped to [0, 1]. The solution is
/// interior exactly when the prior odds mu/(1-mu) lie inside
/// [e^{-1/l}, e^{1/l}]; outside that band the agent learns nothing and
/// plays the ex-ante favourite.
pub fn binary_precisions(mu_r: f64, lambda: f64) -> Result<BinaryPrecisions> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    if !(0.0..=1.0).contains(&mu_r) {
        return Err(Error::ArgumentOutOfRange {
            name: "mu_r",
            value: mu_r,
            range: "[0, 1]",
        });
    }
    // Degenerate priors: a certain agent never learns.
    if mu_r == 0.0 {
        return Ok(BinaryPrecisions {
            p_rr: 0.0,
            p_ll: 1.0,
            interior: false,
        });
    }
    if mu_r == 1.0 {
        return Ok(BinaryPrecisions {
            p_rr: 1.0,
            p_ll: 0.0,
            interior: false,
        });
    }
    let e1 = (1.0 / lambda).exp();
    let e2 = (2.0 / lambda).exp();
    let p_rr = ((mu_r * e1 - (1.0 - mu_r)) * e1 / ((e2 - 1.0) * mu_r)).clamp(0.0, 1.0);
    let p_ll = (((1.0 - mu_r) * e1 - mu_r) * e1 / ((e2 - 1.0) * (1.0 - mu_r))).clamp(0.0, 1.0);
    let odds = mu_r / (1.0 - mu_r);
    let interior = odds > 1.0 / e1 && odds < e1;
    Ok(BinaryPrecisions {
        p_rr,
        p_ll,
        interior,
    })
}

// ---------------------------------------------------------------------------
// All-or-nothing learning benchmark
// ---------------------------------------------------------------------------

/// Willingness to pay for perfect information in the binary all-or-nothing
/// benchmark: `(1 - c) - max(mu, 1 - mu)`. The agent learns iff this is
/// non-negative.
pub fn pandora_wtp(mu_r: f64, c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mu_r) {
        return Err(Error::ArgumentOutOfRange {
            name: "mu_r",
            value: mu_r,
            range: "[0, 1]",
        });
    }
    if !(c >= 0.0) {
        return Err(Error::ArgumentOutOfRange {
            name: "c",
            value: c,
            range: "[0, inf)",
        });
    }
    Ok((1.0 - c) - mu_r.max(1.0 - mu_r))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
