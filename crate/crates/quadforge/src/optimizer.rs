//! Restarted adaptive gradient descent for discovering exact rules.
//!
//! Each restart draws a fresh uniform random rule and refines it with the
//! Yogi optimiser until the monitored `L²` drops below the convergence
//! threshold, the improvement stagnates, or the iteration cap is hit. On
//! exhausting the restart budget for a point count `q`, the search
//! increments `q` and tries again.
//!
//! Restarts are embarrassingly parallel: each one owns its optimiser state
//! and scratch buffers and derives its seed as `base_seed + restart_index`,
//! so a parallel run visits exactly the same restart outcomes as a serial
//! one. The search returns the converged restart with the lowest index,
//! which makes the discovered rule independent of worker count.

use std::collections::VecDeque;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polyspace::{product_exponent_set, trunk_exponent_set, Dim, SpaceBasis};
use crate::quadrature::{loss, LossWorkspace, QuadratureRule};

/// All hyperparameters of the restarted search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    /// Yogi learning rate.
    pub learning_rate: f64,
    /// Cap on gradient steps within one restart.
    pub max_inner_iterations: usize,
    /// Restarts attempted at each point count before incrementing `q`.
    /// Desk-scale default 500; the reference setting is 10_000.
    pub max_restarts_per_q: usize,
    /// Convergence threshold on the monitored `L²`.
    pub convergence_threshold: f64,
    /// Trailing window length for the early-stopping check.
    pub stagnation_window: usize,
    /// Minimum improvement of the best `L²` over the window.
    pub stagnation_epsilon: f64,
    pub yogi_beta1: f64,
    pub yogi_beta2: f64,
    pub yogi_epsilon: f64,
    /// Seed of restart 0; restart `k` uses `base_seed + k`.
    pub base_seed: u64,
    /// When set, an exact rule must also satisfy the strict (0,1) bounds
    /// and unit weight sum to count as converged.
    pub enforce_feasibility: bool,
    /// Manual starting point count; defaults to the dimension-count lower
    /// bound.
    pub q_override: Option<usize>,
    /// Number of point counts tried before the global budget is exhausted.
    pub max_q_increments: usize,
    /// Worker threads for restart execution: 0 uses the default pool width,
    /// 1 forces strictly sequential execution.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            learning_rate: 1e-2,
            max_inner_iterations: 1_000_000,
            max_restarts_per_q: 500,
            convergence_threshold: 1e-22,
            stagnation_window: 100,
            stagnation_epsilon: 1e-23,
            yogi_beta1: 0.9,
            yogi_beta2: 0.999,
            yogi_epsilon: 1e-3,
            base_seed: 0,
            enforce_feasibility: true,
            q_override: None,
            max_q_increments: 4,
            threads: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("learning_rate", self.learning_rate),
            ("convergence_threshold", self.convergence_threshold),
            ("stagnation_epsilon", self.stagnation_epsilon),
            ("yogi_epsilon", self.yogi_epsilon),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("yogi_beta1", self.yogi_beta1), ("yogi_beta2", self.yogi_beta2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(format!("{name} must lie in (0,1), got {v}")));
            }
        }
        if self.stagnation_window < 2 {
            return Err(Error::invalid("stagnation_window must be at least 2"));
        }
        if self.max_inner_iterations == 0 || self.max_restarts_per_q == 0 {
            return Err(Error::invalid("iteration and restart budgets must be positive"));
        }
        if self.max_q_increments == 0 {
            return Err(Error::invalid("max_q_increments must be at least 1"));
        }
        if let Some(q) = self.q_override {
            if q == 0 {
                return Err(Error::invalid("q override must be at least 1"));
            }
        }
        Ok(())
    }
}

/// Flat optimiser state over the rule parameters (`x y [z] w` per point).
#[derive(Clone, Debug)]
pub struct OptimizerState {
    pub parameters: Vec<f64>,
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
}

impl OptimizerState {
    pub fn new(parameters: Vec<f64>) -> Self {
        let len = parameters.len();
        OptimizerState {
            parameters,
            first_moment: vec![0.0; len],
            second_moment: vec![0.0; len],
            step_count: 0,
        }
    }
}

/// One Yogi update with bias correction:
/// `m ← β₁m + (1−β₁)g`, `v ← v − (1−β₂)·sign(v − g²)·g²`,
/// `θ ← θ − lr · m̂ / (√v̂ + ε)`.
///
/// The additive, sign-controlled second-moment update is what distinguishes
/// Yogi from Adam: the effective step size decays slowly even when gradient
/// magnitudes collapse near an exact rule.
pub fn yogi_step(state: &mut OptimizerState, gradient: &[f64], config: &SearchConfig) {
    debug_assert_eq!(state.parameters.len(), gradient.len());
    state.step_count += 1;
    let t = state.step_count as i32;
    let b1 = config.yogi_beta1;
    let b2 = config.yogi_beta2;
    let bias1 = 1.0 - b1.powi(t);
    let bias2 = 1.0 - b2.powi(t);
    for k in 0..gradient.len() {
        let g = gradient[k];
        let g2 = g * g;
        state.first_moment[k] = b1 * state.first_moment[k] + (1.0 - b1) * g;
        let v = state.second_moment[k];
        let sign = if v > g2 {
            1.0
        } else if v < g2 {
            -1.0
        } else {
            0.0
        };
        state.second_moment[k] = v - (1.0 - b2) * sign * g2;
        let m_hat = state.first_moment[k] / bias1;
        let v_hat = state.second_moment[k] / bias2;
        state.parameters[k] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.yogi_epsilon);
    }
}

fn neumaier_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Uniform random rule: coordinates and raw weights drawn i.i.d. from
/// U(0,1) by a counter-based generator, then the weights are divided by
/// their sum. A fixed seed reproduces the rule bitwise.
pub fn initialize_rule(dim: Dim, q: usize, seed: u64) -> Result<QuadratureRule> {
    if q == 0 {
        return Err(Error::invalid("point count must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = dim.size();
    let mut coords = Vec::with_capacity(q * d);
    let mut weights = Vec::with_capacity(q);
    for _ in 0..q {
        for _ in 0..d {
            coords.push(rng.random::<f64>());
        }
        weights.push(rng.random::<f64>());
    }
    let total = neumaier_sum(&weights);
    for w in &mut weights {
        *w /= total;
    }
    QuadratureRule::new(dim, coords, weights)
}

/// Why a restart ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RestartOutcome {
    Converged,
    Stagnated,
    IterationCap,
    /// `L²` crossed the threshold but the rule violated the bounds or
    /// weight-sum constraints while feasibility was enforced.
    Infeasible,
    /// A non-finite loss or gradient component aborted the restart.
    Aborted,
}

/// Result of a single restart. For failed restarts `rule` holds the best
/// configuration seen.
#[derive(Clone, Debug)]
pub struct RestartResult {
    pub outcome: RestartOutcome,
    pub rule: QuadratureRule,
    pub best_l_squared: f64,
    pub iterations_used: usize,
}

/// Runs one restart from the uniform initialisation derived from `seed`.
pub fn run_restart(
    basis: &SpaceBasis,
    q: usize,
    seed: u64,
    config: &SearchConfig,
) -> Result<RestartResult> {
    config.validate()?;
    let rule = initialize_rule(basis.dim(), q, seed)?;
    optimize_from(basis, &rule, config)
}

/// Refines an existing rule in place of the random initialisation; a rule
/// that already meets the threshold converges at iteration 1.
pub fn optimize_from(
    basis: &SpaceBasis,
    initial: &QuadratureRule,
    config: &SearchConfig,
) -> Result<RestartResult> {
    if basis.dim() != initial.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim().size(),
            got: initial.dim().size(),
        });
    }
    Ok(optimize_core(basis, initial.flat_params(), config))
}

fn optimize_core(basis: &SpaceBasis, params: Vec<f64>, config: &SearchConfig) -> RestartResult {
    let dim = basis.dim();
    let q = params.len() / (dim.size() + 1);
    let mut ws = LossWorkspace::new(basis, q);
    let mut state = OptimizerState::new(params);
    let mut grad = vec![0.0; state.parameters.len()];
    let mut best_l2 = f64::INFINITY;
    let mut best_params = state.parameters.clone();
    let mut history: VecDeque<f64> = VecDeque::with_capacity(config.stagnation_window + 1);

    let finish = |outcome, params: &[f64], best_l2, iterations| RestartResult {
        outcome,
        rule: QuadratureRule::from_flat_params(dim, params).expect("parameter layout"),
        best_l_squared: best_l2,
        iterations_used: iterations,
    };

    for iter in 1..=config.max_inner_iterations {
        let l2 = ws.loss_sq_flat(basis, &state.parameters, Some(&mut grad));
        if !l2.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return finish(RestartOutcome::Aborted, &best_params, best_l2, iter);
        }
        if l2 < best_l2 {
            best_l2 = l2;
            best_params.copy_from_slice(&state.parameters);
        }
        if l2 < config.convergence_threshold {
            // confirm through the order-canonical loss before declaring
            // convergence, so the recorded value matches later re-evaluation
            let rule = QuadratureRule::from_flat_params(dim, &state.parameters)
                .expect("parameter layout");
            let confirmed = loss(basis, &rule).expect("dims match").l_squared;
            if confirmed < config.convergence_threshold {
                let outcome = if !config.enforce_feasibility || rule.is_feasible() {
                    RestartOutcome::Converged
                } else {
                    RestartOutcome::Infeasible
                };
                return RestartResult {
                    outcome,
                    rule,
                    best_l_squared: confirmed,
                    iterations_used: iter,
                };
            }
        }
        history.push_back(best_l2);
        if history.len() > config.stagnation_window {
            let window_start = history.pop_front().expect("window filled");
            if window_start - best_l2 < config.stagnation_epsilon {
                return finish(RestartOutcome::Stagnated, &best_params, best_l2, iter);
            }
        }
        yogi_step(&mut state, &grad, config);
    }
    finish(
        RestartOutcome::IterationCap,
        &best_params,
        best_l2,
        config.max_inner_iterations,
    )
}

/// Per-point-count telemetry of a search.
#[derive(Clone, Debug, Serialize)]
pub struct QLevelStats {
    pub q: usize,
    pub restarts: usize,
    pub converged: usize,
    pub stagnated: usize,
    pub iteration_cap: usize,
    pub infeasible: usize,
    pub aborted: usize,
    pub total_iterations: u64,
    /// Lowest `L²` reached by any restart at this level.
    pub best_l_squared: f64,
}

impl QLevelStats {
    fn new(q: usize) -> Self {
        QLevelStats {
            q,
            restarts: 0,
            converged: 0,
            stagnated: 0,
            iteration_cap: 0,
            infeasible: 0,
            aborted: 0,
            total_iterations: 0,
            best_l_squared: f64::INFINITY,
        }
    }

    fn tally(&mut self, result: &RestartResult) {
        self.restarts += 1;
        self.total_iterations += result.iterations_used as u64;
        self.best_l_squared = self.best_l_squared.min(result.best_l_squared);
        match result.outcome {
            RestartOutcome::Converged => self.converged += 1,
            RestartOutcome::Stagnated => self.stagnated += 1,
            RestartOutcome::IterationCap => self.iteration_cap += 1,
            RestartOutcome::Infeasible => self.infeasible += 1,
            RestartOutcome::Aborted => self.aborted += 1,
        }
    }
}

/// Aggregated restart termination reasons across all point counts tried.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct OutcomeCounts {
    pub converged: usize,
    pub stagnated: usize,
    pub iteration_cap: usize,
    pub infeasible: usize,
    pub aborted: usize,
}

/// Full outcome of a search, including the discovered rule when one was
/// found and enough telemetry to reproduce or diagnose the run.
#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub dim: Dim,
    pub p: usize,
    /// Starting point count (lower bound or manual override).
    pub q_attempted: usize,
    /// Point count of the final level tried.
    pub q_final: usize,
    /// Restarts consumed at the final level.
    pub restarts_used: usize,
    pub converged: bool,
    pub rule: Option<QuadratureRule>,
    pub final_l: f64,
    pub final_l_squared: f64,
    pub outcomes: OutcomeCounts,
    pub per_q: Vec<QLevelStats>,
    pub wall_time_secs: f64,
    pub base_seed: u64,
}

/// Restarted search for an exact rule on the degree-`p` trunk product space.
///
/// Starts at the dimension-count lower bound (or the configured override),
/// spends `max_restarts_per_q` restarts per point count, and increments `q`
/// on exhaustion, up to `max_q_increments` levels. Returns the first exact
/// rule found — ties between parallel workers resolve to the lowest restart
/// index, so the result is identical for any worker count.
pub fn search(dim: Dim, p: usize, config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let started = Instant::now();
    let trunk = if std::env::var("QF_FORCE_TENSOR").is_ok() {
        let mut idx = Vec::new();
        for i in 0..=p {
            for j in 0..=p {
                for k in 0..=p {
                    idx.push(crate::polyspace::MultiIndex::new(dim, &[i, j, k]));
                }
            }
        }
        crate::polyspace::ExponentSet::from_indices(dim, p, idx)
    } else {
        trunk_exponent_set(dim, p)?
    };
    let basis = SpaceBasis::new(product_exponent_set(&trunk));
    let q_start = match config.q_override {
        Some(q) => q,
        None => basis.len().div_ceil(dim.size() + 1),
    };

    let mut per_q = Vec::new();
    let mut winner: Option<RestartResult> = None;
    let mut q_final = q_start;
    for level in 0..config.max_q_increments {
        let q = q_start + level;
        q_final = q;
        let (stats, found) = run_level(&basis, q, config);
        per_q.push(stats);
        if let Some(result) = found {
            winner = Some(result);
            break;
        }
    }

    let mut outcomes = OutcomeCounts::default();
    for level in &per_q {
        outcomes.converged += level.converged;
        outcomes.stagnated += level.stagnated;
        outcomes.iteration_cap += level.iteration_cap;
        outcomes.infeasible += level.infeasible;
        outcomes.aborted += level.aborted;
    }
    let restarts_used = per_q.last().map(|s| s.restarts).unwrap_or(0);

    let report = match winner {
        Some(result) => SearchReport {
            dim,
            p,
            q_attempted: q_start,
            q_final,
            restarts_used,
            converged: true,
            final_l: result.best_l_squared.sqrt(),
            final_l_squared: result.best_l_squared,
            rule: Some(result.rule),
            outcomes,
            per_q,
            wall_time_secs: started.elapsed().as_secs_f64(),
            base_seed: config.base_seed,
        },
        None => {
            let best = per_q
                .iter()
                .map(|s| s.best_l_squared)
                .fold(f64::INFINITY, f64::min);
            SearchReport {
                dim,
                p,
                q_attempted: q_start,
                q_final,
                restarts_used,
                converged: false,
                rule: None,
                final_l: best.sqrt(),
                final_l_squared: best,
                outcomes,
                per_q,
                wall_time_secs: started.elapsed().as_secs_f64(),
                base_seed: config.base_seed,
            }
        }
    };
    Ok(report)
}

/// Runs up to `max_restarts_per_q` restarts at a fixed `q`. Returns the
/// tallied stats for restart indices `0..=winner` (or the whole budget when
/// nothing converges) plus the winning result, if any. Work items are
/// dispatched in waves; only indices up to the lowest converged one are
/// tallied, so serial and parallel execution produce identical telemetry.
fn run_level(
    basis: &SpaceBasis,
    q: usize,
    config: &SearchConfig,
) -> (QLevelStats, Option<RestartResult>) {
    let mut stats = QLevelStats::new(q);
    let budget = config.max_restarts_per_q;
    let seed_of = |idx: usize| config.base_seed.wrapping_add(idx as u64);

    let sequential = config.threads == 1 || !cfg!(feature = "parallel");
    if sequential {
        for idx in 0..budget {
            let rule = initialize_rule(basis.dim(), q, seed_of(idx)).expect("q >= 1");
            let result = optimize_core(basis, rule.flat_params(), config);
            stats.tally(&result);
            if result.outcome == RestartOutcome::Converged {
                return (stats, Some(result));
            }
        }
        return (stats, None);
    }

    #[cfg(feature = "parallel")]
    {
        let pool = if config.threads > 0 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(config.threads)
                    .build()
                    .expect("worker pool"),
            )
        } else {
            None
        };
        let width = match &pool {
            Some(p) => p.current_num_threads(),
            None => rayon::current_num_threads(),
        }
        .max(1);
        let wave = width * 2;

        let mut start = 0;
        while start < budget {
            let end = (start + wave).min(budget);
            let job = || -> Vec<RestartResult> {
                (start..end)
                    .into_par_iter()
                    .map(|idx| {
                        let rule =
                            initialize_rule(basis.dim(), q, seed_of(idx)).expect("q >= 1");
                        optimize_core(basis, rule.flat_params(), config)
                    })
                    .collect()
            };
            let results = match &pool {
                Some(p) => p.install(job),
                None => job(),
            };
            for result in results {
                stats.tally(&result);
                if result.outcome == RestartOutcome::Converged {
                    return (stats, Some(result));
                }
            }
            start = end;
        }
        (stats, None)
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!("sequential path handles the non-parallel build")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{verify_rule, Verdict, DEFAULT_VERIFY_TOLERANCE};
    use approx::assert_abs_diff_eq;

    fn basis_2d(p: usize) -> SpaceBasis {
        SpaceBasis::new(product_exponent_set(&trunk_exponent_set(Dim::Two, p).unwrap()))
    }

    #[test]
    fn initialize_rule_contract() {
        let rule = initialize_rule(Dim::Three, 43, 12345).unwrap();
        assert_eq!(rule.num_points(), 43);
        assert!((rule.weight_sum() - 1.0).abs() <= 1e-15);
        for &c in rule.coords() {
            assert!(c > 0.0 && c < 1.0);
        }
        for &w in rule.weights() {
            assert!(w > 0.0 && w < 1.0);
        }
    }

    #[test]
    fn initialize_rule_deterministic() {
        let a = initialize_rule(Dim::Two, 9, 42).unwrap();
        let b = initialize_rule(Dim::Two, 9, 42).unwrap();
        assert_eq!(a, b);
        let c = initialize_rule(Dim::Two, 9, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn yogi_zero_gradient_is_fixed_point() {
        let config = SearchConfig::default();
        let mut state = OptimizerState::new(vec![0.3, 0.7]);
        yogi_step(&mut state, &[0.0, 0.0], &config);
        assert_eq!(state.parameters, vec![0.3, 0.7]);
        assert_eq!(state.step_count, 1);
    }

    #[test]
    fn yogi_single_step_hand_computed() {
        // one parameter, g = 0.5, fresh state, defaults:
        //   m1 = 0.1 * 0.5 = 0.05          -> mhat = 0.05 / (1 - 0.9)  = 0.5
        //   v1 = (1 - 0.999) * 0.25        -> vhat = v1 / (1 - 0.999)  = 0.25
        //   step = 0.01 * 0.5 / (sqrt(0.25) + 1e-3)
        let config = SearchConfig::default();
        let mut state = OptimizerState::new(vec![1.0]);
        yogi_step(&mut state, &[0.5], &config);
        let expected_step = 0.01 * 0.5 / (0.5 + 1e-3);
        assert_abs_diff_eq!(state.parameters[0], 1.0 - expected_step, epsilon = 1e-12);
        assert_abs_diff_eq!(state.first_moment[0], 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(state.second_moment[0], 0.001 * 0.25, epsilon = 1e-18);
    }

    #[test]
    fn yogi_second_moment_climbs_toward_gradient_square() {
        let config = SearchConfig::default();
        let mut state = OptimizerState::new(vec![0.0]);
        let g = [0.5];
        let mut prev = 0.0;
        for _ in 0..50 {
            yogi_step(&mut state, &g, &config);
            let v = state.second_moment[0];
            assert!(v >= prev, "second moment decreased: {prev} -> {v}");
            assert!(v <= 0.25 + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn warm_start_from_exact_rule_converges_immediately() {
        let basis = basis_2d(1);
        let (coords, weights) = crate::verifier::tensor_gauss(2, 2).unwrap();
        let exact = QuadratureRule::new(Dim::Two, coords, weights).unwrap();
        let config = SearchConfig::default();
        let result = optimize_from(&basis, &exact, &config).unwrap();
        assert_eq!(result.outcome, RestartOutcome::Converged);
        assert_eq!(result.iterations_used, 1);
        assert!(result.best_l_squared < 1e-22);
    }

    #[test]
    fn single_point_cannot_satisfy_p3_space() {
        let basis = basis_2d(3);
        let config = SearchConfig {
            max_inner_iterations: 4_000,
            ..SearchConfig::default()
        };
        let result = run_restart(&basis, 1, 7, &config).unwrap();
        assert!(matches!(
            result.outcome,
            RestartOutcome::Stagnated | RestartOutcome::IterationCap
        ));
        assert!(result.best_l_squared > 1e-3);
    }

    #[test]
    fn best_loss_is_monotone_within_restart() {
        let basis = basis_2d(1);
        let config = SearchConfig {
            max_inner_iterations: 300,
            ..SearchConfig::default()
        };
        let rule = initialize_rule(Dim::Two, 4, 3).unwrap();
        let mut ws = LossWorkspace::new(&basis, 4);
        let mut state = OptimizerState::new(rule.flat_params());
        let mut grad = vec![0.0; state.parameters.len()];
        let mut best = f64::INFINITY;
        for _ in 0..config.max_inner_iterations {
            let l2 = ws.loss_sq_flat(&basis, &state.parameters, Some(&mut grad));
            best = best.min(l2);
            yogi_step(&mut state, &grad, &config);
        }
        assert!(best.is_finite());
        assert!(best >= 0.0);
    }

    #[test]
    fn search_finds_bilinear_rule() {
        let config = SearchConfig {
            threads: 1,
            max_restarts_per_q: 40,
            ..SearchConfig::default()
        };
        let report = search(Dim::Two, 1, &config).unwrap();
        assert!(report.converged, "report: {report:?}");
        let rule = report.rule.as_ref().unwrap();
        assert!(report.final_l_squared < 1e-22);
        let verification = verify_rule(rule, 1, DEFAULT_VERIFY_TOLERANCE).unwrap();
        assert_eq!(verification.verdict, Verdict::Exact);
        // q escalates from the heuristic bound of 3 to the known minimum 4
        assert_eq!(report.q_attempted, 3);
        assert_eq!(report.q_final, 4);
    }

    #[test]
    fn manual_q_below_feasibility_escalates_and_exhausts() {
        let config = SearchConfig {
            q_override: Some(1),
            max_restarts_per_q: 2,
            max_inner_iterations: 500,
            max_q_increments: 2,
            threads: 1,
            ..SearchConfig::default()
        };
        let report = search(Dim::Two, 3, &config).unwrap();
        assert!(!report.converged);
        assert_eq!(report.q_attempted, 1);
        assert_eq!(report.q_final, 2);
        assert_eq!(report.per_q.len(), 2);
        assert_eq!(report.outcomes.converged, 0);
        assert_eq!(
            report.outcomes.stagnated + report.outcomes.iteration_cap + report.outcomes.infeasible,
            4
        );
    }

    #[test]
    #[cfg(feature = "parallel")]
    fn restart_outcome_independent_of_neighbours() {
        // the same restart index must produce the same result whether run
        // alone or as part of a batch
        let basis = basis_2d(1);
        let config = SearchConfig {
            max_inner_iterations: 2_000,
            ..SearchConfig::default()
        };
        let solo = run_restart(&basis, 4, config.base_seed.wrapping_add(5), &config).unwrap();
        let batch: Vec<RestartResult> = (0..8)
            .into_par_iter()
            .map(|idx| {
                let rule = initialize_rule(Dim::Two, 4, config.base_seed + idx as u64).unwrap();
                optimize_core(&basis, rule.flat_params(), &config)
            })
            .collect();
        assert_eq!(solo.outcome, batch[5].outcome);
        assert_eq!(solo.rule, batch[5].rule);
        assert_eq!(
            solo.best_l_squared.to_bits(),
            batch[5].best_l_squared.to_bits()
        );
    }
}
