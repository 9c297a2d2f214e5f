//! Oracle-equivalence and invariant checks on small instances.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sepsparse::dual::{active_count, default_lambda_bounds, dual_value};
use sepsparse::wide::wide_vec;
use sepsparse::{
    brute_force_project, max_feasible_sparsity, opt_value_of_dual, project_blocks, Engine, ProjectionInstance,
};

use crate::algo::{run, Algo};

#[derive(Debug, Clone, Copy)]
pub struct SelftestConfig {
    pub max_d: usize,
    pub max_delta: usize,
    /// Random cost vectors per `(d, Δ, k)` shape.
    pub trials: usize,
    pub seed: u64,
    /// Largest cost of the random vectors.
    pub max_cost: i64,
    /// Deliberately corrupts one engine's answer to check the harness.
    pub mutate: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            max_d: 12,
            max_delta: 4,
            trials: 200,
            seed: 0,
            max_cost: 15,
            mutate: false,
        }
    }
}

/// The first instance on which a check failed, in replayable form.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub check: String,
    pub costs: Vec<i64>,
    pub k: usize,
    pub delta: usize,
    pub block: Option<usize>,
    pub detail: String,
}

impl Failure {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "check": self.check,
            "costs": self.costs,
            "k": self.k,
            "delta": self.delta,
            "b": self.block,
            "detail": self.detail,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} failed on c={:?} k={} delta={}: {}",
            self.check, self.costs, self.k, self.delta, self.detail
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelftestReport {
    pub exhaustive_instances: usize,
    pub random_instances: usize,
    pub block_instances: usize,
    pub checks: usize,
    pub failure: Option<Failure>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Checker<'a> {
    cfg: &'a SelftestConfig,
    report: SelftestReport,
}

type Check = std::result::Result<(), String>;

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

impl Checker<'_> {
    fn record(&mut self, check: &str, costs: &[i64], k: usize, delta: usize, block: Option<usize>, r: Check) -> bool {
        self.report.checks += 1;
        match r {
            Ok(()) => true,
            Err(detail) => {
                self.report.failure = Some(Failure {
                    check: check.into(),
                    costs: costs.to_vec(),
                    k,
                    delta,
                    block,
                    detail,
                });
                false
            }
        }
    }

    /// All checks on one plain instance; false after the first failure.
    fn instance(&mut self, costs: &[i64], k: usize, delta: usize, seed: u64) -> bool {
        let d = costs.len();
        let inst = ProjectionInstance::from_i64(costs, k, delta).expect("non-empty costs and Δ ≥ 1");
        let opt = brute_force_project(&inst).expect("feasible small instance").value;
        for algo in [Algo::Lassp, Algo::Recover, Algo::Dp, Algo::DpFast] {
            let r = run(algo, &inst, seed).map_err(|e| e.to_string()).and_then(|out| {
                let mut value = out.projection.value;
                if self.cfg.mutate && algo == Algo::Recover {
                    value += 1;
                }
                ensure(value == opt, || format!("value {value} != optimum {opt}"))?;
                ensure(out.projection.support.is_in_model(d, k, delta), || {
                    format!("support {} is not a member of the model", out.projection.support)
                })
            });
            if !self.record(algo.name(), costs, k, delta, None, r) {
                return false;
            }
        }
        let approx = run(Algo::Approx2, &inst, seed)
            .map_err(|e| e.to_string())
            .and_then(|out| {
                let p = out.projection;
                ensure(p.support.is_separated(delta) && p.support.len() <= k, || {
                    format!("bad support {}", p.support)
                })?;
                ensure(BigInt::from(2) * &p.value >= opt, || {
                    format!("2·{} < optimum {opt}", p.value)
                })
            });
        if !self.record("approx2", costs, k, delta, None, approx) {
            return false;
        }
        let c = wide_i128(costs);
        let dual = opt_value_of_dual(&c, delta, k, None)
            .map_err(|e| e.to_string())
            .and_then(|o| {
                ensure(BigInt::from(o.objective) == opt, || {
                    format!("dual optimum {} != {opt}", o.objective)
                })
            });
        if !self.record("opt_value_of_dual", costs, k, delta, None, dual) {
            return false;
        }
        let structure = dual_structure(&c, delta, k);
        self.record("dual_structure", costs, k, delta, None, structure)
    }

    fn blocks(&mut self, costs: &[i64], delta: usize, b: usize, k: usize) -> bool {
        let want = block_brute_force(costs, delta, b, k);
        let got = project_blocks(&wide_vec(costs), delta, b, k, Engine::Recover);
        let r = match (want, got) {
            (Some(w), Ok(p)) => ensure(
                p.value == BigInt::from(w) && p.support.is_separated(delta + b - 1),
                || format!("value {} (starts {}) != block optimum {w}", p.value, p.support),
            ),
            (None, Err(sepsparse::Error::Infeasible { .. })) => Ok(()),
            (w, g) => Err(format!("oracle {w:?} vs engine {g:?}")),
        };
        self.record("project_blocks", costs, k, delta, Some(b), r)
    }
}

fn wide_i128(costs: &[i64]) -> Vec<i128> {
    costs.iter().map(|&c| c as i128).collect()
}

/// Convexity of the dual value, monotone active counts and the optimality
/// certificate at the computed optimum.
fn dual_structure(c: &[i128], delta: usize, k: usize) -> Check {
    let (lb, ub) = default_lambda_bounds(c, k).map_err(|e| e.to_string())?;
    let f = |l: i128| dual_value(c, delta, k, &l).expect("small instance");
    let a = |l: i128| active_count(c, delta, &l).expect("small instance");
    let lambdas: Vec<i128> = (lb - 2..=ub + 2).collect();
    for w in lambdas.windows(3) {
        ensure(f(w[0]) + f(w[2]) >= 2 * f(w[1]), || {
            format!("dual value not convex at λ={}", w[1])
        })?;
        ensure(a(w[0]) >= a(w[1]), || format!("active count grows at λ={}", w[1]))?;
    }
    let opt = opt_value_of_dual(c, delta, k, None).map_err(|e| e.to_string())?;
    let w0 = opt.solution.w0;
    ensure(a(w0) >= k && k >= a(w0 + 1), || format!("certificate fails at w0={w0}"))
}

/// Best total of `k` blocks of length `b` with starts at least `Δ + b - 1` apart.
pub fn block_brute_force(c: &[i64], delta: usize, b: usize, k: usize) -> Option<i64> {
    let d = c.len();
    if k == 0 {
        return Some(0);
    }
    if b > d {
        return None;
    }
    let starts = d - b + 1;
    sepsparse::SeparatedSupports::new(starts, k, delta + b - 1)
        .map(|s| {
            s.indices()
                .iter()
                .map(|&p| c[p - 1..p - 1 + b].iter().sum::<i64>())
                .sum()
        })
        .max()
}

fn shapes(max_d: usize, max_delta: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=max_d).flat_map(move |d| {
        (1..=max_delta).flat_map(move |delta| (0..=max_feasible_sparsity(d, delta)).map(move |k| (d, delta, k)))
    })
}

/// Every cost vector over `{0, 1, 2}` up to `d = 5`, then `trials` random
/// vectors per shape, then the block model; stops at the first failure.
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let mut ck = Checker {
        cfg,
        report: SelftestReport::default(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (d, delta, k) in shapes(cfg.max_d.min(5), cfg.max_delta) {
        for code in 0..3usize.pow(d as u32) {
            let costs: Vec<i64> = (0..d).map(|i| (code / 3usize.pow(i as u32) % 3) as i64).collect();
            ck.report.exhaustive_instances += 1;
            if !ck.instance(&costs, k, delta, rng.random()) {
                return ck.report;
            }
        }
    }
    for (d, delta, k) in shapes(cfg.max_d, cfg.max_delta) {
        for _ in 0..cfg.trials {
            let costs: Vec<i64> = (0..d).map(|_| rng.random_range(0..=cfg.max_cost)).collect();
            ck.report.random_instances += 1;
            if !ck.instance(&costs, k, delta, rng.random()) {
                return ck.report;
            }
        }
    }
    let block_trials = cfg.trials.div_ceil(20).max(1);
    for d in 1..=cfg.max_d.min(14) {
        for b in 1..=3 {
            for delta in 1..=cfg.max_delta.min(3) {
                for k in 0..=d {
                    for _ in 0..block_trials {
                        let costs: Vec<i64> = (0..d).map(|_| rng.random_range(0..=cfg.max_cost)).collect();
                        ck.report.block_instances += 1;
                        if !ck.blocks(&costs, delta, b, k) {
                            return ck.report;
                        }
                    }
                }
            }
        }
    }
    ck.report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_oracle_examples() {
        assert_eq!(block_brute_force(&[1, 1, 0, 0, 1, 1], 2, 2, 2), Some(4));
        assert_eq!(block_brute_force(&[1, 1, 0, 0, 1], 2, 2, 2), Some(3));
        assert_eq!(block_brute_force(&[1, 1, 0, 1], 2, 2, 2), None);
    }

    #[test]
    fn small_run_passes_and_mutation_fails() {
        let cfg = SelftestConfig {
            max_d: 6,
            max_delta: 2,
            trials: 3,
            ..SelftestConfig::default()
        };
        let ok = run_selftest(&cfg);
        assert!(ok.passed(), "{:?}", ok.failure);
        assert!(ok.exhaustive_instances > 0 && ok.random_instances > 0 && ok.block_instances > 0);
        let bad = run_selftest(&SelftestConfig { mutate: true, ..cfg });
        assert_eq!(bad.failure.unwrap().check, "recover");
    }

    #[test]
    fn zero_trials_still_checks_exhaustively() {
        let r = run_selftest(&SelftestConfig {
            max_d: 4,
            max_delta: 2,
            trials: 0,
            ..SelftestConfig::default()
        });
        assert!(r.passed());
        assert!(r.exhaustive_instances > 0);
        assert_eq!(r.random_instances, 0);
    }
}
