//! Deterministic exact projection by divide and conquer over the dual.
//!
//! [`delta_recovery`] decides, with `O(log Δ)` dual optimizations on
//! masked costs, whether some optimum avoids a window of `Δ` indices and
//! otherwise finds one index used by some optimum. [`distribute_sparsity`]
//! splits the remaining budget between the two sides of a masked interval,
//! and [`recover`] recurses on both sides.
//!
//! All three work on strictly positive costs. The public entry points
//! shift costs up so that the smallest one is at least 1, which leaves the
//! set of optimal supports unchanged since `|S| = k` is fixed.

use crate::dual::{active_constraints, dual_greedy, opt_value_of_dual, ActiveSet};
use crate::error::{Error, Result};
use crate::model::{ensure_feasible, max_feasible_sparsity, Projection, ProjectionInstance, Support};
use crate::wide::{max_or_zero, run_promoting, Exact, Kernel};

/// How a sparsity budget is split around the masked interval `[s, e]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparsitySplit {
    pub k_left: usize,
    pub k_right: usize,
    pub s: usize,
    pub e: usize,
}

/// A split together with the active sets it was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityDistribution {
    pub split: SparsitySplit,
    /// Active constraints of an optimal masked dual solution.
    pub active: ActiveSet,
    /// Active constraints one step above its `w0`.
    pub active_above: ActiveSet,
}

/// One node of the recursion, with 1-based global positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoverNode {
    pub depth: usize,
    /// Global index of the first cost of this sub-instance.
    pub start: usize,
    pub len: usize,
    pub k: usize,
    /// Global index fixed at this node, if any.
    pub r: Option<usize>,
    /// Split with `s`, `e` as global indices.
    pub split: SparsitySplit,
}

fn positive_costs<T: Exact>(costs: &[T]) -> Result<Vec<T>> {
    let one = T::one();
    let min = costs.iter().min().cloned().unwrap_or_else(|| one.clone());
    if min >= one {
        return Ok(costs.to_vec());
    }
    let shift = one.try_sub(&min)?;
    costs.iter().map(|c| c.try_add(&shift)).collect()
}

fn dual_opt<T: Exact>(costs: &[T], delta: usize, k: usize) -> Result<T> {
    Ok(opt_value_of_dual(costs, delta, k, None)?.objective)
}

/// `1` on `[lo, hi]` minus `[keep_lo, keep_hi]`, `c_i + 1` elsewhere (1-based, inclusive).
fn mask_window<T: Exact>(
    costs: &[T],
    lo: usize,
    hi: usize,
    keep: Option<(usize, usize)>,
    out: &mut Vec<T>,
) -> Result<()> {
    out.clear();
    let one = T::one();
    for (i, c) in costs.iter().enumerate() {
        let pos = i + 1;
        let masked = (lo..=hi).contains(&pos) && !keep.is_some_and(|(a, b)| (a..=b).contains(&pos));
        out.push(if masked { one.clone() } else { c.try_add(&one)? });
    }
    Ok(())
}

fn delta_recovery_positive<T: Exact>(
    costs: &[T],
    delta: usize,
    k: usize,
    j_s: usize,
    opt: &T,
) -> Result<Option<usize>> {
    let d = costs.len();
    let j_e = (j_s + delta - 1).min(d);
    let target = opt.try_add(&T::from_usize(k))?;
    let mut masked = Vec::with_capacity(d);
    mask_window(costs, j_s, j_e, None, &mut masked)?;
    if dual_opt(&masked, delta, k)? == target {
        return Ok(None);
    }
    let (mut s, mut e) = (j_s, j_e);
    while s < e {
        let mid = (s + e) / 2;
        mask_window(costs, j_s, j_e, Some((s, mid)), &mut masked)?;
        if dual_opt(&masked, delta, k)? == target {
            e = mid;
        } else {
            s = mid + 1;
        }
    }
    Ok(Some(s))
}

/// Either `None` when some optimum selects nothing in
/// `[j_s, min(j_s + Δ - 1, d)]`, or an index of that window selected by
/// some optimum.
pub fn delta_recovery<T: Exact>(costs: &[T], delta: usize, k: usize, j_s: usize) -> Result<Option<usize>> {
    ensure_feasible(costs.len(), k, delta)?;
    if j_s == 0 || j_s > costs.len() {
        return Err(Error::InvalidInput(format!(
            "window start {j_s} outside 1..={}",
            costs.len()
        )));
    }
    let costs = positive_costs(costs)?;
    let opt = dual_opt(&costs, delta, k)?;
    delta_recovery_positive(&costs, delta, k, j_s, &opt)
}

fn distribute_positive<T: Exact>(
    costs: &[T],
    delta: usize,
    k_pp: usize,
    s: usize,
    e: usize,
) -> Result<SparsityDistribution> {
    if k_pp == 0 {
        return Ok(SparsityDistribution {
            split: SparsitySplit {
                k_left: 0,
                k_right: 0,
                s,
                e,
            },
            active: ActiveSet::default(),
            active_above: ActiveSet::default(),
        });
    }
    let cmax = max_or_zero(costs);
    let one = T::one();
    let shift = one.try_add(&cmax.try_mul_usize(k_pp)?.try_add(&one)?)?;
    let masked: Vec<T> = costs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if (s..=e).contains(&(i + 1)) {
                Ok(one.clone())
            } else {
                c.try_add(&shift)
            }
        })
        .collect::<Result<_>>()?;
    let lb = shift.try_sub(&cmax.try_mul_usize(k_pp - 1)?)?;
    let ub = cmax.try_add(&shift)?;
    let w1 = opt_value_of_dual(&masked, delta, k_pp, Some((lb, ub)))?.solution;
    let active = active_constraints(&masked, delta, &w1)?;
    let w2 = dual_greedy(&masked, delta, &w1.w0.try_add(&one)?)?;
    let active_above = active_constraints(&masked, delta, &w2)?;
    let k1_left = active.count_before(s);
    let k2_left = active_above.count_before(s);
    let k2_right = active_above.count_after(e);
    let k_left = k2_left + (k1_left - k2_left).min(k_pp - k2_left - k2_right);
    Ok(SparsityDistribution {
        split: SparsitySplit {
            k_left,
            k_right: k_pp - k_left,
            s,
            e,
        },
        active,
        active_above,
    })
}

fn check_split_preconditions(d: usize, delta: usize, k_pp: usize, s: usize, e: usize) -> Result<()> {
    if s == 0 || s > e || e > d {
        return Err(Error::InvalidInput(format!("mask [{s}, {e}] is not inside 1..={d}")));
    }
    let fits = max_feasible_sparsity(s - 1, delta) + max_feasible_sparsity(d - e, delta) >= k_pp;
    let wide = e - s + 1 >= delta || e == d;
    if !fits || !wide {
        return Err(Error::Infeasible { d, k: k_pp, delta });
    }
    Ok(())
}

/// Splits `k_pp` picks between `[1, s)` and `(e, d]` so that combining
/// optima of the two sides gives an optimum that avoids `[s, e]`.
pub fn distribute_sparsity<T: Exact>(
    costs: &[T],
    delta: usize,
    k_pp: usize,
    s: usize,
    e: usize,
) -> Result<SparsitySplit> {
    Ok(distribute_sparsity_with_actives(costs, delta, k_pp, s, e)?.split)
}

pub fn distribute_sparsity_with_actives<T: Exact>(
    costs: &[T],
    delta: usize,
    k_pp: usize,
    s: usize,
    e: usize,
) -> Result<SparsityDistribution> {
    if delta == 0 {
        return Err(Error::InvalidInput("separation must be at least 1".into()));
    }
    check_split_preconditions(costs.len(), delta, k_pp, s, e)?;
    distribute_positive(&positive_costs(costs)?, delta, k_pp, s, e)
}

struct Recursion<'t> {
    delta: usize,
    picks: Vec<usize>,
    trace: Option<&'t mut Vec<RecoverNode>>,
}

impl Recursion<'_> {
    /// Solves `costs` (global positions `start..start + len`) with `k` picks.
    fn solve<T: Exact>(&mut self, costs: &[T], start: usize, k: usize, depth: usize) -> Result<()> {
        let d = costs.len();
        let delta = self.delta;
        if k == 0 {
            return Ok(());
        }
        if max_feasible_sparsity(d, delta) < k {
            debug_assert!(
                false,
                "recursion produced an infeasible side: d={d}, k={k}, delta={delta}"
            );
            return Err(Error::Infeasible { d, k, delta });
        }
        let opt = dual_opt(costs, delta, k)?;
        let mid = d.div_ceil(2).max(1);
        let r = delta_recovery_positive(costs, delta, k, mid, &opt)?;
        let (s, e, k_pp) = match r {
            None => (mid, (mid + delta - 1).min(d), k),
            Some(r) => ((r + 1).saturating_sub(delta).max(1), (r + delta - 1).min(d), k - 1),
        };
        let split = distribute_positive(costs, delta, k_pp, s, e)?.split;
        if let Some(trace) = self.trace.as_deref_mut() {
            let global = |i: usize| start + i - 1;
            trace.push(RecoverNode {
                depth,
                start,
                len: d,
                k,
                r: r.map(global),
                split: SparsitySplit {
                    s: global(s),
                    e: global(e),
                    ..split
                },
            });
        }
        self.solve(&costs[..s - 1], start, split.k_left, depth + 1)?;
        if let Some(r) = r {
            self.picks.push(start + r - 1);
        }
        self.solve(&costs[e..], start + e, split.k_right, depth + 1)
    }
}

fn recover_support<T: Exact>(
    costs: &[T],
    delta: usize,
    k: usize,
    trace: Option<&mut Vec<RecoverNode>>,
) -> Result<Support> {
    if delta == 0 {
        return Err(Error::InvalidInput("separation must be at least 1".into()));
    }
    ensure_feasible(costs.len(), k, delta)?;
    let positive = positive_costs(costs)?;
    let mut rec = Recursion {
        delta,
        picks: Vec::with_capacity(k),
        trace,
    };
    rec.solve(&positive, 1, k, 0)?;
    Ok(Support::from_sorted(rec.picks))
}

/// Exact projection on raw costs; returns the support and its value.
pub fn recover_costs<T: Exact>(costs: &[T], delta: usize, k: usize) -> Result<(Support, T)> {
    let support = recover_support(costs, delta, k, None)?;
    let value = support.value(costs)?;
    Ok((support, value))
}

struct RecoverKernel {
    k: usize,
    delta: usize,
    trace: bool,
}

impl Kernel for RecoverKernel {
    type Output = (Projection, Vec<RecoverNode>);

    fn run<T: Exact>(&mut self, costs: &[T]) -> Result<Self::Output> {
        let mut trace = Vec::new();
        let support = recover_support(costs, self.delta, self.k, self.trace.then_some(&mut trace))?;
        let value = support.value(costs)?.to_bigint();
        Ok((Projection { support, value }, trace))
    }
}

/// Deterministic exact projection by divide and conquer.
pub fn recover(inst: &ProjectionInstance) -> Result<Projection> {
    let mut kernel = RecoverKernel {
        k: inst.k(),
        delta: inst.delta(),
        trace: false,
    };
    Ok(run_promoting(inst.costs(), &mut kernel)?.0)
}

/// [`recover`] plus every recursion node in visiting order.
pub fn recover_with_trace(inst: &ProjectionInstance) -> Result<(Projection, Vec<RecoverNode>)> {
    let mut kernel = RecoverKernel {
        k: inst.k(),
        delta: inst.delta(),
        trace: true,
    };
    run_promoting(inst.costs(), &mut kernel)
}
