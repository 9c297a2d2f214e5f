//! The dual LP of the separated sparsity relaxation.
//!
//! For costs `c`, sparsity `k` and separation `Δ` the dual is
//!
//! ```text
//! minimize   w0·k + Σ_{i≥1} w_i
//! subject to w0 + Σ_{j ≤ i ≤ j+Δ-1} w_j ≥ c_i   for every i
//!            w_i ≥ 0                             for i ≥ 1
//! ```
//!
//! Fixing `w0 = λ` leaves a covering problem solved exactly by a single
//! lazy left-to-right pass ([`dual_greedy`]). Its value is convex in `λ`,
//! so the full dual is minimized by ternary search over integer `λ`
//! ([`opt_value_of_dual`]).

use crate::error::{Error, Result};
use crate::model::ensure_feasible;
use crate::wide::{max_or_zero, Exact};

/// A feasible dual vector with `w0` fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSolution<T> {
    pub w0: T,
    /// `w[i - 1]` holds `w_i`.
    pub w: Vec<T>,
    /// `Σ_{i≥1} w_i`.
    pub weight_sum: T,
}

impl<T: Exact> DualSolution<T> {
    /// Dual objective `w0·k + Σ w_i`.
    pub fn objective(&self, k: usize) -> Result<T> {
        self.w0.try_mul_usize(k)?.try_add(&self.weight_sum)
    }

    /// Checks every dual constraint in O(d).
    pub fn is_feasible_for(&self, costs: &[T], delta: usize) -> Result<bool> {
        if self.w.len() != costs.len() || self.w.iter().any(|w| w.is_negative()) {
            return Ok(false);
        }
        let mut window = T::zero();
        for (i, c) in costs.iter().enumerate() {
            if i >= delta {
                window = window.try_sub(&self.w[i - delta])?;
            }
            window = window.try_add(&self.w[i])?;
            if self.w0.try_add(&window)? < *c {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Optimal dual solution together with its objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualOptimum<T> {
    pub solution: DualSolution<T>,
    pub objective: T,
}

/// Sorted 1-based indices of active constraints.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ActiveSet(Vec<usize>);

impl ActiveSet {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of members strictly left of `s` (1-based).
    pub fn count_before(&self, s: usize) -> usize {
        self.0.partition_point(|&i| i < s)
    }

    /// Number of members strictly right of `e` (1-based).
    pub fn count_after(&self, e: usize) -> usize {
        self.0.len() - self.0.partition_point(|&i| i <= e)
    }
}

/// Writes the lazy greedy solution for `w0 = lambda` into `w` and returns `Σ w_i`.
fn greedy_into<T: Exact>(costs: &[T], delta: usize, lambda: &T, w: &mut Vec<T>) -> Result<T> {
    w.clear();
    w.reserve(costs.len());
    let mut window = T::zero();
    let mut total = T::zero();
    for (i, c) in costs.iter().enumerate() {
        if i >= delta {
            window = window.try_sub(&w[i - delta])?;
        }
        let diff = c.try_sub(&lambda.try_add(&window)?)?;
        if diff > T::zero() {
            window = window.try_add(&diff)?;
            total = total.try_add(&diff)?;
            w.push(diff);
        } else {
            w.push(T::zero());
        }
    }
    Ok(total)
}

/// Lazy left-to-right solution of the dual with `w0` fixed to `lambda`.
///
/// Each violated constraint is made tight by raising its own variable,
/// which covers it and the next `Δ - 1` constraints.
pub fn dual_greedy<T: Exact>(costs: &[T], delta: usize, lambda: &T) -> Result<DualSolution<T>> {
    check_delta(delta)?;
    let mut w = Vec::new();
    let weight_sum = greedy_into(costs, delta, lambda, &mut w)?;
    Ok(DualSolution {
        w0: lambda.clone(),
        w,
        weight_sum,
    })
}

/// Tight constraints of `sol`, scanned left to right, keeping an index only
/// when the previous kept one is at least `Δ` behind it.
pub fn active_constraints<T: Exact>(costs: &[T], delta: usize, sol: &DualSolution<T>) -> Result<ActiveSet> {
    check_delta(delta)?;
    if sol.w.len() != costs.len() {
        return Err(Error::InvalidInput("dual solution length does not match costs".into()));
    }
    let mut active = Vec::new();
    let mut window = T::zero();
    let mut last_active: Option<usize> = None;
    for (i, c) in costs.iter().enumerate() {
        if i >= delta {
            window = window.try_sub(&sol.w[i - delta])?;
        }
        window = window.try_add(&sol.w[i])?;
        let clear = last_active.is_none_or(|l| l + delta <= i);
        if clear && *c == sol.w0.try_add(&window)? {
            active.push(i + 1);
            last_active = Some(i);
        }
    }
    Ok(ActiveSet(active))
}

/// Reusable evaluator of `val(D_λ) = λ·k + Σ w_i` over many `λ`.
pub struct DualEvaluator<'a, T> {
    costs: &'a [T],
    delta: usize,
    k: usize,
    scratch: Vec<T>,
    evaluations: usize,
}

impl<'a, T: Exact> DualEvaluator<'a, T> {
    pub fn new(costs: &'a [T], delta: usize, k: usize) -> Result<Self> {
        check_delta(delta)?;
        Ok(DualEvaluator {
            costs,
            delta,
            k,
            scratch: Vec::with_capacity(costs.len()),
            evaluations: 0,
        })
    }

    pub fn value(&mut self, lambda: &T) -> Result<T> {
        self.evaluations += 1;
        let sum = greedy_into(self.costs, self.delta, lambda, &mut self.scratch)?;
        lambda.try_mul_usize(self.k)?.try_add(&sum)
    }

    pub fn solution(&mut self, lambda: &T) -> Result<(DualSolution<T>, T)> {
        self.evaluations += 1;
        let sol = dual_greedy(self.costs, self.delta, lambda)?;
        let obj = sol.objective(self.k)?;
        Ok((sol, obj))
    }

    /// Number of greedy passes run so far.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }
}

/// `val(D_λ)` for a single `λ`.
pub fn dual_value<T: Exact>(costs: &[T], delta: usize, k: usize, lambda: &T) -> Result<T> {
    DualEvaluator::new(costs, delta, k)?.value(lambda)
}

/// Default search interval for `w0`: `[-(k-1)·c_max, c_max]`.
pub fn default_lambda_bounds<T: Exact>(costs: &[T], k: usize) -> Result<(T, T)> {
    let cmax = max_or_zero(costs);
    let lb = T::zero().try_sub(&cmax.try_mul_usize(k.saturating_sub(1))?)?;
    Ok((lb, cmax))
}

/// Minimizes the dual over integer `w0 ∈ [lb, ub]` by ternary search.
///
/// Without explicit bounds the interval contains an optimal `w0`, so the
/// returned objective is the optimum of the projection problem.
pub fn opt_value_of_dual<T: Exact>(
    costs: &[T],
    delta: usize,
    k: usize,
    bounds: Option<(T, T)>,
) -> Result<DualOptimum<T>> {
    check_delta(delta)?;
    ensure_feasible(costs.len(), k, delta)?;
    let (lb, ub) = match bounds {
        Some(b) => b,
        None => default_lambda_bounds(costs, k)?,
    };
    if lb > ub {
        return Err(Error::InvalidInput("empty search interval for w0".into()));
    }
    let mut eval = DualEvaluator::new(costs, delta, k)?;
    let (w0, objective) = ternary_search(&mut eval, lb, ub)?;
    let (solution, check) = eval.solution(&w0)?;
    debug_assert_eq!(check, objective);
    Ok(DualOptimum { solution, objective })
}

/// Ternary search for a minimizer of the convex `val(D_λ)` on `[lb, ub]`;
/// returns the minimizer and its value.
pub(crate) fn ternary_search<T: Exact>(eval: &mut DualEvaluator<'_, T>, lb: T, ub: T) -> Result<(T, T)> {
    let three = T::from_i64(3);
    let one = T::one();
    let (mut s, mut e) = (lb, ub);
    let mut best: Option<(T, T)> = None;
    while s <= e {
        let (third, _) = e.try_sub(&s)?.div_mod_floor(&three);
        let l = s.try_add(&third)?;
        let r = e.try_sub(&third)?;
        let fl = eval.value(&l)?;
        let fr = if r == l { fl.clone() } else { eval.value(&r)? };
        if fl <= fr {
            e = r.try_sub(&one)?;
            best = Some((l, fl));
        } else {
            s = l.try_add(&one)?;
            best = Some((r, fr));
        }
    }
    Ok(best.expect("non-empty interval evaluates at least once"))
}

/// The largest integer minimizer of `val(D_λ)`.
///
/// Minimizers form an interval by convexity; its right end is found by
/// binary search from the ternary-search optimum up to `c_max`.
pub fn max_integer_minimizer_lambda<T: Exact>(costs: &[T], delta: usize, k: usize) -> Result<T> {
    check_delta(delta)?;
    ensure_feasible(costs.len(), k, delta)?;
    if k == 0 {
        return Err(Error::InvalidInput("sparsity must be positive".into()));
    }
    let (lb, ub) = default_lambda_bounds(costs, k)?;
    let mut eval = DualEvaluator::new(costs, delta, k)?;
    let (start, min) = ternary_search(&mut eval, lb, ub.clone())?;
    plateau_right_end(&mut eval, start, ub, &min)
}

/// Number of active constraints of `dual_greedy(costs, Δ, λ)`, computed in
/// one pass that keeps only the last `Δ` dual variables.
///
/// Constraint `i` is tight iff the greedy deficit `c_i - (λ + window)` is
/// non-negative, so tightness and activity are decided while `w` is built.
pub fn active_count<T: Exact>(costs: &[T], delta: usize, lambda: &T) -> Result<usize> {
    check_delta(delta)?;
    let mut ring = vec![T::zero(); delta];
    active_count_with(costs, delta, lambda, &mut ring)
}

fn active_count_with<T: Exact>(costs: &[T], delta: usize, lambda: &T, ring: &mut [T]) -> Result<usize> {
    let zero = T::zero();
    ring.iter_mut().for_each(|w| *w = T::zero());
    let mut window = T::zero();
    let mut count = 0;
    let mut next_free = 0usize;
    let mut slot = 0;
    for (i, c) in costs.iter().enumerate() {
        window = window.try_sub(&ring[slot])?;
        let diff = c.try_sub(&lambda.try_add(&window)?)?;
        if diff >= zero {
            if i >= next_free {
                count += 1;
                next_free = i + delta;
            }
            window = window.try_add(&diff)?;
            ring[slot] = diff;
        } else {
            ring[slot] = T::zero();
        }
        slot += 1;
        if slot == delta {
            slot = 0;
        }
    }
    Ok(count)
}

/// The largest integer minimizer of `val(D_λ)`, by bisection on the slope.
///
/// `val(D_{λ+1}) - val(D_λ) = k - |active(λ+1)|`, and `|active|` is
/// non-increasing in `λ`, so the largest minimizer is one less than the
/// smallest `μ` with fewer than `k` active constraints. Agrees with
/// [`max_integer_minimizer_lambda`] using a single pass per probe.
pub fn max_minimizer_by_slope<T: Exact>(costs: &[T], delta: usize, k: usize) -> Result<T> {
    check_delta(delta)?;
    ensure_feasible(costs.len(), k, delta)?;
    if k == 0 {
        return Err(Error::InvalidInput("sparsity must be positive".into()));
    }
    let (lb, ub) = default_lambda_bounds(costs, k)?;
    let one = T::one();
    let two = T::from_i64(2);
    let mut ring = vec![T::zero(); delta];
    // |active(ub + 1)| = 0 < k, and |active(lb)| ≥ k.
    let mut lo = lb.try_add(&one)?;
    let mut hi = ub.try_add(&one)?;
    while lo < hi {
        let (half, _) = hi.try_sub(&lo)?.div_mod_floor(&two);
        let mid = lo.try_add(&half)?;
        if active_count_with(costs, delta, &mid, &mut ring)? < k {
            hi = mid;
        } else {
            lo = mid.try_add(&one)?;
        }
    }
    lo.try_sub(&one)
}

fn plateau_right_end<T: Exact>(eval: &mut DualEvaluator<'_, T>, mut lo: T, mut hi: T, min: &T) -> Result<T> {
    let two = T::from_i64(2);
    let one = T::one();
    while lo < hi {
        let (half, _) = hi.try_sub(&lo)?.try_add(&one)?.div_mod_floor(&two);
        let mid = lo.try_add(&half)?;
        if eval.value(&mid)? == *min {
            lo = mid;
        } else {
            hi = mid.try_sub(&one)?;
        }
    }
    Ok(lo)
}

fn check_delta(delta: usize) -> Result<()> {
    if delta == 0 {
        Err(Error::InvalidInput("separation must be at least 1".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GREEDY_EXAMPLE: [i128; 10] = [4, 6, 4, 3, 3, 5, 6, 2, 2, 2];
    const COUNTER: [i128; 8] = [4, 7, 5, 0, 0, 5, 8, 5];

    #[test]
    fn greedy_active_set_example() {
        let sol = dual_greedy(&GREEDY_EXAMPLE, 3, &2).unwrap();
        assert_eq!(sol.w0, 2);
        assert_eq!(sol.w, vec![2, 2, 0, 0, 1, 2, 1, 0, 0, 0]);
        assert_eq!(sol.weight_sum, 8);
        assert!(sol.is_feasible_for(&GREEDY_EXAMPLE, 3).unwrap());
    }

    #[test]
    fn greedy_trivial_cases() {
        let sol = dual_greedy(&GREEDY_EXAMPLE, 3, &6).unwrap();
        assert!(sol.w.iter().all(|w| *w == 0));
        let sol = dual_greedy(&[1i128], 1, &0).unwrap();
        assert_eq!(sol.w, vec![1]);
    }

    #[test]
    fn active_examples() {
        let sol = dual_greedy(&GREEDY_EXAMPLE, 3, &2).unwrap();
        assert_eq!(
            active_constraints(&GREEDY_EXAMPLE, 3, &sol).unwrap().indices(),
            &[1, 5, 10]
        );

        let sol = dual_greedy(&GREEDY_EXAMPLE, 3, &7).unwrap();
        assert!(active_constraints(&GREEDY_EXAMPLE, 3, &sol).unwrap().is_empty());

        let c = [3i128, 3, 3];
        let sol = dual_greedy(&c, 1, &0).unwrap();
        assert_eq!(active_constraints(&c, 1, &sol).unwrap().indices(), &[1, 2, 3]);
    }

    #[test]
    fn active_set_split_counts() {
        let a = ActiveSet(vec![1, 6, 8]);
        assert_eq!(a.count_before(3), 1);
        assert_eq!(a.count_after(5), 2);
        assert_eq!(a.count_after(8), 0);
    }

    #[test]
    fn optimum_examples() {
        assert_eq!(opt_value_of_dual(&COUNTER, 2, 3, None).unwrap().objective, 17);
        assert_eq!(opt_value_of_dual(&[5i128], 1, 1, None).unwrap().objective, 5);
        let c = [3i128, 1, 4, 1, 5];
        assert_eq!(opt_value_of_dual(&c, 1, 5, None).unwrap().objective, 14);
        assert_eq!(opt_value_of_dual(&c, 1, 0, None).unwrap().objective, 0);
    }

    #[test]
    fn optimum_rejects_infeasible() {
        assert!(matches!(
            opt_value_of_dual(&[1i128; 6], 3, 3, None),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn max_minimizer_examples() {
        assert_eq!(max_integer_minimizer_lambda(&COUNTER, 2, 3).unwrap(), 2);
        assert_eq!(max_integer_minimizer_lambda(&[4i128; 5], 1, 5).unwrap(), 4);
    }

    #[test]
    fn slope_bisection_examples() {
        assert_eq!(max_minimizer_by_slope(&COUNTER, 2, 3).unwrap(), 2);
        assert_eq!(max_minimizer_by_slope(&[4i128; 5], 1, 5).unwrap(), 4);
        assert_eq!(max_minimizer_by_slope(&[5i128], 1, 1).unwrap(), 5);
    }

    #[test]
    fn active_count_matches_active_set() {
        for lambda in -10i128..=8 {
            let sol = dual_greedy(&GREEDY_EXAMPLE, 3, &lambda).unwrap();
            let set = active_constraints(&GREEDY_EXAMPLE, 3, &sol).unwrap();
            assert_eq!(
                active_count(&GREEDY_EXAMPLE, 3, &lambda).unwrap(),
                set.len(),
                "lambda={lambda}"
            );
        }
    }

    #[test]
    fn max_minimizer_matches_scan() {
        let mut best = None;
        for lambda in -16i128..=8 {
            let v = dual_value(&COUNTER, 2, 3, &lambda).unwrap();
            match best {
                Some((bv, _)) if v > bv => {}
                Some((bv, _)) if v == bv => best = Some((bv, lambda)),
                _ => best = Some((v, lambda)),
            }
        }
        assert_eq!(best, Some((17, 2)));
    }
}
