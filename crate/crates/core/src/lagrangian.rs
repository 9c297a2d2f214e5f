//! Lagrangian relaxation of the cardinality constraint and the randomized
//! exact projection built on top of it.
//!
//! The relaxation drops `|S| = k` and instead charges `λ` per selected
//! index: maximize `Σ_{i∈S} (c_i - λ)` over all `Δ`-separated `S`. It is
//! solved by a linear-time dynamic program. [`lassp`] perturbs the costs
//! so that, with high probability, the relaxation queried just below its
//! largest integer minimizer returns a support of size exactly `k`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use rand::Rng;

use crate::dual::{max_minimizer_by_slope, opt_value_of_dual};
use crate::error::{Error, Result};
use crate::model::{Projection, ProjectionInstance, Support};
use crate::wide::{run_promoting, Exact, Kernel};

/// Which branch wins when taking and skipping an index score equally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Skip,
    Take,
}

/// A relaxation query at the exact rational `λ = lambda_num / lambda_den`.
#[derive(Debug, Clone)]
pub struct LagrangianQuery<'a, T> {
    costs: &'a [T],
    delta: usize,
    lambda_num: T,
    lambda_den: T,
}

impl<'a, T: Exact> LagrangianQuery<'a, T> {
    pub fn new(costs: &'a [T], delta: usize, lambda_num: T, lambda_den: T) -> Result<Self> {
        if delta == 0 {
            return Err(Error::InvalidInput("separation must be at least 1".into()));
        }
        if lambda_den < T::one() {
            return Err(Error::InvalidInput("lambda denominator must be positive".into()));
        }
        Ok(LagrangianQuery {
            costs,
            delta,
            lambda_num,
            lambda_den,
        })
    }

    /// Integer `λ`.
    pub fn integral(costs: &'a [T], delta: usize, lambda: T) -> Result<Self> {
        Self::new(costs, delta, lambda, T::one())
    }

    /// `λ - 1/den`, the query just below an integer `λ`.
    pub fn just_below(costs: &'a [T], delta: usize, lambda: &T, den: usize) -> Result<Self> {
        let den = T::from_usize(den);
        let num = lambda.try_mul(&den)?.try_sub(&T::one())?;
        Self::new(costs, delta, num, den)
    }
}

/// Solution of a relaxation query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianSolution<T> {
    pub support: Support,
    /// `Σ_{i∈S} (lambda_den·c_i - lambda_num)`.
    pub scaled_value: T,
}

/// Exact value of a partial solution: `sum - count·r/den`, where `sum`
/// accumulates `c_i - ⌊λ⌋` and `r/den` is the fractional part of `λ`.
#[derive(Clone)]
struct Score<T> {
    sum: T,
    count: usize,
}

struct Fraction<T> {
    rem: T,
    den: T,
}

impl<T: Exact> Fraction<T> {
    fn compare(&self, a: &Score<T>, b: &Score<T>) -> Result<Ordering> {
        let diff = a.sum.try_sub(&b.sum)?;
        if self.rem.is_zero() {
            return Ok(diff.cmp(&T::zero()));
        }
        // a > b  iff  diff·den > (a.count - b.count)·rem, with 0 ≤ rem < den.
        let (small, flip) = if a.count >= b.count {
            (T::from_usize(a.count - b.count), false)
        } else {
            (T::from_usize(b.count - a.count), true)
        };
        let mut rhs = small.try_mul(&self.rem)?;
        if flip {
            rhs = T::zero().try_sub(&rhs)?;
        }
        match diff.try_mul(&self.den) {
            Ok(lhs) => Ok(lhs.cmp(&rhs)),
            // |diff·den| exceeds the fixed width while |rhs| < d·den fits, so
            // the sign of diff decides.
            Err(Error::Overflow) => Ok(diff.cmp(&T::zero())),
            Err(e) => Err(e),
        }
    }
}

/// Maximizes `Σ_{i∈S} (c_i - λ)` over `Δ`-separated supports by the
/// recurrence `s_i = max(s_{i-1}, s_{i-Δ} + c_i - λ)`.
fn relaxation_support<T: Exact>(q: &LagrangianQuery<'_, T>, tie: TieBreak) -> Result<Support> {
    let (floor, rem) = q.lambda_num.div_mod_floor(&q.lambda_den);
    let frac = Fraction {
        rem,
        den: q.lambda_den.clone(),
    };
    let d = q.costs.len();
    let delta = q.delta;
    let mut best: Vec<Score<T>> = Vec::with_capacity(d + 1);
    best.push(Score {
        sum: T::zero(),
        count: 0,
    });
    let mut take = vec![false; d + 1];
    for i in 1..=d {
        let base = &best[i.saturating_sub(delta)];
        let cand = Score {
            sum: base.sum.try_add(&q.costs[i - 1].try_sub(&floor)?)?,
            count: base.count + 1,
        };
        let ord = frac.compare(&cand, &best[i - 1])?;
        let pick = match tie {
            TieBreak::Skip => ord == Ordering::Greater,
            TieBreak::Take => ord != Ordering::Less,
        };
        if pick {
            take[i] = true;
            best.push(cand);
        } else {
            let prev = best[i - 1].clone();
            best.push(prev);
        }
    }
    let mut chosen = Vec::with_capacity(best[d].count);
    let mut i = d;
    while i >= 1 {
        if take[i] {
            chosen.push(i);
            i = i.saturating_sub(delta);
        } else {
            i -= 1;
        }
    }
    chosen.reverse();
    Ok(Support::from_sorted(chosen))
}

/// Solves the relaxation exactly; ties are broken toward skipping an index.
pub fn proj_lagr<T: Exact>(q: &LagrangianQuery<'_, T>) -> Result<LagrangianSolution<T>> {
    proj_lagr_with_tie_break(q, TieBreak::Skip)
}

pub fn proj_lagr_with_tie_break<T: Exact>(q: &LagrangianQuery<'_, T>, tie: TieBreak) -> Result<LagrangianSolution<T>> {
    let support = relaxation_support(q, tie)?;
    let mut scaled_value = T::zero();
    for &i in support.indices() {
        let term = q.costs[i - 1].try_mul(&q.lambda_den)?.try_sub(&q.lambda_num)?;
        scaled_value = scaled_value.try_add(&term)?;
    }
    Ok(LagrangianSolution { support, scaled_value })
}

/// Settings for [`lassp_with_config`].
#[derive(Debug, Clone, Copy, Default)]
pub struct LasspConfig {
    /// Overrides the default cap of `64·⌈log₂ d⌉` rounds.
    pub max_iterations: Option<usize>,
}

/// Result of the randomized projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LasspOutcome {
    pub projection: Projection,
    /// Number of perturbation rounds until the support had size `k`.
    pub iterations: usize,
}

pub fn default_max_iterations(d: usize) -> usize {
    let log2 = (usize::BITS - d.saturating_sub(1).leading_zeros()) as usize;
    64 * log2.max(1)
}

/// Exact projection by perturbed Lagrangian relaxation (Las Vegas).
pub fn lassp<R: Rng + ?Sized>(inst: &ProjectionInstance, rng: &mut R) -> Result<LasspOutcome> {
    lassp_with_config(inst, rng, LasspConfig::default())
}

pub fn lassp_with_config<R: Rng + ?Sized>(
    inst: &ProjectionInstance,
    rng: &mut R,
    cfg: LasspConfig,
) -> Result<LasspOutcome> {
    inst.ensure_feasible()?;
    if inst.k() == 0 {
        return Ok(LasspOutcome {
            projection: Projection {
                support: Support::empty(),
                value: BigInt::from(0),
            },
            iterations: 0,
        });
    }
    let max_iterations = cfg.max_iterations.unwrap_or_else(|| default_max_iterations(inst.d()));
    let mut kernel = LasspKernel {
        rng,
        k: inst.k(),
        delta: inst.delta(),
        max_iterations,
    };
    run_promoting(inst.costs(), &mut kernel)
}

struct LasspKernel<'r, R: ?Sized> {
    rng: &'r mut R,
    k: usize,
    delta: usize,
    max_iterations: usize,
}

impl<R: Rng + ?Sized> Kernel for LasspKernel<'_, R> {
    type Output = LasspOutcome;

    fn run<T: Exact>(&mut self, costs: &[T]) -> Result<LasspOutcome> {
        let d = costs.len();
        let d128 = d as u128;
        let d_cubed = d128.checked_pow(3).ok_or(Error::Overflow)?;
        let d_fourth = T::from_u128(d128.checked_pow(4).ok_or(Error::Overflow)?)?;
        let scaled: Vec<T> = costs.iter().map(|c| c.try_mul(&d_fourth)).collect::<Result<_>>()?;
        let mut perturbed = scaled.clone();
        for iteration in 1..=self.max_iterations {
            for (p, s) in perturbed.iter_mut().zip(&scaled) {
                let x = T::from_u128(self.rng.random_range(0..d_cubed))?;
                *p = s.try_add(&x)?;
            }
            let lambda = max_minimizer_by_slope(&perturbed, self.delta, self.k)?;
            let query = LagrangianQuery::just_below(&perturbed, self.delta, &lambda, d + 1)?;
            let support = relaxation_support(&query, TieBreak::Skip)?;
            if support.len() == self.k {
                let value = support.value(costs)?.to_bigint();
                return Ok(LasspOutcome {
                    projection: Projection { support, value },
                    iterations: iteration,
                });
            }
        }
        Err(Error::IterationLimitExceeded(self.max_iterations))
    }
}

/// Optimal objective without a support, as the optimum of the dual.
pub fn lassp_value_only(inst: &ProjectionInstance) -> Result<BigInt> {
    inst.ensure_feasible()?;
    struct ValueKernel {
        k: usize,
        delta: usize,
    }
    impl Kernel for ValueKernel {
        type Output = BigInt;

        fn run<T: Exact>(&mut self, costs: &[T]) -> Result<BigInt> {
            Ok(opt_value_of_dual(costs, self.delta, self.k, None)?
                .objective
                .to_bigint())
        }
    }
    run_promoting(
        inst.costs(),
        &mut ValueKernel {
            k: inst.k(),
            delta: inst.delta(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const COUNTER: [i128; 8] = [4, 7, 5, 0, 0, 5, 8, 5];

    fn query(c: &[i128], delta: usize, lambda: i128) -> LagrangianSolution<i128> {
        proj_lagr(&LagrangianQuery::integral(c, delta, lambda).unwrap()).unwrap()
    }

    #[test]
    fn relaxation_examples() {
        let s = query(&COUNTER, 2, 3);
        assert_eq!(s.support.indices(), &[2, 7]);
        assert_eq!(s.scaled_value, 9);

        assert!(query(&COUNTER, 2, 9).support.is_empty());

        let c = [0i128, 3, 0, 1, 2];
        assert_eq!(query(&c, 1, 0).support.indices(), &[2, 4, 5]);
    }

    #[test]
    fn tie_break_polarity() {
        // Taking index 1 scores exactly zero at λ = 1.
        let c = [1i128];
        let skip = proj_lagr_with_tie_break(&LagrangianQuery::integral(&c, 1, 1).unwrap(), TieBreak::Skip).unwrap();
        let take = proj_lagr_with_tie_break(&LagrangianQuery::integral(&c, 1, 1).unwrap(), TieBreak::Take).unwrap();
        assert!(skip.support.is_empty());
        assert_eq!(take.support.indices(), &[1]);
    }

    #[test]
    fn fractional_lambda_is_exact() {
        // λ = 5/2: indices with c_i ≥ 3 pay off.
        let c = [2i128, 3, 2];
        let s = proj_lagr(&LagrangianQuery::new(&c, 1, 5, 2).unwrap()).unwrap();
        assert_eq!(s.support.indices(), &[2]);
        assert_eq!(s.scaled_value, 1);
        assert!(LagrangianQuery::new(&c, 1, 5, 0).is_err());
    }

    #[test]
    fn lassp_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = ProjectionInstance::from_i64(&[4, 7, 5, 0, 0, 5, 8, 5], 3, 2).unwrap();
        let out = lassp(&inst, &mut rng).unwrap();
        assert_eq!(out.projection.value, BigInt::from(17));
        assert_eq!(out.projection.support.len(), 3);

        let inst = ProjectionInstance::from_i64(&[3, 2, 1, 4, 1, 1, 2], 3, 3).unwrap();
        let out = lassp(&inst, &mut rng).unwrap();
        assert_eq!(out.projection.support.indices(), &[1, 4, 7]);

        let inst = ProjectionInstance::from_i64(&[6; 9], 5, 2).unwrap();
        assert_eq!(lassp(&inst, &mut rng).unwrap().projection.value, BigInt::from(30));
    }

    #[test]
    fn lassp_infeasible_and_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = ProjectionInstance::from_i64(&[1; 6], 3, 3).unwrap();
        assert!(matches!(lassp(&inst, &mut rng), Err(Error::Infeasible { .. })));
        let inst = ProjectionInstance::from_i64(&[1; 6], 0, 3).unwrap();
        assert!(lassp(&inst, &mut rng).unwrap().projection.support.is_empty());
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = ProjectionInstance::from_i64(&[4, 7, 5, 0, 0, 5, 8, 5], 3, 2).unwrap();
        let cfg = LasspConfig {
            max_iterations: Some(0),
        };
        assert_eq!(
            lassp_with_config(&inst, &mut rng, cfg),
            Err(Error::IterationLimitExceeded(0))
        );
    }

    #[test]
    fn value_only_examples() {
        let v = |c: &[i64], k, delta| lassp_value_only(&ProjectionInstance::from_i64(c, k, delta).unwrap()).unwrap();
        assert_eq!(v(&[4, 7, 5, 0, 0, 5, 8, 5], 3, 2), BigInt::from(17));
        assert_eq!(v(&[0; 5], 2, 2), BigInt::from(0));
        assert_eq!(v(&[3, 2, 1, 4, 1, 1, 2], 3, 3), BigInt::from(9));
    }

    #[test]
    fn default_cap() {
        assert_eq!(default_max_iterations(1), 64);
        assert_eq!(default_max_iterations(100), 64 * 7);
        assert_eq!(default_max_iterations(128), 64 * 7);
    }
}
