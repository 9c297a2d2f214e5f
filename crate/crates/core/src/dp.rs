//! Dynamic-programming baselines.
//!
//! [`dp_folklore`] fills `DP[j][i]`, the best value of `j` separated picks
//! among the first `i` positions, in `O(dk)` time. [`dp_improved`] indexes
//! states by the slack `s = d - ((k-1)Δ + 1)` consumed so far instead of by
//! position, which needs only `(k+1)(s+1)` states.
//!
//! Both keep two rolling rows of values plus one choice bit per state for
//! backtracking. Ties prefer not taking the current position.

use crate::error::Result;
use crate::model::{ensure_feasible, Projection, ProjectionInstance, Support};
use crate::wide::{run_promoting, Exact, Kernel};

struct ChoiceBits {
    words: Vec<u64>,
    width: usize,
}

impl ChoiceBits {
    fn new(rows: usize, width: usize) -> Self {
        ChoiceBits {
            words: vec![0; (rows * width).div_ceil(64)],
            width,
        }
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize) {
        let bit = row * self.width + col;
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    #[inline]
    fn get(&self, row: usize, col: usize) -> bool {
        let bit = row * self.width + col;
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }
}

/// `O(dk)` dynamic program over `(picks, prefix length)`.
pub fn dp_folklore_costs<T: Exact>(costs: &[T], delta: usize, k: usize) -> Result<(Support, T)> {
    let d = costs.len();
    ensure_feasible(d, k, delta)?;
    if k == 0 {
        return Ok((Support::empty(), T::zero()));
    }
    // prev[i] / cur[i]: best value with j-1 / j picks among positions 1..=i.
    // Entry i is meaningful only for i ≥ (j-1)Δ + 1.
    let mut prev = vec![T::zero(); d + 1];
    let mut cur = vec![T::zero(); d + 1];
    let mut choice = ChoiceBits::new(k, d + 1);
    for j in 1..=k {
        let first = (j - 1) * delta + 1;
        for i in first..=d {
            let back = if i > delta { &prev[i - delta] } else { &prev[0] };
            let take = costs[i - 1].try_add(back)?;
            if i > first && cur[i - 1] >= take {
                cur[i] = cur[i - 1].clone();
            } else {
                cur[i] = take;
                choice.set(j - 1, i);
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let value = prev[d].clone();
    let mut picks = Vec::with_capacity(k);
    let (mut j, mut i) = (k, d);
    while j > 0 {
        if choice.get(j - 1, i) {
            picks.push(i);
            j -= 1;
            i = i.saturating_sub(delta);
        } else {
            i -= 1;
        }
    }
    picks.reverse();
    Ok((Support::from_sorted(picks), value))
}

/// Counters reported by [`dp_improved_with_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpStats {
    pub slack: usize,
    /// Table entries evaluated, including the `j = 0` row.
    pub states: usize,
}

/// Slack-indexed dynamic program.
///
/// `DP[j][i]` is the best value of `j` picks using slack at most `i`; the
/// `j`-th pick with slack `i` sits at `pos(i, j) = (j-1)Δ + 1 + i`.
pub fn dp_improved_costs<T: Exact>(costs: &[T], delta: usize, k: usize) -> Result<(Support, T, DpStats)> {
    let d = costs.len();
    ensure_feasible(d, k, delta)?;
    if k == 0 {
        return Ok((
            Support::empty(),
            T::zero(),
            DpStats {
                slack: d.saturating_sub(1),
                states: d,
            },
        ));
    }
    let slack = d - ((k - 1) * delta + 1);
    let width = slack + 1;
    let pos = |i: usize, j: usize| (j - 1) * delta + 1 + i;
    let mut prev = vec![T::zero(); width];
    let mut cur = vec![T::zero(); width];
    let mut states = width;
    let mut choice = ChoiceBits::new(k, width);
    for j in 1..=k {
        for i in 0..width {
            let take = costs[pos(i, j) - 1].try_add(&prev[i])?;
            if i > 0 && cur[i - 1] >= take {
                cur[i] = cur[i - 1].clone();
            } else {
                cur[i] = take;
                choice.set(j - 1, i);
            }
        }
        states += width;
        std::mem::swap(&mut prev, &mut cur);
    }
    let value = prev[slack].clone();
    let mut picks = Vec::with_capacity(k);
    let (mut j, mut i) = (k, slack);
    while j > 0 {
        if choice.get(j - 1, i) {
            picks.push(pos(i, j));
            j -= 1;
        } else {
            i -= 1;
        }
    }
    picks.reverse();
    Ok((Support::from_sorted(picks), value, DpStats { slack, states }))
}

struct DpKernel {
    k: usize,
    delta: usize,
    improved: bool,
}

impl Kernel for DpKernel {
    type Output = (Projection, Option<DpStats>);

    fn run<T: Exact>(&mut self, costs: &[T]) -> Result<Self::Output> {
        if self.improved {
            let (support, value, stats) = dp_improved_costs(costs, self.delta, self.k)?;
            Ok((
                Projection {
                    support,
                    value: value.to_bigint(),
                },
                Some(stats),
            ))
        } else {
            let (support, value) = dp_folklore_costs(costs, self.delta, self.k)?;
            Ok((
                Projection {
                    support,
                    value: value.to_bigint(),
                },
                None,
            ))
        }
    }
}

/// Exact projection by the `O(dk)` dynamic program.
pub fn dp_folklore(inst: &ProjectionInstance) -> Result<Projection> {
    let mut kernel = DpKernel {
        k: inst.k(),
        delta: inst.delta(),
        improved: false,
    };
    Ok(run_promoting(inst.costs(), &mut kernel)?.0)
}

/// Exact projection by the slack-indexed dynamic program.
pub fn dp_improved(inst: &ProjectionInstance) -> Result<Projection> {
    Ok(dp_improved_with_stats(inst)?.0)
}

pub fn dp_improved_with_stats(inst: &ProjectionInstance) -> Result<(Projection, DpStats)> {
    let mut kernel = DpKernel {
        k: inst.k(),
        delta: inst.delta(),
        improved: true,
    };
    let (p, stats) = run_promoting(inst.costs(), &mut kernel)?;
    Ok((p, stats.expect("improved kernel reports stats")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use num_bigint::BigInt;

    fn inst(c: &[i64], k: usize, delta: usize) -> ProjectionInstance {
        ProjectionInstance::from_i64(c, k, delta).unwrap()
    }

    #[test]
    fn counterexample_value() {
        let i = inst(&[4, 7, 5, 0, 0, 5, 8, 5], 3, 2);
        for p in [dp_folklore(&i).unwrap(), dp_improved(&i).unwrap()] {
            assert_eq!(p.value, BigInt::from(17));
            assert!(p.support.is_in_model(8, 3, 2));
        }
    }

    #[test]
    fn single_pick_is_argmax() {
        let i = inst(&[3, 9, 2, 9, 1], 1, 1);
        assert_eq!(dp_folklore(&i).unwrap().support.indices(), &[2]);
        assert_eq!(dp_improved(&i).unwrap().support.indices(), &[2]);
    }

    #[test]
    fn tight_instance_has_unique_support() {
        let i = inst(&[5, 0, 0, 1, 0, 0, 2], 3, 3);
        let (p, stats) = dp_improved_with_stats(&i).unwrap();
        assert_eq!(p.support.indices(), &[1, 4, 7]);
        assert_eq!(stats.slack, 0);
        assert_eq!(stats.states, 4);
        assert_eq!(dp_folklore(&i).unwrap().support.indices(), &[1, 4, 7]);
    }

    #[test]
    fn spaced_peaks() {
        let i = inst(&[0, 9, 0, 0, 9, 0, 0, 9], 3, 3);
        let p = dp_improved(&i).unwrap();
        assert_eq!(p.support.indices(), &[2, 5, 8]);
        assert_eq!(p.value, BigInt::from(27));
    }

    #[test]
    fn state_count_is_k_plus_one_times_slack_plus_one() {
        let i = inst(&[1; 20], 4, 3);
        let (_, stats) = dp_improved_with_stats(&i).unwrap();
        assert_eq!(stats.slack, 20 - 10);
        assert_eq!(stats.states, 5 * 11);
    }

    #[test]
    fn infeasible_and_empty() {
        assert!(matches!(
            dp_folklore(&inst(&[1; 6], 3, 3)),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            dp_improved(&inst(&[1; 6], 3, 3)),
            Err(Error::Infeasible { .. })
        ));
        assert!(dp_folklore(&inst(&[1; 6], 0, 3)).unwrap().support.is_empty());
    }
}
