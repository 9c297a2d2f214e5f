//! Problem representation shared by every projection engine: instances,
//! supports, quantization of real signals, the exhaustive oracle, support
//! counting and uniform support sampling.

use std::fmt;

use num_bigint::BigInt;
use num_traits::FromPrimitive;
use rand::Rng;

use crate::error::{Error, Result};
use crate::wide::{Exact, WideInt};

/// Default bit precision for quantized costs.
pub const DEFAULT_GAMMA: u32 = 32;

/// Default dimension cap for [`brute_force_project`].
pub const BRUTE_FORCE_CAP: usize = 24;

/// Whether a `delta`-separated support of size `k` fits in `[1, d]`.
pub fn is_feasible(d: usize, k: usize, delta: usize) -> bool {
    k == 0 || (d >= 1 && delta >= 1 && (k - 1).saturating_mul(delta).saturating_add(1) <= d)
}

/// Largest `k` for which a `delta`-separated support of size `k` exists.
pub fn max_feasible_sparsity(d: usize, delta: usize) -> usize {
    if d == 0 {
        0
    } else {
        (d - 1) / delta.max(1) + 1
    }
}

pub(crate) fn ensure_feasible(d: usize, k: usize, delta: usize) -> Result<()> {
    if is_feasible(d, k, delta) {
        Ok(())
    } else {
        Err(Error::Infeasible { d, k, delta })
    }
}

/// A sorted set of 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Support(Vec<usize>);

impl Support {
    /// Builds a support from strictly increasing 1-based indices.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.first() == Some(&0) {
            return Err(Error::InvalidInput("support indices are 1-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "support indices must be strictly increasing".into(),
            ));
        }
        Ok(Support(indices))
    }

    pub fn empty() -> Self {
        Support(Vec::new())
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.first() != Some(&0));
        Support(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    /// Minimum gap between consecutive indices; `None` for fewer than two.
    pub fn separation(&self) -> Option<usize> {
        self.0.windows(2).map(|w| w[1] - w[0]).min()
    }

    pub fn is_separated(&self, delta: usize) -> bool {
        self.separation().is_none_or(|s| s >= delta)
    }

    /// Membership in the model of `delta`-separated `k`-sparse supports of `[1, d]`.
    pub fn is_in_model(&self, d: usize, k: usize, delta: usize) -> bool {
        self.len() == k && self.is_separated(delta) && self.0.last().is_none_or(|&i| i <= d)
    }

    /// `Σ_{i ∈ S} costs[i - 1]`.
    pub fn value<T: Exact>(&self, costs: &[T]) -> Result<T> {
        let mut acc = T::zero();
        for &i in &self.0 {
            let c = costs
                .get(i - 1)
                .ok_or_else(|| Error::InvalidInput(format!("index {i} out of range for d = {}", costs.len())))?;
            acc = acc.try_add(c)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// A support together with its objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub support: Support,
    pub value: WideInt,
}

/// Integer costs `c`, sparsity `k` and separation `delta`.
///
/// Costs are shifted on construction so the minimum is non-negative; the
/// shift adds the same constant to every `k`-support and leaves the set of
/// maximizers unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionInstance {
    costs: Vec<WideInt>,
    k: usize,
    delta: usize,
}

impl ProjectionInstance {
    pub fn new(mut costs: Vec<WideInt>, k: usize, delta: usize) -> Result<Self> {
        if costs.is_empty() {
            return Err(Error::InvalidInput("cost vector must be non-empty".into()));
        }
        if delta == 0 {
            return Err(Error::InvalidInput("separation must be at least 1".into()));
        }
        let min = costs.iter().min().cloned().unwrap_or_default();
        if min < BigInt::from(0) {
            for c in &mut costs {
                *c -= &min;
            }
        }
        Ok(ProjectionInstance { costs, k, delta })
    }

    pub fn from_i64(costs: &[i64], k: usize, delta: usize) -> Result<Self> {
        Self::new(costs.iter().map(|&c| BigInt::from(c)).collect(), k, delta)
    }

    /// Quantizes a real signal (see [`quantize_signal`]) and wraps it.
    pub fn from_signal(x: &[f64], k: usize, delta: usize, cfg: QuantizationConfig) -> Result<Self> {
        Self::new(quantize_signal(x, cfg)?, k, delta)
    }

    pub fn costs(&self) -> &[WideInt] {
        &self.costs
    }

    pub fn d(&self) -> usize {
        self.costs.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn is_feasible(&self) -> bool {
        is_feasible(self.d(), self.k, self.delta)
    }

    pub fn ensure_feasible(&self) -> Result<()> {
        ensure_feasible(self.d(), self.k, self.delta)
    }

    /// The same costs and separation with a different sparsity.
    pub fn with_k(&self, k: usize) -> Self {
        ProjectionInstance {
            costs: self.costs.clone(),
            k,
            delta: self.delta,
        }
    }
}

/// Bit precision of quantized costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizationConfig {
    gamma: u32,
}

impl QuantizationConfig {
    pub fn new(gamma: u32) -> Result<Self> {
        if gamma == 0 {
            return Err(Error::InvalidInput("gamma must be at least 1".into()));
        }
        Ok(QuantizationConfig { gamma })
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }
}

impl Default for QuantizationConfig {
    fn default() -> Self {
        QuantizationConfig { gamma: DEFAULT_GAMMA }
    }
}

/// Maps a real signal to integer costs `round(x_i² · 2^γ / max_j x_j²)`.
///
/// The all-zero signal maps to all-zero costs.
pub fn quantize_signal(x: &[f64], cfg: QuantizationConfig) -> Result<Vec<WideInt>> {
    if x.is_empty() {
        return Err(Error::InvalidInput("signal must be non-empty".into()));
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite entry at index {}", i + 1)));
    }
    let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return Ok(vec![BigInt::from(0); x.len()]);
    }
    let scale = 2f64.powi(cfg.gamma as i32);
    x.iter()
        .map(|v| {
            let ratio = v.abs() / peak;
            let q = (ratio * ratio * scale).round();
            BigInt::from_f64(q).ok_or_else(|| Error::InvalidInput(format!("gamma {} too large", cfg.gamma)))
        })
        .collect()
}

/// Lexicographic iterator over every `delta`-separated `k`-subset of `[1, d]`.
#[derive(Debug, Clone)]
pub struct SeparatedSupports {
    d: usize,
    delta: usize,
    current: Option<Vec<usize>>,
}

impl SeparatedSupports {
    pub fn new(d: usize, k: usize, delta: usize) -> Self {
        let delta = delta.max(1);
        let current = is_feasible(d, k, delta).then(|| (0..k).map(|j| 1 + j * delta).collect());
        SeparatedSupports { d, delta, current }
    }
}

impl Iterator for SeparatedSupports {
    type Item = Support;

    fn next(&mut self) -> Option<Support> {
        let current = self.current.take()?;
        let out = Support::from_sorted(current.clone());
        let k = current.len();
        let mut next = current;
        // Rightmost position that can still move one step right.
        let movable = (0..k).rev().find(|&j| next[j] + 1 + (k - 1 - j) * self.delta <= self.d);
        if let Some(j) = movable {
            next[j] += 1;
            for t in j + 1..k {
                next[t] = next[t - 1] + self.delta;
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Exhaustive oracle with the default dimension cap.
pub fn brute_force_project(inst: &ProjectionInstance) -> Result<Projection> {
    brute_force_project_with_cap(inst, BRUTE_FORCE_CAP)
}

/// Enumerates the whole model and returns the lexicographically smallest maximizer.
pub fn brute_force_project_with_cap(inst: &ProjectionInstance, cap: usize) -> Result<Projection> {
    inst.ensure_feasible()?;
    if inst.d() > cap {
        return Err(Error::InstanceTooLarge { d: inst.d(), cap });
    }
    let costs = inst.costs();
    let mut best: Option<Projection> = None;
    for support in SeparatedSupports::new(inst.d(), inst.k(), inst.delta()) {
        let value = support.value(costs)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(Projection { support, value });
        }
    }
    Ok(best.expect("a feasible instance has at least one support"))
}

/// Number of `k` blocks of length `b` whose start positions are pairwise at
/// least `delta + b - 1` apart within `[1, d]`. For `b = 1` this is the size
/// of the separated sparsity model, `C(d - (k-1)·delta - 1 + k, k)`.
pub fn count_supports(d: usize, k: usize, delta: usize, b: usize) -> WideInt {
    if k == 0 {
        return BigInt::from(1);
    }
    if b == 0 || delta == 0 || b > d {
        return BigInt::from(0);
    }
    // Starts live in [1, d - b + 1] with gaps ≥ delta + b - 1; removing the
    // mandatory (delta + b - 2) per gap leaves an unconstrained k-subset.
    let positions = (d - b + 1) as i128;
    let free = positions - (k as i128 - 1) * (delta + b - 2) as i128;
    if free < k as i128 {
        return BigInt::from(0);
    }
    binomial(free as u128, k as u128)
}

fn binomial(n: u128, k: u128) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Draws a uniformly random element of the separated sparsity model.
///
/// The slack `d - (k-1)·delta - 1` is split into `k + 1` non-negative gaps
/// by a uniform stars-and-bars composition, which is in bijection with the
/// supports.
pub fn sample_support<R: Rng + ?Sized>(d: usize, k: usize, delta: usize, rng: &mut R) -> Result<Support> {
    if delta == 0 {
        return Err(Error::InvalidInput("separation must be at least 1".into()));
    }
    ensure_feasible(d, k, delta)?;
    if k == 0 {
        return Ok(Support::empty());
    }
    let slack = d - (k - 1) * delta - 1;
    let mut bars = rand::seq::index::sample(rng, slack + k, k).into_vec();
    bars.sort_unstable();
    let indices = bars.iter().enumerate().map(|(j, &b)| b + 1 + j * (delta - 1)).collect();
    Ok(Support::from_sorted(indices))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wide::wide_vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inst(c: &[i64], k: usize, delta: usize) -> ProjectionInstance {
        ProjectionInstance::from_i64(c, k, delta).unwrap()
    }

    #[test]
    fn quantize_examples() {
        let cfg = |g| QuantizationConfig::new(g).unwrap();
        assert_eq!(
            quantize_signal(&[0.0, 0.0, 0.0], cfg(8)).unwrap(),
            wide_vec(&[0i64, 0, 0])
        );
        assert_eq!(quantize_signal(&[1.0, -1.0], cfg(4)).unwrap(), wide_vec(&[16i64, 16]));
        assert_eq!(
            quantize_signal(&[2.0, 1.0, 0.0], cfg(2)).unwrap(),
            wide_vec(&[4i64, 1, 0])
        );
    }

    #[test]
    fn quantize_rejects_bad_input() {
        let cfg = QuantizationConfig::default();
        assert!(matches!(
            quantize_signal(&[1.0, f64::NAN], cfg),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            quantize_signal(&[f64::INFINITY], cfg),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(quantize_signal(&[], cfg), Err(Error::InvalidInput(_))));
        assert!(QuantizationConfig::new(0).is_err());
    }

    #[test]
    fn negative_costs_are_shifted() {
        let i = inst(&[-3, 0, 2], 1, 1);
        assert_eq!(i.costs(), &wide_vec(&[0i64, 3, 5])[..]);
    }

    #[test]
    fn feasibility_boundary() {
        assert!(is_feasible(7, 3, 3));
        assert!(!is_feasible(6, 3, 3));
        assert!(is_feasible(1, 0, 5));
        assert_eq!(max_feasible_sparsity(7, 3), 3);
        assert_eq!(max_feasible_sparsity(9, 3), 3);
        assert_eq!(max_feasible_sparsity(10, 3), 4);
    }

    #[test]
    fn brute_force_examples() {
        let p = brute_force_project(&inst(&[4, 7, 5, 0, 0, 5, 8, 5], 3, 2)).unwrap();
        assert_eq!(p.value, BigInt::from(17));
        assert!(p.support.is_in_model(8, 3, 2));

        let p = brute_force_project(&inst(&[5], 1, 1)).unwrap();
        assert_eq!(p.support.indices(), &[1]);
        assert_eq!(p.value, BigInt::from(5));

        let p = brute_force_project(&inst(&[1, 1, 1], 0, 1)).unwrap();
        assert!(p.support.is_empty());
        assert_eq!(p.value, BigInt::from(0));
    }

    #[test]
    fn brute_force_prefers_lexicographically_smallest() {
        let p = brute_force_project(&inst(&[1, 1, 1, 1], 2, 2)).unwrap();
        assert_eq!(p.support.indices(), &[1, 3]);
    }

    #[test]
    fn brute_force_errors() {
        assert!(matches!(
            brute_force_project(&inst(&[1; 6], 3, 3)),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            brute_force_project(&inst(&[1; 25], 2, 2)),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_supports(7, 3, 3, 1), BigInt::from(1));
        assert_eq!(count_supports(8, 3, 3, 1), BigInt::from(4));
        assert_eq!(count_supports(5, 0, 2, 1), BigInt::from(1));
        assert_eq!(count_supports(5, 3, 3, 1), BigInt::from(0));
    }

    #[test]
    fn enumeration_matches_count() {
        for d in 1..=14 {
            for delta in 1..=4 {
                for k in 0..=max_feasible_sparsity(d, delta) + 1 {
                    let n = SeparatedSupports::new(d, k, delta).count();
                    assert_eq!(
                        BigInt::from(n),
                        count_supports(d, k, delta, 1),
                        "d={d} k={k} delta={delta}"
                    );
                }
            }
        }
    }

    #[test]
    fn block_count_matches_enumeration_of_starts() {
        for d in 1..=14 {
            for delta in 1..=3 {
                for b in 1..=3 {
                    for k in 0..=5 {
                        let expected = if b > d {
                            usize::from(k == 0)
                        } else {
                            SeparatedSupports::new(d - b + 1, k, delta + b - 1).count()
                        };
                        assert_eq!(BigInt::from(expected), count_supports(d, k, delta, b));
                    }
                }
            }
        }
    }

    #[test]
    fn sample_support_unique_and_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert_eq!(sample_support(7, 3, 3, &mut rng).unwrap().indices(), &[1, 4, 7]);
        }
        assert!(sample_support(9, 0, 3, &mut rng).unwrap().is_empty());
        assert!(matches!(
            sample_support(6, 3, 3, &mut rng),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn sample_support_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let all: Vec<Support> = SeparatedSupports::new(8, 3, 3).collect();
        assert_eq!(all.len(), 4);
        let mut counts = [0usize; 4];
        let draws = 100_000;
        for _ in 0..draws {
            let s = sample_support(8, 3, 3, &mut rng).unwrap();
            counts[all.iter().position(|a| *a == s).unwrap()] += 1;
        }
        for c in counts {
            let f = c as f64 / draws as f64;
            assert!((f - 0.25).abs() <= 0.03, "frequency {f}");
        }
    }

    #[test]
    fn support_validation() {
        assert!(Support::new(vec![0, 2]).is_err());
        assert!(Support::new(vec![3, 2]).is_err());
        let s = Support::new(vec![1, 4, 6]).unwrap();
        assert_eq!(s.separation(), Some(2));
        assert!(s.is_separated(2));
        assert!(!s.is_separated(3));
        assert!(s.is_in_model(6, 3, 2));
        assert!(!s.is_in_model(5, 3, 2));
        assert_eq!(s.to_string(), "{1, 4, 6}");
    }
}
