//! Nearly linear 2-approximation by parity-block argmax.
//!
//! Cut `[d]` into blocks of `Δ` consecutive indices and keep the largest
//! cost of each block. Blocks of equal parity are at least `2Δ` apart at
//! their starts, so the kept indices of one parity class are separated.
//! The better parity class, truncated to its `k` largest entries, is
//! within a factor 2 of the optimum but may hold fewer than `k` indices.

use crate::error::{Error, Result};
use crate::model::{Projection, ProjectionInstance, Support};
use crate::wide::WideInt;

pub fn head_approx_2(inst: &ProjectionInstance) -> Result<Projection> {
    let (costs, delta, k) = (inst.costs(), inst.delta(), inst.k());
    if delta == 0 {
        return Err(Error::InvalidInput("separation must be at least 1".into()));
    }
    let mut classes: [Vec<(usize, &WideInt)>; 2] = [Vec::new(), Vec::new()];
    for (block, chunk) in costs.chunks(delta).enumerate() {
        let (offset, best) = chunk
            .iter()
            .enumerate()
            .fold((0, &chunk[0]), |acc, (j, c)| if c > acc.1 { (j, c) } else { acc });
        classes[block % 2].push((block * delta + offset + 1, best));
    }
    let mut picked = classes.map(|mut class| {
        class.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(&b.0)));
        class.truncate(k);
        let value: WideInt = class.iter().map(|(_, c)| *c).sum();
        (class, value)
    });
    let [odd, even] = &mut picked;
    let (class, value) = if even.1 > odd.1 { even } else { odd };
    let mut indices: Vec<usize> = class.iter().map(|(i, _)| *i).collect();
    indices.sort_unstable();
    let support = Support::from_sorted(indices);
    debug_assert!(support.is_separated(delta));
    Ok(Projection {
        support,
        value: value.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn run(c: &[i64], k: usize, delta: usize) -> Projection {
        head_approx_2(&ProjectionInstance::from_i64(c, k, delta).unwrap()).unwrap()
    }

    #[test]
    fn short_support_example() {
        let p = run(&[1, 100, 1], 2, 2);
        assert_eq!(p.support.indices(), &[2]);
        assert_eq!(p.value, BigInt::from(100));
    }

    #[test]
    fn uniform_tight_instance() {
        // d = (k-1)Δ + 1 with k = 5, Δ = 3: one parity class holds 3 blocks.
        let p = run(&[4; 13], 5, 3);
        assert!(p.value >= BigInt::from(4 * 3));
        assert!(p.support.is_separated(3));
    }

    #[test]
    fn ties_take_the_smallest_index() {
        assert_eq!(run(&[2, 2, 2], 1, 3).support.indices(), &[1]);
    }

    #[test]
    fn zero_sparsity_is_empty() {
        assert!(run(&[5, 1], 0, 1).support.is_empty());
    }
}
