//! Projection onto `k` blocks of `b` consecutive indices whose starts are
//! at least `Δ + b - 1` apart (so blocks keep a gap of `Δ - 1` between
//! them).
//!
//! The block value of a start `p` is `c_p + … + c_{p+b-1}`; the problem is
//! then a plain separated projection on those window sums with separation
//! `Δ + b - 1`.

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::deterministic::recover;
use crate::dp::dp_improved;
use crate::error::{Error, Result};
use crate::lagrangian::lassp;
use crate::model::{Projection, ProjectionInstance, Support};
use crate::wide::WideInt;

/// Exact projection engine used on the window sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    Lassp {
        seed: u64,
    },
    #[default]
    Recover,
    DpImproved,
}

impl Engine {
    pub fn project(self, inst: &ProjectionInstance) -> Result<Projection> {
        match self {
            Engine::Lassp { seed } => Ok(lassp(inst, &mut StdRng::seed_from_u64(seed))?.projection),
            Engine::Recover => recover(inst),
            Engine::DpImproved => dp_improved(inst),
        }
    }
}

/// Sums of every window of `b` consecutive costs, `d - b + 1` of them.
pub fn window_sums(costs: &[WideInt], b: usize) -> Vec<WideInt> {
    if b == 0 || b > costs.len() {
        return Vec::new();
    }
    let mut sums = Vec::with_capacity(costs.len() - b + 1);
    let mut acc: WideInt = costs[..b].iter().sum();
    sums.push(acc.clone());
    for i in b..costs.len() {
        acc += &costs[i];
        acc -= &costs[i - b];
        sums.push(acc.clone());
    }
    sums
}

/// Best `k` block starts; the value is the total cost covered.
pub fn project_blocks(costs: &[WideInt], delta: usize, b: usize, k: usize, engine: Engine) -> Result<Projection> {
    if b == 0 || delta == 0 {
        return Err(Error::InvalidInput(
            "block length and separation must be at least 1".into(),
        ));
    }
    let d = costs.len();
    if k == 0 {
        return Ok(Projection {
            support: Support::empty(),
            value: WideInt::from(0),
        });
    }
    let spread = delta + b - 1;
    if (k - 1) * spread + b > d {
        return Err(Error::Infeasible { d, k, delta });
    }
    let reduced = ProjectionInstance::new(window_sums(costs, b), k, spread)?;
    let p = engine.project(&reduced)?;
    let value = p.support.value(&window_sums(costs, b))?;
    Ok(Projection {
        support: p.support,
        value,
    })
}
