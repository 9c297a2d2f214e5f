use std::time::Instant;

use clap::ValueEnum;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sepsparse::{dp_folklore, dp_improved, head_approx_2, lassp, recover, Projection, ProjectionInstance, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Algo {
    Lassp,
    Recover,
    /// `O(dk)` dynamic program.
    Dp,
    /// Slack-indexed dynamic program.
    DpFast,
    /// 2-approximation; may return fewer than `k` indices.
    Approx2,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Lassp => "lassp",
            Algo::Recover => "recover",
            Algo::Dp => "dp",
            Algo::DpFast => "dp-fast",
            Algo::Approx2 => "approx2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s.trim(), true).ok()
    }

    pub fn is_exact(self) -> bool {
        self != Algo::Approx2
    }
}

#[derive(Debug, Clone)]
pub struct Run {
    pub projection: Projection,
    /// Perturbation rounds, reported by `lassp` only.
    pub iterations: Option<usize>,
    pub seconds: f64,
}

pub fn run(algo: Algo, inst: &ProjectionInstance, seed: u64) -> Result<Run> {
    let start = Instant::now();
    let (projection, iterations) = match algo {
        Algo::Lassp => {
            let out = lassp(inst, &mut ChaCha8Rng::seed_from_u64(seed))?;
            (out.projection, Some(out.iterations))
        }
        Algo::Recover => (recover(inst)?, None),
        Algo::Dp => (dp_folklore(inst)?, None),
        Algo::DpFast => (dp_improved(inst)?, None),
        Algo::Approx2 => (head_approx_2(inst)?, None),
    };
    Ok(Run {
        projection,
        iterations,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// A JSON number when it fits in 64 bits, else a decimal string.
pub fn json_int(v: &BigInt) -> serde_json::Value {
    if let Ok(u) = u64::try_from(v) {
        serde_json::Value::from(u)
    } else if let Ok(i) = i64::try_from(v) {
        serde_json::Value::from(i)
    } else {
        serde_json::Value::from(v.to_string())
    }
}
