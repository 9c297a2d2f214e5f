//! Sparsity models and the projections CoSaMP uses for them.

use sepsparse::{
    max_feasible_sparsity, project_blocks, quantize_signal, Engine, ProjectionInstance, QuantizationConfig,
};

use crate::error::Result;

/// Structure declared for the ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Standard {
        k: usize,
    },
    Separated {
        k: usize,
        delta: usize,
    },
    /// `k` blocks of length `b`, gaps of at least `Δ - 1` between blocks.
    Blocks {
        k: usize,
        delta: usize,
        b: usize,
    },
}

impl Model {
    pub fn k(&self) -> usize {
        match *self {
            Model::Standard { k } | Model::Separated { k, .. } | Model::Blocks { k, .. } => k,
        }
    }
}

/// Projection onto a sparsity model, always fed squared magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projector {
    /// Keep the `k` largest magnitudes.
    HardThreshold,
    Separated {
        delta: usize,
        engine: Engine,
    },
    Blocks {
        delta: usize,
        b: usize,
        engine: Engine,
    },
}

impl Projector {
    /// The projector matching a declared model.
    pub fn for_model(model: Model, engine: Engine) -> Self {
        match model {
            Model::Standard { .. } => Projector::HardThreshold,
            Model::Separated { delta, .. } => Projector::Separated { delta, engine },
            Model::Blocks { delta, b, .. } => Projector::Blocks { delta, b, engine },
        }
    }

    /// Largest `k' ≤ k` for which the model is non-empty on `d` positions.
    pub fn clamp_sparsity(&self, d: usize, k: usize) -> usize {
        match *self {
            Projector::HardThreshold => k.min(d),
            Projector::Separated { delta, .. } => k.min(max_feasible_sparsity(d, delta)),
            Projector::Blocks { delta, b, .. } if b <= d => k.min(max_feasible_sparsity(d - b + 1, delta + b - 1)),
            Projector::Blocks { .. } => 0,
        }
    }

    /// Sorted 0-based support of the best model member for `x`.
    pub fn support(&self, x: &[f64], k: usize) -> Result<Vec<usize>> {
        if k == 0 || x.is_empty() {
            return Ok(Vec::new());
        }
        match *self {
            Projector::HardThreshold => {
                let mut order: Vec<usize> = (0..x.len()).collect();
                order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
                order.truncate(k);
                order.sort_unstable();
                Ok(order)
            }
            Projector::Separated { delta, engine } => {
                let inst = ProjectionInstance::from_signal(x, k, delta, QuantizationConfig::default())?;
                Ok(engine.project(&inst)?.support.indices().iter().map(|i| i - 1).collect())
            }
            Projector::Blocks { delta, b, engine } => {
                let costs = quantize_signal(x, QuantizationConfig::default())?;
                let starts = project_blocks(&costs, delta, b, k, engine)?.support;
                Ok(starts.indices().iter().flat_map(|&s| s - 1..s - 1 + b).collect())
            }
        }
    }
}
