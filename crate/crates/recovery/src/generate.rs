//! Synthetic separated spike signals and Gaussian measurement problems.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use sepsparse::{is_feasible, sample_support};

use crate::error::{RecoveryError, Result};
use crate::linalg::Matrix;
use crate::model::Model;

/// Parameters of a synthetic instance: `k = ⌊d/α⌋` spikes and separation
/// `Δ = ⌊(d - β(k+1))/k - 1⌋`, so that roughly `β` free positions remain
/// between consecutive spikes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub d: usize,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl GeneratorParams {
    /// The derived `(k, Δ)`.
    pub fn sparsity_and_separation(&self) -> Result<(usize, usize)> {
        if !(1.0..).contains(&self.alpha) || !(0.0..).contains(&self.beta) || !(0.0..).contains(&self.sigma) {
            return Err(RecoveryError::InvalidParams(
                "need alpha ≥ 1, beta ≥ 0, sigma ≥ 0".into(),
            ));
        }
        let k = (self.d as f64 / self.alpha).floor() as usize;
        if k == 0 {
            return Err(RecoveryError::InvalidParams(format!(
                "d/alpha = {}/{} gives k = 0",
                self.d, self.alpha
            )));
        }
        let raw = (self.d as f64 - self.beta * (k as f64 + 1.0)) / k as f64 - 1.0;
        if !(1.0..).contains(&raw) {
            return Err(RecoveryError::InvalidParams(format!("separation {raw:.3} is below 1")));
        }
        let delta = raw.floor() as usize;
        if !is_feasible(self.d, k, delta) {
            return Err(RecoveryError::InvalidParams(format!(
                "k={k}, delta={delta} do not fit in d={}",
                self.d
            )));
        }
        Ok((k, delta))
    }
}

/// A generated signal and its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub values: Vec<f64>,
    /// Sorted 1-based spike positions.
    pub support: Vec<usize>,
    pub k: usize,
    pub delta: usize,
}

fn spikes<R: Rng>(d: usize, k: usize, delta: usize, rng: &mut R) -> Result<(Vec<f64>, Vec<usize>)> {
    let support = sample_support(d, k, delta, rng)?.into_indices();
    let mut x = vec![0.0; d];
    for &i in &support {
        x[i - 1] = if rng.random::<bool>() { 1.0 } else { -1.0 };
    }
    Ok((x, support))
}

/// Random ±1 spikes on a uniformly drawn separated support plus Gaussian
/// noise on every coordinate.
pub fn generate_signal(p: &GeneratorParams) -> Result<Signal> {
    let (k, delta) = p.sparsity_and_separation()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (mut values, support) = spikes(p.d, k, delta, &mut rng)?;
    if p.sigma > 0.0 {
        let noise = Normal::new(0.0, p.sigma).map_err(|e| RecoveryError::InvalidParams(e.to_string()))?;
        for v in &mut values {
            *v += noise.sample(&mut rng);
        }
    }
    Ok(Signal {
        values,
        support,
        k,
        delta,
    })
}

/// `y = Xθ* + e` with `X` an `n × d` matrix of i.i.d. `N(0, 1/n)` entries.
#[derive(Debug, Clone)]
pub struct RecoveryProblem {
    pub design: Matrix,
    pub y: Vec<f64>,
    pub theta_star: Vec<f64>,
    pub noise_sigma: f64,
    pub model: Model,
}

/// Shape of a measurement problem whose ground truth is `k` spikes at
/// separation `Δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub d: usize,
    pub k: usize,
    pub delta: usize,
    pub n: usize,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl RecoveryProblem {
    pub fn generate(p: &ProblemParams) -> Result<Self> {
        if p.n == 0 || !(0.0..).contains(&p.noise_sigma) {
            return Err(RecoveryError::InvalidParams("need n ≥ 1 and noise_sigma ≥ 0".into()));
        }
        if !is_feasible(p.d, p.k, p.delta) {
            return Err(RecoveryError::InvalidParams(format!(
                "k={}, delta={} do not fit in d={}",
                p.k, p.delta, p.d
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        let (theta_star, _) = spikes(p.d, p.k, p.delta, &mut rng)?;
        let scale = 1.0 / (p.n as f64).sqrt();
        let data = (0..p.n * p.d)
            .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let design = Matrix::from_row_major(p.n, p.d, data)?;
        let mut y = design.mul(&theta_star);
        for v in &mut y {
            *v += p.noise_sigma * rng.sample::<f64, _>(StandardNormal);
        }
        let model = Model::Separated { k: p.k, delta: p.delta };
        Ok(RecoveryProblem {
            design,
            y,
            theta_star,
            noise_sigma: p.noise_sigma,
            model,
        })
    }
}
