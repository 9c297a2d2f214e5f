//! Timing sweeps over `d` with a cross-algorithm value check.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use sepsparse::{ProjectionInstance, QuantizationConfig};
use sepsparse_recovery::{generate_signal, GeneratorParams};

use crate::algo::{run, Algo};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub ds: Vec<usize>,
    pub algos: Vec<Algo>,
    pub trials: usize,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub gamma: u32,
    /// Overrides of the `(k, Δ)` derived from `alpha` and `beta`.
    pub k: Option<usize>,
    pub delta: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ds: vec![1000, 10_000],
            algos: vec![Algo::Dp, Algo::Lassp],
            trials: 10,
            seed: 0,
            alpha: 50.0,
            beta: 5.0,
            sigma: 0.1,
            gamma: 32,
            k: None,
            delta: None,
        }
    }
}

#[derive(Debug)]
pub enum BenchError {
    Config(String),
    Projection(String),
    /// Algorithms disagreed on an optimum; rows before this one are valid.
    Mismatch {
        rows: Vec<BenchRow>,
        message: String,
    },
}

fn list<T>(value: &str, parse: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    value.split(',').map(|v| parse(v.trim())).collect()
}

fn scalar<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, BenchError> {
    map.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| BenchError::Config(format!("cannot parse {key} = {v:?}")))
        })
        .transpose()
}

impl BenchConfig {
    /// Keys: `d`, `algos` (comma lists), `trials`, `seed`, `alpha`, `beta`,
    /// `sigma`, `gamma`, and optionally `k`, `delta`.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, BenchError> {
        let known = [
            "d", "algos", "trials", "seed", "alpha", "beta", "sigma", "gamma", "k", "delta",
        ];
        if let Some(key) = map.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(BenchError::Config(format!("unknown key {key:?}")));
        }
        let mut cfg = BenchConfig::default();
        if let Some(v) = map.get("d") {
            cfg.ds = list(v, |s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|x| *x >= 1.0 && x.fract() == 0.0)
                    .map(|x| x as usize)
            })
            .ok_or_else(|| BenchError::Config(format!("bad d list {v:?}")))?;
        }
        if let Some(v) = map.get("algos") {
            cfg.algos = list(v, Algo::parse).ok_or_else(|| BenchError::Config(format!("bad algos {v:?}")))?;
        }
        if let Some(a) = cfg.algos.iter().find(|a| !a.is_exact()) {
            return Err(BenchError::Config(format!(
                "{} is not exact and cannot be cross-checked",
                a.name()
            )));
        }
        cfg.trials = scalar(map, "trials")?.unwrap_or(cfg.trials);
        cfg.seed = scalar(map, "seed")?.unwrap_or(cfg.seed);
        cfg.alpha = scalar(map, "alpha")?.unwrap_or(cfg.alpha);
        cfg.beta = scalar(map, "beta")?.unwrap_or(cfg.beta);
        cfg.sigma = scalar(map, "sigma")?.unwrap_or(cfg.sigma);
        cfg.gamma = scalar(map, "gamma")?.unwrap_or(cfg.gamma);
        cfg.k = scalar(map, "k")?;
        cfg.delta = scalar(map, "delta")?;
        if cfg.trials == 0 || cfg.ds.is_empty() || cfg.algos.is_empty() {
            return Err(BenchError::Config(
                "need at least one d, one algorithm and one trial".into(),
            ));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub d: usize,
    pub k: usize,
    pub delta: usize,
    pub algo: Algo,
    pub time_mean: f64,
    pub time_std: f64,
    pub time_median: f64,
    /// Sum of the optimal values over all trials.
    pub value_checksum: BigInt,
}

/// Mean, sample standard deviation and median.
pub fn summarize(times: &[f64]) -> (f64, f64, f64) {
    let n = times.len() as f64;
    let mean = times.iter().sum::<f64>() / n;
    let var = if times.len() > 1 {
        times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    };
    (mean, var.sqrt(), median)
}

/// Runs the sweep. `corrupt` adds one to the last algorithm's values so
/// the mismatch path can be exercised.
pub fn run_bench(cfg: &BenchConfig, corrupt: bool) -> Result<Vec<BenchRow>, BenchError> {
    let quant = QuantizationConfig::new(cfg.gamma).map_err(|e| BenchError::Config(e.to_string()))?;
    let mut rows = Vec::new();
    for &d in &cfg.ds {
        let mut times = vec![Vec::with_capacity(cfg.trials); cfg.algos.len()];
        let mut sums = vec![BigInt::from(0); cfg.algos.len()];
        let mut shape = (0, 0);
        for trial in 0..cfg.trials {
            let seed = cfg.seed.wrapping_add(trial as u64);
            let params = GeneratorParams {
                d,
                alpha: cfg.alpha,
                beta: cfg.beta,
                sigma: cfg.sigma,
                seed,
            };
            let signal = generate_signal(&params).map_err(|e| BenchError::Config(e.to_string()))?;
            let k = cfg.k.unwrap_or(signal.k);
            let delta = cfg.delta.unwrap_or(signal.delta);
            shape = (k, delta);
            let inst = ProjectionInstance::from_signal(&signal.values, k, delta, quant)
                .map_err(|e| BenchError::Projection(e.to_string()))?;
            let mut reference: Option<BigInt> = None;
            for (j, &algo) in cfg.algos.iter().enumerate() {
                let out =
                    run(algo, &inst, seed).map_err(|e| BenchError::Projection(format!("{}: {e}", algo.name())))?;
                let mut value = out.projection.value;
                if corrupt && j + 1 == cfg.algos.len() && j > 0 {
                    value += 1;
                }
                match &reference {
                    Some(r) if *r != value => {
                        let message = format!(
                            "d={d} trial={trial}: {} found {value}, {} found {r}",
                            algo.name(),
                            cfg.algos[0].name()
                        );
                        return Err(BenchError::Mismatch { rows, message });
                    }
                    Some(_) => {}
                    None => reference = Some(value.clone()),
                }
                times[j].push(out.seconds);
                sums[j] += value;
            }
        }
        for (j, &algo) in cfg.algos.iter().enumerate() {
            let (time_mean, time_std, time_median) = summarize(&times[j]);
            rows.push(BenchRow {
                d,
                k: shape.0,
                delta: shape.1,
                algo,
                time_mean,
                time_std,
                time_median,
                value_checksum: sums[j].clone(),
            });
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "d,k,delta,algo,time_mean,time_std,time_median,value_checksum";

pub fn format_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{:.6e},{:.6e},{:.6e},{}",
            r.d,
            r.k,
            r.delta,
            r.algo.name(),
            r.time_mean,
            r.time_std,
            r.time_median,
            r.value_checksum
        )
        .expect("writing to a String cannot fail");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn config_parsing() {
        let cfg = BenchConfig::from_map(&map(&[("d", "1e3, 1e4"), ("algos", "dp,lassp"), ("trials", "3")])).unwrap();
        assert_eq!(cfg.ds, vec![1000, 10_000]);
        assert_eq!(cfg.algos, vec![Algo::Dp, Algo::Lassp]);
        assert_eq!(cfg.trials, 3);
        assert!(BenchConfig::from_map(&map(&[("algos", "dp,approx2")])).is_err());
        assert!(BenchConfig::from_map(&map(&[("colour", "red")])).is_err());
        assert!(BenchConfig::from_map(&map(&[("trials", "x")])).is_err());
    }

    #[test]
    fn summary_statistics() {
        let (mean, std, median) = summarize(&[1.0, 2.0, 3.0, 10.0]);
        assert_eq!(mean, 4.0);
        assert_eq!(median, 2.5);
        assert!((std - 4.0824829).abs() < 1e-6);
        assert_eq!(summarize(&[2.0]), (2.0, 0.0, 2.0));
    }

    #[test]
    fn small_sweep_rows_and_checksums() {
        let cfg = BenchConfig {
            ds: vec![1000, 2000],
            algos: vec![Algo::Dp, Algo::Lassp, Algo::Recover],
            trials: 2,
            ..Default::default()
        };
        let rows = run_bench(&cfg, false).unwrap();
        assert_eq!(rows.len(), 6);
        for chunk in rows.chunks(3) {
            assert!(chunk.iter().all(|r| r.value_checksum == chunk[0].value_checksum));
        }
        assert_eq!((rows[0].k, rows[0].delta), (20, 43));
        let csv = format_csv(&rows);
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with(CSV_HEADER));
    }

    #[test]
    fn corruption_is_reported_as_mismatch() {
        let cfg = BenchConfig {
            ds: vec![1000],
            trials: 1,
            ..Default::default()
        };
        assert!(matches!(run_bench(&cfg, true), Err(BenchError::Mismatch { .. })));
    }
}
