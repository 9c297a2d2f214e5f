use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use sepsparse::{Engine, ProjectionInstance, QuantizationConfig};
use sepsparse_cli::algo::json_int;
use sepsparse_cli::bench::{format_csv, run_bench, BenchConfig, BenchError};
use sepsparse_cli::selftest::{run_selftest, SelftestConfig};
use sepsparse_cli::{run, Algo};
use sepsparse_recovery::io::{read_config, read_signal_csv, write_signal_csv};
use sepsparse_recovery::{
    cosamp, generate_signal, recovery_error, support_of, GeneratorParams, Model, ProblemParams, Projector,
    RecoveryError, RecoveryProblem,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_MALFORMED: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "sepsparse",
    version,
    about = "Exact projections onto the separated sparsity model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project a signal (one real per line) onto k-sparse supports with separation delta.
    Project {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, value_enum, default_value = "recover")]
        algo: Algo,
        /// Bits of precision for the squared magnitudes.
        #[arg(long, default_value_t = 32)]
        gamma: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Treat the values as non-negative integer costs instead of a signal.
        #[arg(long)]
        costs: bool,
    },
    /// Time algorithms over a sweep described by a key=value config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, hide = true)]
        mutate: bool,
    },
    /// Check every engine against the exhaustive oracle on small instances.
    Selftest {
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u16).range(1..=24))]
        max_d: u16,
        #[arg(long, default_value_t = 4)]
        max_delta: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        mutate: bool,
    },
    /// Generate a separated spike signal with Gaussian noise.
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 50.0)]
        alpha: f64,
        #[arg(long, default_value_t = 5.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover a separated spike signal from Gaussian measurements with CoSaMP.
    Recover {
        #[arg(long, default_value_t = 512)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 44)]
        delta: usize,
        /// Number of measurements.
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "separated")]
        projector: ProjectorKind,
        #[arg(long, value_enum, default_value = "lassp")]
        engine: EngineKind,
        #[arg(long, default_value_t = 50)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProjectorKind {
    Hard,
    Separated,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineKind {
    Lassp,
    Recover,
    DpFast,
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn projection_error(e: sepsparse::Error) -> ExitCode {
    match e {
        sepsparse::Error::Infeasible { .. } => fail(EXIT_INFEASIBLE, e),
        _ => fail(EXIT_FAILURE, e),
    }
}

fn signal_error(e: RecoveryError) -> ExitCode {
    match e {
        RecoveryError::Malformed { .. } => fail(EXIT_MALFORMED, e),
        RecoveryError::InvalidParams(_) => fail(EXIT_INFEASIBLE, e),
        _ => fail(EXIT_FAILURE, e),
    }
}

fn integer_costs(values: &[f64]) -> Result<Vec<BigInt>, RecoveryError> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(63) {
                Ok(BigInt::from(v as u64))
            } else {
                Err(RecoveryError::Malformed {
                    line: i + 1,
                    message: format!("{v} is not a non-negative integer cost"),
                })
            }
        })
        .collect()
}

fn project(input: &Path, k: usize, delta: usize, algo: Algo, gamma: u32, seed: u64, costs: bool) -> ExitCode {
    let values = match read_signal_csv(input) {
        Ok(v) => v,
        Err(e) => return signal_error(e),
    };
    let inst = if costs {
        match integer_costs(&values) {
            Ok(c) => ProjectionInstance::new(c, k, delta),
            Err(e) => return signal_error(e),
        }
    } else {
        QuantizationConfig::new(gamma).and_then(|q| ProjectionInstance::from_signal(&values, k, delta, q))
    };
    let inst = match inst {
        Ok(i) => i,
        Err(e) => return projection_error(e),
    };
    if algo.is_exact() {
        if let Err(e) = inst.ensure_feasible() {
            return projection_error(e);
        }
    }
    match run(algo, &inst, seed) {
        Ok(out) => {
            let support = out.projection.support.indices();
            let result = serde_json::json!({
                "support": support,
                "value": json_int(&out.projection.value),
                "iterations": out.iterations,
                "wall_time_s": out.seconds,
                "short_support": support.len() < k,
            });
            println!("{result}");
            ExitCode::SUCCESS
        }
        Err(e) => projection_error(e),
    }
}

fn bench(config: &Path, out: Option<&Path>, mutate: bool) -> ExitCode {
    let cfg = match read_config(config) {
        Ok(map) => BenchConfig::from_map(&map),
        Err(e) => return signal_error(e),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => return fail(EXIT_FAILURE, format!("{e:?}")),
    };
    let emit = |csv: String| -> std::io::Result<()> {
        match out {
            Some(path) => std::fs::write(path, csv),
            None => {
                print!("{csv}");
                Ok(())
            }
        }
    };
    match run_bench(&cfg, mutate) {
        Ok(rows) => match emit(format_csv(&rows)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(EXIT_FAILURE, e),
        },
        Err(BenchError::Mismatch { rows, message }) => {
            if let Err(e) = emit(format_csv(&rows)) {
                eprintln!("error: {e}");
            }
            fail(EXIT_MISMATCH, format!("value mismatch, {message}"))
        }
        Err(e) => fail(EXIT_FAILURE, format!("{e:?}")),
    }
}

fn selftest(cfg: SelftestConfig) -> ExitCode {
    let report = run_selftest(&cfg);
    println!("exhaustive instances: {}", report.exhaustive_instances);
    println!("random instances:     {}", report.random_instances);
    println!("block instances:      {}", report.block_instances);
    println!("checks:               {}", report.checks);
    match report.failure {
        None => {
            println!("PASS");
            ExitCode::SUCCESS
        }
        Some(f) => {
            println!("FAIL {}", f.to_json());
            fail(EXIT_FAILURE, f)
        }
    }
}

fn gen(params: GeneratorParams, out: &Path) -> ExitCode {
    let signal = match generate_signal(&params) {
        Ok(s) => s,
        Err(e) => return signal_error(e),
    };
    if let Err(e) = write_signal_csv(out, &signal.values) {
        return signal_error(e);
    }
    let sidecar = serde_json::json!({
        "d": params.d,
        "k": signal.k,
        "delta": signal.delta,
        "alpha": params.alpha,
        "beta": params.beta,
        "sigma": params.sigma,
        "seed": params.seed,
        "support": signal.support,
    });
    println!("{sidecar}");
    ExitCode::SUCCESS
}

fn recover_signal(p: ProblemParams, kind: ProjectorKind, engine: EngineKind, max_iters: usize, tol: f64) -> ExitCode {
    let problem = match RecoveryProblem::generate(&p) {
        Ok(prob) => prob,
        Err(e) => return signal_error(e),
    };
    let engine = match engine {
        EngineKind::Lassp => Engine::Lassp { seed: p.seed },
        EngineKind::Recover => Engine::Recover,
        EngineKind::DpFast => Engine::DpImproved,
    };
    let projector = match kind {
        ProjectorKind::Hard => Projector::HardThreshold,
        ProjectorKind::Separated => Projector::for_model(Model::Separated { k: p.k, delta: p.delta }, engine),
    };
    let (theta, diag) = match cosamp(&problem, &projector, max_iters, tol) {
        Ok(r) => r,
        Err(e) => return signal_error(e),
    };
    let error = recovery_error(&theta, &problem.theta_star).expect("lengths agree");
    let recovered: Vec<usize> = support_of(&theta).iter().map(|i| i + 1).collect();
    let truth: Vec<usize> = support_of(&problem.theta_star).iter().map(|i| i + 1).collect();
    let result = serde_json::json!({
        "error": error,
        "support_recovered": recovered == truth,
        "support": recovered,
        "true_support": truth,
        "iterations": diag.iterations,
        "residual_norms": diag.residual_norms,
        "projector_time_s": diag.projector_seconds.iter().sum::<f64>(),
        "rank_deficient": diag.rank_deficient,
    });
    println!("{result}");
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Project {
            input,
            k,
            delta,
            algo,
            gamma,
            seed,
            costs,
        } => project(&input, k, delta, algo, gamma, seed, costs),
        Command::Bench { config, out, mutate } => bench(&config, out.as_deref(), mutate),
        Command::Selftest {
            max_d,
            max_delta,
            trials,
            seed,
            mutate,
        } => selftest(SelftestConfig {
            max_d: max_d as usize,
            max_delta,
            trials,
            seed,
            mutate,
            ..SelftestConfig::default()
        }),
        Command::Gen {
            d,
            alpha,
            beta,
            sigma,
            seed,
            out,
        } => gen(
            GeneratorParams {
                d,
                alpha,
                beta,
                sigma,
                seed,
            },
            &out,
        ),
        Command::Recover {
            d,
            k,
            delta,
            n,
            sigma,
            seed,
            projector,
            engine,
            max_iters,
            tol,
        } => recover_signal(
            ProblemParams {
                d,
                k,
                delta,
                n,
                noise_sigma: sigma,
                seed,
            },
            projector,
            engine,
            max_iters,
            tol,
        ),
    }
}
