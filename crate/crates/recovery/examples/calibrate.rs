//! Sweeps the measurement count and prints exact-support success rates of
//! separated and hard-threshold CoSaMP; used to freeze `calibration`.

use sepsparse::Engine;
use sepsparse_recovery::calibration::{D, DELTA, K, MAX_ITERS, TOL};
use sepsparse_recovery::{cosamp, support_of, ProblemParams, Projector, RecoveryProblem};

fn main() {
    let trials: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    println!("n,separated,hard_threshold");
    for n in (30..=80).step_by(5) {
        let mut wins = [0u64; 2];
        for seed in 0..trials {
            let p = ProblemParams {
                d: D,
                k: K,
                delta: DELTA,
                n,
                noise_sigma: 0.0,
                seed,
            };
            let prob = RecoveryProblem::generate(&p).expect("calibration parameters are feasible");
            let truth = support_of(&prob.theta_star);
            let sep = Projector::Separated {
                delta: DELTA,
                engine: Engine::Lassp { seed },
            };
            for (j, proj) in [sep, Projector::HardThreshold].iter().enumerate() {
                let (theta, _) = cosamp(&prob, proj, MAX_ITERS, TOL).expect("projection cannot fail here");
                wins[j] += u64::from(support_of(&theta) == truth);
            }
        }
        println!(
            "{n},{:.2},{:.2}",
            wins[0] as f64 / trials as f64,
            wins[1] as f64 / trials as f64
        );
    }
}
