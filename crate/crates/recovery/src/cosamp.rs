//! CoSaMP with a pluggable model projection.

use std::time::Instant;

use crate::error::{RecoveryError, Result};
use crate::generate::RecoveryProblem;
use crate::linalg::{least_squares_cg, norm, LeastSquares};
use crate::model::Projector;

pub const LS_TOLERANCE: f64 = 1e-10;
pub const LS_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// `‖y - Xθ_t‖` before each iteration, then once more at the end.
    pub residual_norms: Vec<f64>,
    /// Wall time in seconds of each projector call.
    pub projector_seconds: Vec<f64>,
    pub iterations: usize,
    /// Set when a least-squares fit had more unknowns than measurements or
    /// did not reach the tolerance; the minimum-norm iterate was used.
    pub rank_deficient: bool,
}

fn timed_support(projector: &Projector, x: &[f64], k: usize, diag: &mut Diagnostics) -> Result<Vec<usize>> {
    let start = Instant::now();
    let s = projector.support(x, k)?;
    diag.projector_seconds.push(start.elapsed().as_secs_f64());
    Ok(s)
}

/// Model-based CoSaMP with `projector` for the prune step.
///
/// The merge step keeps the `2k` largest proxy entries. Every union of two
/// model supports is `2k`-sparse, so this contains the enlarged model the
/// merge needs; projecting onto a single separated `2k`-set instead is far
/// too rigid once `(2k-1)Δ` approaches `d` (see [`cosamp_with`]).
pub fn cosamp(
    problem: &RecoveryProblem,
    projector: &Projector,
    max_iters: usize,
    tol: f64,
) -> Result<(Vec<f64>, Diagnostics)> {
    cosamp_with(problem, &Projector::HardThreshold, projector, max_iters, tol)
}

/// CoSaMP with separate projections for the merge and prune steps.
///
/// Each iteration merges the support of `merge` applied to the proxy
/// `Xᵀ(y - Xθ)` (budget `2k`, clamped to what the model admits) with the
/// current support, fits least squares on the merge and prunes back with
/// `prune` at budget `k`.
pub fn cosamp_with(
    problem: &RecoveryProblem,
    merge: &Projector,
    prune: &Projector,
    max_iters: usize,
    tol: f64,
) -> Result<(Vec<f64>, Diagnostics)> {
    let x = &problem.design;
    let d = x.cols();
    if problem.y.len() != x.rows() {
        return Err(RecoveryError::DimensionMismatch(format!(
            "y has {} entries, X has {} rows",
            problem.y.len(),
            x.rows()
        )));
    }
    let k = problem.model.k();
    let merge_budget = merge.clamp_sparsity(d, 2 * k);
    let prune_budget = prune.clamp_sparsity(d, k);
    let mut theta = vec![0.0; d];
    let mut diag = Diagnostics::default();
    let residual = |theta: &[f64]| -> Vec<f64> { problem.y.iter().zip(x.mul(theta)).map(|(y, v)| y - v).collect() };
    for _ in 0..max_iters {
        let r = residual(&theta);
        diag.residual_norms.push(norm(&r));
        diag.iterations += 1;
        let proxy = x.mul_transpose(&r);
        let mut merged = timed_support(merge, &proxy, merge_budget, &mut diag)?;
        merged.extend((0..d).filter(|&i| theta[i] != 0.0));
        merged.sort_unstable();
        merged.dedup();
        let LeastSquares {
            solution, converged, ..
        } = least_squares_cg(&x.columns(&merged), &problem.y, LS_TOLERANCE, LS_MAX_ITER);
        if !converged || merged.len() > x.rows() {
            diag.rank_deficient = true;
        }
        let mut fit = vec![0.0; d];
        for (&i, &v) in merged.iter().zip(&solution) {
            fit[i] = v;
        }
        let kept = timed_support(prune, &fit, prune_budget, &mut diag)?;
        let mut next = vec![0.0; d];
        for i in kept {
            next[i] = fit[i];
        }
        let change: Vec<f64> = next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let done = norm(&change) <= tol * norm(&theta);
        theta = next;
        if done {
            break;
        }
    }
    diag.residual_norms.push(norm(&residual(&theta)));
    Ok((theta, diag))
}

/// `‖θ̂ - θ*‖₂`.
pub fn recovery_error(theta_hat: &[f64], theta_star: &[f64]) -> Result<f64> {
    if theta_hat.len() != theta_star.len() {
        return Err(RecoveryError::DimensionMismatch(format!(
            "{} vs {}",
            theta_hat.len(),
            theta_star.len()
        )));
    }
    Ok(theta_hat
        .iter()
        .zip(theta_star)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// Indices of the non-zero entries.
pub fn support_of(theta: &[f64]) -> Vec<usize> {
    (0..theta.len()).filter(|&i| theta[i] != 0.0).collect()
}
