//! Exact projections onto the separated sparsity model.
//!
//! Given non-negative integer costs `c` (typically squared signal
//! coefficients), a sparsity `k` and a separation `Δ`, find `k` indices,
//! pairwise at least `Δ` apart, maximizing the sum of their costs.
//!
//! Engines:
//! - [`lassp`]: randomized perturbed Lagrangian relaxation, nearly linear time.
//! - [`recover`]: deterministic divide and conquer driven by the dual LP.
//! - [`dp_folklore`] / [`dp_improved`]: `O(dk)` and `O(k·slack)` dynamic programs.
//! - [`head_approx_2`]: the 2-approximation that may return fewer than `k` indices.
//! - [`brute_force_project`]: exhaustive oracle for small instances.

pub mod error;
pub mod model;
pub mod wide;

pub mod approx;
pub mod blocks;
pub mod deterministic;
pub mod dp;
pub mod dual;
pub mod lagrangian;

pub use error::{Error, Result};
pub use model::{
    brute_force_project, brute_force_project_with_cap, count_supports, is_feasible, max_feasible_sparsity,
    quantize_signal, sample_support, Projection, ProjectionInstance, QuantizationConfig, SeparatedSupports, Support,
};
pub use wide::{Exact, WideInt};

pub use approx::head_approx_2;
pub use blocks::{project_blocks, window_sums, Engine};
pub use deterministic::{
    delta_recovery, distribute_sparsity, distribute_sparsity_with_actives, recover, recover_costs, recover_with_trace,
    RecoverNode, SparsityDistribution, SparsitySplit,
};
pub use dp::{dp_folklore, dp_improved, dp_improved_with_stats, DpStats};
pub use dual::{
    active_constraints, active_count, dual_greedy, max_integer_minimizer_lambda, max_minimizer_by_slope,
    opt_value_of_dual, ActiveSet, DualOptimum, DualSolution,
};
pub use lagrangian::{
    lassp, lassp_value_only, lassp_with_config, proj_lagr, LagrangianQuery, LasspConfig, LasspOutcome,
};
