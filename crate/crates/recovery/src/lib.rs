//! Sparse recovery from Gaussian measurements with structure-aware CoSaMP.
//!
//! Floating point lives only here. Every projection quantizes squared
//! magnitudes to integers and calls an exact engine from [`sepsparse`].

pub mod calibration;
pub mod cosamp;
pub mod error;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod model;

pub use cosamp::{cosamp, cosamp_with, recovery_error, support_of, Diagnostics};
pub use error::{RecoveryError, Result};
pub use generate::{generate_signal, GeneratorParams, ProblemParams, RecoveryProblem, Signal};
pub use model::{Model, Projector};
