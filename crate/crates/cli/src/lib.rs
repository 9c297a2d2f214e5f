//! Building blocks of the `sepsparse` command-line tool.

pub mod algo;
pub mod bench;
pub mod selftest;

pub use algo::{run, Algo, Run};
pub use bench::{run_bench, BenchConfig, BenchError, BenchRow};
pub use selftest::{run_selftest, Failure, SelftestConfig, SelftestReport};
