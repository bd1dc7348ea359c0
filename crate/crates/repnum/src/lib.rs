//! Command-line front end for `repnum-core`: threaded scans, the prime cache, the
//! constants file, the sieve golden file, verification suites and calibration.

pub mod cache;
pub mod cli;
pub mod constants;
pub mod golden;
pub mod num_fmt;
pub mod parallel;
pub mod suites;

pub use parallel::ParallelEngine;
