//! Std companion to `steiner-core`: file IO, wall-clock and multi-worker
//! search, and the structured reports used by the `steiner` binary.

pub mod input;
pub mod report;
pub mod runner;
