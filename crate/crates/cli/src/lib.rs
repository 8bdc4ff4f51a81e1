//! Library side of the `swarmsim` harness: experiment configs, runners,
//! figure presets, and the report plumbing. The binary in `main.rs` is a
//! thin dispatcher over these.

pub mod config;
pub mod experiments;
pub mod figures;
pub mod report_cmd;
