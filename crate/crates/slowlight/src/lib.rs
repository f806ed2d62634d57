//! Scenario files, output formats and the experiments run by the `slowlight` binary.
//!
//! The physics lives in `slowlight-core`; this crate adds parsing, parallel evaluation
//! and file emission on top.

pub mod commands;
pub mod output;
pub mod scenario;
pub mod svg;
pub mod units;
pub mod validate;

pub use scenario::Scenario;
