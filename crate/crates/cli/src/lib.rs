//! Library half of the `qrf` command line: run configuration, the CSV row
//! format, and the sweep/dump/verify drivers.  Everything here is exercised
//! directly by the integration tests; `main.rs` only parses arguments and
//! dispatches.

pub mod config;
pub mod row;
pub mod run;

pub use config::{Evaluation, RawConfig, RunSpec, SweepAxis, CONFIG_KEYS};
pub use row::{OutputRow, CSV_HEADER};
