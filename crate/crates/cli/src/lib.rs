//! Command-line front end for the tecost library: argument parsing,
//! settings, channel families and report rendering.

// `!(x > 0.0)` style checks are how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod commands;
pub mod error;
pub mod family;
pub mod report;
pub mod settings;

pub use app::{run, EXIT_FAIL, EXIT_INPUT, EXIT_OK};
