//! Command-line surface: report rendering, the command implementations and
//! the reproduction harness.

pub mod commands;
pub mod report;
pub mod reproduce;
