//! Command implementations behind the `krwlab` binary.

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
