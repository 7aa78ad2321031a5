//! Two-agent risk model: an Investor and a Project Manager each form
//! confidence from distorted memories of past outcomes and act on threshold
//! rules.
//!
//! - [`belief`]: confidence from remembered success/failure counts.
//! - [`perception`]: perception matrix, recollection process and the
//!   long-run confidence those imply.
//! - [`agents`]: the Investor's investment rule and the Manager's
//!   embezzlement rule.
//! - [`engine`]: round/episode simulation.
//! - [`montecarlo`]: replications, sweeps and brute-force oracles.
//! - [`config`], [`output`], [`cli`]: the `psyrisk` command-line tool.

pub mod agents;
pub mod belief;
pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod montecarlo;
pub mod output;
pub mod perception;
pub mod rng;

pub use error::{Error, Result};
