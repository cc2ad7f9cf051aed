//! The `semnet` command-line pipeline.
//!
//! `build` turns tagged-token files into per-book co-occurrence networks and
//! frequency tables, `fuse` merges books into one network, and `scores`,
//! `semaffinity` and `affinity` export analysis tables. Every command is
//! deterministic and writes its outputs atomically.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{cmd_affinity, cmd_build, cmd_fuse, cmd_scores, cmd_semaffinity};
pub use config::{AffinityChoice, RunConfig};
