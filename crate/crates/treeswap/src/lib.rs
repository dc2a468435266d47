//! File formats and the command line pipeline around `treeswap-core`.
//!
//! - [`conllu`]: reading and writing CoNLL-U parses
//! - [`cache`]: the token-per-row TSV parse cache
//! - [`parallel`]: line-aligned parallel text and pair metadata
//! - [`tables`], [`manifest`]: TSV outputs and run manifests
//! - [`config`], [`cli`], [`commands`]: the `treeswap` command

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod conllu;
pub mod manifest;
pub mod parallel;
pub mod tables;
