//! Parsers, configuration, reports and the acceptance suite around
//! `singkam-core`.

pub mod cli;
pub mod config;
pub mod parse;
pub mod report;
pub mod sampler;
pub mod suite;
