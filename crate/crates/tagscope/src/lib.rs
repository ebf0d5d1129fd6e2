//! File formats, ingestion, exports, the run pipeline and the CLI built on
//! `tagscope-core`.

#![deny(unsafe_code)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod graph_io;
pub mod ingest;
pub mod parallel;
pub mod pipeline;
pub mod plot;
pub mod tables;

pub use error::{Error, Result};
