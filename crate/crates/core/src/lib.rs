//! Allocation-only building blocks for mining social-media corpora.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs: file parsing, clocks and threads live in the
//! `tagscope` companion crate.
//!
//! Modules:
//! - [`corpus`]: the document model and corpus invariants.
//! - [`text`]: tokenization, stopwords and keyword families.
//! - [`ngram`]: tag counts, tag co-occurrence pairs and token 2-grams.
//! - [`graph`]: thresholded co-occurrence networks and their clusters.
//! - [`timeline`]: cumulative daily series and curve-shape classification.
//! - [`coding`]: keyword-taxonomy content coding and pronoun orientation.
//! - [`sentiment`]: dual-scale lexicon scoring and frequency-weighted power.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod coding;
pub mod corpus;
pub mod graph;
pub mod ngram;
pub mod sentiment;
pub mod text;
pub mod timeline;

pub use corpus::{Corpus, CorpusError, Document, Source, Window};
pub use ngram::{CountTable, TagPair, TokenPair};
pub use text::{KeywordFamily, MatchMode, StopwordList, Token};
