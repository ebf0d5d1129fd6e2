//! Canonical document model.
//!
//! Timestamps are Unix seconds (UTC). A [`Corpus`] is always sorted by
//! `(timestamp, id)`, has unique ids, and only holds documents inside its
//! window.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub const SECONDS_PER_DAY: i64 = 86_400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Tweet,
    ForumPost,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Tweet => "tweet",
            Source::ForumPost => "forum_post",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "tweet" => Some(Source::Tweet),
            "forum_post" => Some(Source::ForumPost),
            _ => None,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One tweet or forum post.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    /// Unix seconds, UTC.
    pub timestamp: i64,
    pub text: String,
    /// Normalized tags in record order. Duplicates are kept; counting
    /// treats them as one.
    pub hashtags: Vec<String>,
    pub lang: Option<String>,
    pub source: Source,
}

impl Document {
    /// Distinct tags, sorted.
    pub fn distinct_tags(&self) -> BTreeSet<&str> {
        self.hashtags.iter().map(String::as_str).collect()
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.hashtags.iter().any(|t| t == tag)
    }

    /// Day index (days since the Unix epoch) of the timestamp.
    pub fn day(&self) -> i64 {
        day_of(self.timestamp)
    }
}

pub fn day_of(timestamp: i64) -> i64 {
    timestamp.div_euclid(SECONDS_PER_DAY)
}

/// Lowercases a raw tag and strips leading `#` characters.
///
/// Returns `None` when nothing usable is left or the tag still carries
/// whitespace or an inner `#`.
pub fn normalize_tag(raw: &str) -> Option<String> {
    let trimmed = raw.trim().trim_start_matches('#');
    if trimmed.is_empty() || trimmed.chars().any(|c| c.is_whitespace() || c == '#') {
        return None;
    }
    Some(trimmed.chars().flat_map(char::to_lowercase).collect())
}

pub fn is_normalized_tag(tag: &str) -> bool {
    normalize_tag(tag).as_deref() == Some(tag)
}

/// Inclusive time window in Unix seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    start: i64,
    end: i64,
}

impl Window {
    pub fn new(start: i64, end: i64) -> Result<Self, CorpusError> {
        if start > end {
            return Err(CorpusError::InvertedWindow { start, end });
        }
        Ok(Window { start, end })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    pub fn contains(&self, timestamp: i64) -> bool {
        (self.start..=self.end).contains(&timestamp)
    }

    pub fn first_day(&self) -> i64 {
        day_of(self.start)
    }

    pub fn last_day(&self) -> i64 {
        day_of(self.end)
    }

    /// Number of calendar days touched by the window.
    pub fn days(&self) -> usize {
        (self.last_day() - self.first_day() + 1) as usize
    }

    /// Smallest window covering all timestamps, or `None` for an empty input.
    pub fn covering(timestamps: impl IntoIterator<Item = i64>) -> Option<Self> {
        let mut it = timestamps.into_iter();
        let first = it.next()?;
        let (lo, hi) = it.fold((first, first), |(lo, hi), t| (lo.min(t), hi.max(t)));
        Some(Window { start: lo, end: hi })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    EmptyId { index: usize },
    DuplicateId(String),
    BadTag { id: String, tag: String },
    OutsideWindow { id: String, timestamp: i64 },
    InvertedWindow { start: i64, end: i64 },
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::EmptyId { index } => write!(f, "document #{index} has an empty id"),
            CorpusError::DuplicateId(id) => write!(f, "duplicate document id {id:?}"),
            CorpusError::BadTag { id, tag } => {
                write!(f, "document {id:?} carries a non-normalized hashtag {tag:?}")
            }
            CorpusError::OutsideWindow { id, timestamp } => {
                write!(f, "document {id:?} timestamp {timestamp} lies outside the corpus window")
            }
            CorpusError::InvertedWindow { start, end } => {
                write!(f, "window start {start} is after end {end}")
            }
        }
    }
}

impl core::error::Error for CorpusError {}

/// Validated, sorted, immutable set of documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
    window: Window,
}

impl Corpus {
    /// Validates and sorts `documents`. Every document must already lie in
    /// `window` and carry normalized tags; dropping out-of-window records is
    /// the loader's job.
    pub fn new(mut documents: Vec<Document>, window: Window) -> Result<Self, CorpusError> {
        let mut seen = BTreeSet::new();
        for (index, doc) in documents.iter().enumerate() {
            if doc.id.is_empty() {
                return Err(CorpusError::EmptyId { index });
            }
            if !seen.insert(doc.id.as_str()) {
                return Err(CorpusError::DuplicateId(doc.id.clone()));
            }
            if let Some(tag) = doc.hashtags.iter().find(|t| !is_normalized_tag(t)) {
                return Err(CorpusError::BadTag {
                    id: doc.id.clone(),
                    tag: tag.clone(),
                });
            }
            if !window.contains(doc.timestamp) {
                return Err(CorpusError::OutsideWindow {
                    id: doc.id.clone(),
                    timestamp: doc.timestamp,
                });
            }
        }
        documents.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));
        Ok(Corpus { documents, window })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn into_documents(self) -> Vec<Document> {
        self.documents
    }

    /// Keeps documents carrying at least `min_tags` distinct tags.
    pub fn filter_multi_tag(&self, min_tags: usize) -> Corpus {
        Corpus {
            documents: self
                .documents
                .iter()
                .filter(|d| d.distinct_tags().len() >= min_tags)
                .cloned()
                .collect(),
            window: self.window,
        }
    }

    /// Rewrites tags through an alias map (e.g. `sthlmriot -> sthlmriots`).
    /// Alias targets are normalized; unusable targets leave the tag as is.
    pub fn with_aliases(&self, aliases: &BTreeMap<String, String>) -> Corpus {
        let documents = self
            .documents
            .iter()
            .map(|d| {
                let mut d = d.clone();
                for tag in &mut d.hashtags {
                    if let Some(target) = aliases.get(tag.as_str()).and_then(|t| normalize_tag(t)) {
                        *tag = target;
                    }
                }
                d
            })
            .collect();
        Corpus {
            documents,
            window: self.window,
        }
    }
}

/// Free-function form of [`Corpus::filter_multi_tag`].
pub fn filter_multi_tag(corpus: &Corpus, min_tags: usize) -> Corpus {
    corpus.filter_multi_tag(min_tags)
}
