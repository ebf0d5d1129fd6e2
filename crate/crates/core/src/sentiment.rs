//! Dual-scale lexicon sentiment and frequency-weighted power.
//!
//! A text gets a positive score in 1..=5 (1 + the strongest positive boost
//! matched) and a negative score in -5..=-1 (-1 - the strongest negative
//! boost matched). Their sum is the strength, always in -4..=4, and 0 for a
//! text without lexicon hits.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ngram::{CountTable, TokenPair};
use crate::text::{tokenize, MatchMode, Token};

pub const MAX_BOOST: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "positive" | "pos" | "+" => Some(Polarity::Positive),
            "negative" | "neg" | "-" => Some(Polarity::Negative),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexiconEntry {
    pub polarity: Polarity,
    pub boost: u8,
    pub mode: MatchMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconError {
    BoostOutOfRange { stem: String, boost: u8 },
    DuplicateStem(String),
    EmptyStem,
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::BoostOutOfRange { stem, boost } => {
                write!(f, "boost {boost} for {stem:?} is outside 0..={MAX_BOOST}")
            }
            LexiconError::DuplicateStem(s) => write!(f, "stem {s:?} listed twice"),
            LexiconError::EmptyStem => f.write_str("empty lexicon stem"),
        }
    }
}

impl core::error::Error for LexiconError {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, LexiconEntry>,
}

impl SentimentLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, stem: &str, entry: LexiconEntry) -> Result<(), LexiconError> {
        let stem: String = stem.trim().chars().flat_map(char::to_lowercase).collect();
        if stem.is_empty() {
            return Err(LexiconError::EmptyStem);
        }
        if entry.boost > MAX_BOOST {
            return Err(LexiconError::BoostOutOfRange {
                stem,
                boost: entry.boost,
            });
        }
        if self.entries.contains_key(&stem) {
            return Err(LexiconError::DuplicateStem(stem));
        }
        self.entries.insert(stem, entry);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LexiconEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Entries matching `surface`: the exact entry plus every prefix entry
    /// whose stem starts the surface.
    pub fn lookup<'a>(&'a self, surface: &'a str) -> impl Iterator<Item = &'a LexiconEntry> + 'a {
        surface
            .char_indices()
            .map(|(i, _)| i)
            .skip(1)
            .chain(core::iter::once(surface.len()))
            .filter_map(move |end| {
                let e = self.entries.get(&surface[..end])?;
                (e.mode == MatchMode::Prefix || end == surface.len()).then_some(e)
            })
    }
}

/// Positive/negative halves of a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualScore {
    pub positive: i8,
    pub negative: i8,
}

impl DualScore {
    pub fn strength(&self) -> i8 {
        self.positive + self.negative
    }
}

pub fn dual_score(tokens: &[Token], lexicon: &SentimentLexicon) -> DualScore {
    let (mut pos, mut neg): (Option<u8>, Option<u8>) = (None, None);
    for t in tokens {
        for e in lexicon.lookup(&t.surface) {
            let slot = match e.polarity {
                Polarity::Positive => &mut pos,
                Polarity::Negative => &mut neg,
            };
            *slot = Some(slot.map_or(e.boost, |b| b.max(e.boost)));
        }
    }
    DualScore {
        positive: 1 + pos.unwrap_or(0) as i8,
        negative: -1 - neg.unwrap_or(0) as i8,
    }
}

/// Strength in -4..=4.
pub fn score_text(tokens: &[Token], lexicon: &SentimentLexicon) -> i8 {
    dual_score(tokens, lexicon).strength()
}

pub fn score_str(text: &str, lexicon: &SentimentLexicon) -> i8 {
    score_text(&tokenize(text), lexicon)
}

pub fn score_pair(pair: &TokenPair, lexicon: &SentimentLexicon) -> i8 {
    score_text(
        &[Token::new(pair.first.clone(), 0), Token::new(pair.second.clone(), 1)],
        lexicon,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredNGram {
    pub ngram: TokenPair,
    pub frequency: u64,
    pub strength: i8,
    /// frequency × strength
    pub power: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PowerReport {
    pub rows: Vec<ScoredNGram>,
    pub sum_power: i64,
}

/// Scores every 2-gram seen at least `min_freq` times. Rows are ordered by
/// frequency (descending), then by 2-gram.
pub fn power_report(table: &CountTable<TokenPair>, lexicon: &SentimentLexicon, min_freq: u64) -> PowerReport {
    let rows: Vec<ScoredNGram> = table
        .sorted()
        .into_iter()
        .filter(|(_, f)| *f >= min_freq)
        .map(|(ngram, frequency)| {
            let strength = score_pair(&ngram, lexicon);
            ScoredNGram {
                power: frequency as i64 * strength as i64,
                ngram,
                frequency,
                strength,
            }
        })
        .collect();
    let sum_power = rows.iter().map(|r| r.power).sum();
    PowerReport { rows, sum_power }
}
