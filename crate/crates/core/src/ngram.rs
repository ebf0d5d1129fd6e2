//! Frequency tables for tags, tag pairs and token n-grams.
//!
//! All counters take document slices so callers can shard a corpus and
//! [`CountTable::merge`] the partial tables; the merge is commutative and
//! associative, and the table is backed by a `BTreeMap` so the result does
//! not depend on shard boundaries.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::corpus::Document;
use crate::text::{content_tokens, KeywordFamily, StopwordList};

/// Key of a count table, viewed as one or more text columns.
pub trait CountKey: Ord + Clone {
    fn parts(&self) -> Vec<&str>;
}

impl CountKey for String {
    fn parts(&self) -> Vec<&str> {
        alloc::vec![self.as_str()]
    }
}

impl CountKey for Vec<String> {
    fn parts(&self) -> Vec<&str> {
        self.iter().map(String::as_str).collect()
    }
}

/// Unordered pair of distinct tags, stored as `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagPair {
    a: String,
    b: String,
}

impl TagPair {
    /// Canonicalizes the pair; `None` for a self-pair.
    pub fn new(x: impl Into<String>, y: impl Into<String>) -> Option<Self> {
        let (x, y) = (x.into(), y.into());
        match x.cmp(&y) {
            Ordering::Less => Some(TagPair { a: x, b: y }),
            Ordering::Greater => Some(TagPair { a: y, b: x }),
            Ordering::Equal => None,
        }
    }

    pub fn a(&self) -> &str {
        &self.a
    }

    pub fn b(&self) -> &str {
        &self.b
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.a == tag || self.b == tag
    }
}

impl fmt::Display for TagPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.a, self.b)
    }
}

impl CountKey for TagPair {
    fn parts(&self) -> Vec<&str> {
        alloc::vec![self.a.as_str(), self.b.as_str()]
    }
}

/// Ordered pair of adjacent tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenPair {
    pub first: String,
    pub second: String,
}

impl TokenPair {
    pub fn new(first: impl Into<String>, second: impl Into<String>) -> Self {
        TokenPair {
            first: first.into(),
            second: second.into(),
        }
    }
}

impl fmt::Display for TokenPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.first, self.second)
    }
}

impl CountKey for TokenPair {
    fn parts(&self) -> Vec<&str> {
        alloc::vec![self.first.as_str(), self.second.as_str()]
    }
}

/// Key → count map; every stored count is ≥ 1 and `total` is their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable<K: Ord> {
    entries: BTreeMap<K, u64>,
    total: u64,
}

impl<K: Ord> Default for CountTable<K> {
    fn default() -> Self {
        CountTable {
            entries: BTreeMap::new(),
            total: 0,
        }
    }
}

impl<K: Ord> CountTable<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: K) {
        self.add_n(key, 1);
    }

    pub fn add_n(&mut self, key: K, n: u64) {
        if n == 0 {
            return;
        }
        *self.entries.entry(key).or_insert(0) += n;
        self.total += n;
    }

    pub fn get<Q>(&self, key: &Q) -> u64
    where
        K: core::borrow::Borrow<Q>,
        Q: Ord + ?Sized,
    {
        self.entries.get(key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&K, u64)> {
        self.entries.iter().map(|(k, &c)| (k, c))
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, u64> {
        self.entries.keys()
    }

    pub fn merge(&mut self, other: CountTable<K>) {
        for (k, c) in other.entries {
            self.add_n(k, c);
        }
    }

    /// Keeps entries whose key satisfies `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&K, u64) -> bool) {
        let mut total = 0;
        self.entries.retain(|k, c| {
            let kept = keep(k, *c);
            if kept {
                total += *c;
            }
            kept
        });
        self.total = total;
    }
}

impl<K: Ord + Clone> CountTable<K> {
    /// All entries, descending by count, ties ascending by key.
    pub fn sorted(&self) -> Vec<(K, u64)> {
        let mut items: Vec<(K, u64)> = self.entries.iter().map(|(k, &c)| (k.clone(), c)).collect();
        items.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
        items
    }

    /// The `k` most frequent entries in [`CountTable::sorted`] order.
    pub fn top_k(&self, k: usize) -> Vec<(K, u64)> {
        let mut items = self.sorted();
        items.truncate(k);
        items
    }
}

impl<K: Ord> FromIterator<K> for CountTable<K> {
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut table = CountTable::new();
        for k in iter {
            table.add(k);
        }
        table
    }
}

impl<K: Ord> Extend<(K, u64)> for CountTable<K> {
    fn extend<I: IntoIterator<Item = (K, u64)>>(&mut self, iter: I) {
        for (k, n) in iter {
            self.add_n(k, n);
        }
    }
}

pub fn top_k<K: Ord + Clone>(table: &CountTable<K>, k: usize) -> Vec<(K, u64)> {
    table.top_k(k)
}

/// One count per distinct tag per document.
pub fn count_tags(documents: &[Document]) -> CountTable<String> {
    let mut table = CountTable::new();
    for doc in documents {
        for tag in doc.distinct_tags() {
            table.add(String::from(tag));
        }
    }
    table
}

/// One count per distinct unordered tag pair per document.
pub fn count_tag_pairs(documents: &[Document]) -> CountTable<TagPair> {
    let mut table = CountTable::new();
    for doc in documents {
        let tags: Vec<&str> = doc.distinct_tags().into_iter().collect();
        for (i, a) in tags.iter().enumerate() {
            for b in &tags[i + 1..] {
                // distinct_tags is sorted and deduplicated, so a < b
                table.add(TagPair {
                    a: String::from(*a),
                    b: String::from(*b),
                });
            }
        }
    }
    table
}

/// Adjacent token pairs after stopword removal, never crossing documents.
///
/// With a `filter`, only pairs where at least one member belongs to the
/// family are counted.
pub fn count_token_2grams(
    documents: &[Document],
    stops: &StopwordList,
    filter: Option<&KeywordFamily>,
) -> CountTable<TokenPair> {
    let mut table = CountTable::new();
    for doc in documents {
        let tokens = content_tokens(&doc.text, stops);
        for w in tokens.windows(2) {
            let (x, y) = (&w[0].surface, &w[1].surface);
            if filter.is_none_or(|f| f.matches(x) || f.matches(y)) {
                table.add(TokenPair::new(x.clone(), y.clone()));
            }
        }
    }
    table
}

/// General n-gram counter over stopword-filtered tokens. `n == 0` yields
/// an empty table.
pub fn count_token_ngrams(
    documents: &[Document],
    stops: &StopwordList,
    n: usize,
    filter: Option<&KeywordFamily>,
) -> CountTable<Vec<String>> {
    let mut table = CountTable::new();
    if n == 0 {
        return table;
    }
    for doc in documents {
        let tokens = content_tokens(&doc.text, stops);
        for w in tokens.windows(n) {
            if filter.is_none_or(|f| w.iter().any(|t| f.matches(&t.surface))) {
                table.add(w.iter().map(|t| t.surface.clone()).collect());
            }
        }
    }
    table
}
