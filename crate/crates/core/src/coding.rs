//! Keyword-taxonomy content coding and pronoun orientation.
//!
//! A [`Taxonomy`] is a two-level tree of categories (`"6"`) and
//! subcategories (`"6.0"`, `"6.1"`), each owning keyword families. Coding
//! assigns every distinct vocabulary word to the first family, in taxonomy
//! order, that matches it; category sizes are unique-word counts unless
//! [`CountMode::Occurrences`] is requested.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::corpus::Document;
use crate::text::{words, KeywordFamily, StopwordList};

/// `major` or `major.minor`. Orders numerically, parents before children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryId {
    major: u32,
    minor: Option<u32>,
}

impl CategoryId {
    pub fn top(major: u32) -> Self {
        CategoryId { major, minor: None }
    }

    pub fn sub(major: u32, minor: u32) -> Self {
        CategoryId {
            major,
            minor: Some(minor),
        }
    }

    pub fn major(&self) -> u32 {
        self.major
    }

    pub fn is_top_level(&self) -> bool {
        self.minor.is_none()
    }

    pub fn parent(&self) -> Option<CategoryId> {
        self.minor.map(|_| CategoryId::top(self.major))
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.minor {
            Some(m) => write!(f, "{}.{}", self.major, m),
            None => write!(f, "{}", self.major),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadCategoryId(pub String);

impl fmt::Display for BadCategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid category id {:?}", self.0)
    }
}

impl FromStr for CategoryId {
    type Err = BadCategoryId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadCategoryId(String::from(s));
        let digits = |p: &str| -> Result<u32, BadCategoryId> {
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            p.parse().map_err(|_| bad())
        };
        match s.split_once('.') {
            Some((major, minor)) => Ok(CategoryId::sub(digits(major)?, digits(minor)?)),
            None => Ok(CategoryId::top(digits(s)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    pub id: CategoryId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyEntry {
    pub family: KeywordFamily,
    pub category: CategoryId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaxonomyError {
    DuplicateCategory(CategoryId),
    OrphanSubcategory(CategoryId),
    UnknownCategory { id: CategoryId, stem: String },
    DuplicateFamily { stem: String, first: CategoryId, second: CategoryId },
}

impl fmt::Display for TaxonomyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaxonomyError::DuplicateCategory(id) => write!(f, "category {id} declared twice"),
            TaxonomyError::OrphanSubcategory(id) => {
                write!(f, "subcategory {id} has no parent category declared")
            }
            TaxonomyError::UnknownCategory { id, stem } => {
                write!(f, "family {stem:?} refers to undeclared category {id}")
            }
            TaxonomyError::DuplicateFamily { stem, first, second } => {
                write!(f, "family {stem:?} appears in both {first} and {second}")
            }
        }
    }
}

impl core::error::Error for TaxonomyError {}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Taxonomy {
    categories: Vec<Category>,
    families: Vec<FamilyEntry>,
}

impl Taxonomy {
    /// Validates ids, parents and family uniqueness. `families` keeps its
    /// order; that order decides overlapping matches.
    pub fn new(categories: Vec<Category>, families: Vec<FamilyEntry>) -> Result<Self, TaxonomyError> {
        let mut ids = BTreeSet::new();
        for c in &categories {
            if !ids.insert(c.id) {
                return Err(TaxonomyError::DuplicateCategory(c.id));
            }
        }
        for c in &categories {
            if let Some(parent) = c.id.parent() {
                if !ids.contains(&parent) {
                    return Err(TaxonomyError::OrphanSubcategory(c.id));
                }
            }
        }
        let mut stems: BTreeMap<&str, CategoryId> = BTreeMap::new();
        for f in &families {
            if !ids.contains(&f.category) {
                return Err(TaxonomyError::UnknownCategory {
                    id: f.category,
                    stem: String::from(f.family.stem()),
                });
            }
            if let Some(&first) = stems.get(f.family.stem()) {
                return Err(TaxonomyError::DuplicateFamily {
                    stem: String::from(f.family.stem()),
                    first,
                    second: f.category,
                });
            }
            stems.insert(f.family.stem(), f.category);
        }
        Ok(Taxonomy { categories, families })
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn families(&self) -> &[FamilyEntry] {
        &self.families
    }

    pub fn category(&self, id: CategoryId) -> Option<&Category> {
        self.categories.iter().find(|c| c.id == id)
    }

    pub fn top_level(&self) -> impl Iterator<Item = &Category> {
        self.categories.iter().filter(|c| c.id.is_top_level())
    }

    pub fn subcategories(&self) -> impl Iterator<Item = &Category> {
        self.categories.iter().filter(|c| !c.id.is_top_level())
    }

    pub fn children(&self, parent: CategoryId) -> impl Iterator<Item = &Category> {
        self.categories
            .iter()
            .filter(move |c| c.id.parent() == Some(parent))
    }

    /// Categories of every family matching `surface`, in taxonomy order.
    pub fn matches(&self, surface: &str) -> Vec<CategoryId> {
        self.families
            .iter()
            .filter(|f| f.family.matches(surface))
            .map(|f| f.category)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountMode {
    /// Number of distinct words coded into the category.
    #[default]
    UniqueWords,
    /// Sum of corpus occurrences of those words.
    Occurrences,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CategoryTally {
    pub unique_words: BTreeSet<String>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CodingResult {
    /// One entry per taxonomy category, including empty ones.
    pub per_category: BTreeMap<CategoryId, CategoryTally>,
    pub uncategorized: BTreeSet<String>,
    pub vocabulary_size: usize,
    /// Words that matched more than one family, with every matching category.
    pub ambiguous: BTreeMap<String, Vec<CategoryId>>,
}

impl CodingResult {
    pub fn categorized(&self) -> usize {
        self.per_category.values().map(|t| t.unique_words.len()).sum()
    }
}

/// Distinct non-stopword surfaces and their occurrence counts.
pub fn vocabulary(documents: &[Document], stops: &StopwordList) -> BTreeMap<String, u64> {
    let mut vocab = BTreeMap::new();
    for doc in documents {
        for w in words(&doc.text) {
            if !stops.contains(&w) {
                *vocab.entry(w).or_insert(0) += 1;
            }
        }
    }
    vocab
}

/// Codes the vocabulary of `documents` (words seen at least `min_freq`
/// times) against `taxonomy`.
pub fn code_vocabulary(
    documents: &[Document],
    taxonomy: &Taxonomy,
    stops: &StopwordList,
    min_freq: u64,
    mode: CountMode,
) -> CodingResult {
    code_frequencies(&vocabulary(documents, stops), taxonomy, min_freq, mode)
}

/// Same as [`code_vocabulary`] for an already merged vocabulary.
pub fn code_frequencies(
    vocab: &BTreeMap<String, u64>,
    taxonomy: &Taxonomy,
    min_freq: u64,
    mode: CountMode,
) -> CodingResult {
    let mut result = CodingResult {
        per_category: taxonomy
            .categories
            .iter()
            .map(|c| (c.id, CategoryTally::default()))
            .collect(),
        ..CodingResult::default()
    };
    for (word, &freq) in vocab.iter().filter(|(_, &f)| f >= min_freq) {
        result.vocabulary_size += 1;
        let hits = taxonomy.matches(word);
        let Some(&first) = hits.first() else {
            result.uncategorized.insert(word.clone());
            continue;
        };
        if hits.len() > 1 {
            result.ambiguous.insert(word.clone(), hits);
        }
        let tally = result.per_category.entry(first).or_default();
        tally.unique_words.insert(word.clone());
        tally.count += match mode {
            CountMode::UniqueWords => 1,
            CountMode::Occurrences => freq,
        };
    }
    result
}

/// Parent categories get their own count plus their subcategories'.
pub fn rollup(result: &CodingResult, taxonomy: &Taxonomy) -> BTreeMap<CategoryId, u64> {
    let own = |id: CategoryId| result.per_category.get(&id).map_or(0, |t| t.count);
    taxonomy
        .categories
        .iter()
        .map(|c| {
            let total = if c.id.is_top_level() {
                own(c.id) + taxonomy.children(c.id).map(|s| own(s.id)).sum::<u64>()
            } else {
                own(c.id)
            };
            (c.id, total)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PronounGroup {
    Them,
    Us,
}

impl PronounGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            PronounGroup::Them => "them",
            PronounGroup::Us => "us",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "them" => Some(PronounGroup::Them),
            "us" => Some(PronounGroup::Us),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounRow {
    pub label: String,
    pub surfaces: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlappingPronoun(pub String);

impl fmt::Display for OverlappingPronoun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pronoun {:?} is listed more than once", self.0)
    }
}

impl core::error::Error for OverlappingPronoun {}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PronounGroups {
    them: Vec<PronounRow>,
    us: Vec<PronounRow>,
}

impl PronounGroups {
    /// Every surface may appear only once across both groups.
    pub fn new(them: Vec<PronounRow>, us: Vec<PronounRow>) -> Result<Self, OverlappingPronoun> {
        let mut seen = BTreeSet::new();
        for s in them.iter().chain(&us).flat_map(|r| &r.surfaces) {
            if !seen.insert(s.as_str()) {
                return Err(OverlappingPronoun(s.clone()));
            }
        }
        Ok(PronounGroups { them, us })
    }

    pub fn group(&self, group: PronounGroup) -> &[PronounRow] {
        match group {
            PronounGroup::Them => &self.them,
            PronounGroup::Us => &self.us,
        }
    }

    fn rows(&self) -> impl Iterator<Item = (PronounGroup, &PronounRow)> {
        self.them
            .iter()
            .map(|r| (PronounGroup::Them, r))
            .chain(self.us.iter().map(|r| (PronounGroup::Us, r)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounCount {
    pub group: PronounGroup,
    pub label: String,
    pub surface: String,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    /// The "us" total was zero.
    Infinite,
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(r) => write!(f, "{r:.3}"),
            Ratio::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PronounReport {
    /// One row per listed surface, in groups-file order.
    pub rows: Vec<PronounCount>,
    pub them_total: u64,
    pub us_total: u64,
    pub ratio: Ratio,
}

impl PronounReport {
    pub fn count(&self, surface: &str) -> u64 {
        self.rows
            .iter()
            .find(|r| r.surface == surface)
            .map_or(0, |r| r.count)
    }
}

/// Raw occurrence counts of every listed pronoun; stopwords are not removed.
pub fn pronoun_orientation(documents: &[Document], groups: &PronounGroups) -> PronounReport {
    let mut counts: BTreeMap<&str, u64> = groups
        .rows()
        .flat_map(|(_, r)| r.surfaces.iter().map(|s| (s.as_str(), 0)))
        .collect();
    for doc in documents {
        for w in words(&doc.text) {
            if let Some(c) = counts.get_mut(w.as_str()) {
                *c += 1;
            }
        }
    }
    let rows: Vec<PronounCount> = groups
        .rows()
        .flat_map(|(group, row)| {
            let counts = &counts;
            row.surfaces.iter().map(move |s| PronounCount {
                group,
                label: row.label.clone(),
                surface: s.clone(),
                count: counts[s.as_str()],
            })
        })
        .collect();
    let total = |g| rows.iter().filter(|r| r.group == g).map(|r| r.count).sum::<u64>();
    let (them_total, us_total) = (total(PronounGroup::Them), total(PronounGroup::Us));
    let ratio = if us_total == 0 {
        Ratio::Infinite
    } else {
        Ratio::Finite(them_total as f64 / us_total as f64)
    };
    PronounReport {
        rows,
        them_total,
        us_total,
        ratio,
    }
}
