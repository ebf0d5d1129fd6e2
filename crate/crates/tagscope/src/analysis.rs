//! Config-driven wrappers around the core operations, shared by the CLI
//! subcommands and the pipeline so both produce the same numbers.

use std::collections::BTreeSet;

use tagscope_core::coding::{code_vocabulary, pronoun_orientation, CodingResult, PronounGroups, PronounReport, Taxonomy};
use tagscope_core::corpus::Corpus;
use tagscope_core::graph::{build_graph, BuildOptions, CooccurrenceGraph};
use tagscope_core::ngram::{CountTable, TagPair};
use tagscope_core::sentiment::{power_report, PowerReport, SentimentLexicon};
use tagscope_core::text::{KeywordFamily, StopwordList};
use tagscope_core::timeline::{classify_shape, cumulative_series, CumulativeSeries, ShapeVerdict};

use crate::config::{Config, CorpusConfig};
use crate::error::{Error, Result};
use crate::formats;
use crate::ingest::{load_corpus, parse_window, LoadReport};
use crate::parallel;

/// Loads a corpus section and applies its aliases. The multi-tag filter is
/// left to the caller.
pub fn load_section(section: &CorpusConfig) -> Result<(Corpus, LoadReport)> {
    let window = section.window.as_deref().map(parse_window).transpose()?;
    let (corpus, report) = load_corpus(&section.path, section.input_format(), window)?;
    let corpus = if section.aliases.is_empty() {
        corpus
    } else {
        corpus.with_aliases(&section.aliases)
    };
    Ok((corpus, report))
}

fn section<'a>(section: &'a Option<CorpusConfig>, name: &str) -> Result<&'a CorpusConfig> {
    section
        .as_ref()
        .ok_or_else(|| Error::Config(format!("no [{name}] corpus configured")))
}

/// The tweet corpus restricted to documents with at least `min_tags` tags.
pub fn load_twitter(config: &Config) -> Result<(Corpus, LoadReport)> {
    let s = section(&config.twitter, "twitter")?;
    let (corpus, report) = load_section(s)?;
    Ok((corpus.filter_multi_tag(s.min_tags), report))
}

pub fn load_forum(config: &Config) -> Result<(Corpus, LoadReport)> {
    load_section(section(&config.forum, "forum")?)
}

pub fn stopwords(config: &Config) -> Result<StopwordList> {
    match &config.text.stopwords {
        Some(p) => formats::load_stopwords(p),
        None => Ok(formats::default_stopwords()),
    }
}

pub fn taxonomy(config: &Config) -> Result<Taxonomy> {
    match &config.coding.taxonomy {
        Some(p) => formats::load_taxonomy(p),
        None => Ok(formats::default_taxonomy()),
    }
}

pub fn pronoun_groups(config: &Config) -> Result<PronounGroups> {
    match &config.pronouns.groups {
        Some(p) => formats::load_pronouns(p),
        None => Ok(formats::default_pronouns()),
    }
}

pub fn lexicon(config: &Config) -> Result<SentimentLexicon> {
    match &config.sentiment.lexicon {
        Some(p) => formats::load_lexicon(p),
        None => Ok(formats::default_lexicon()),
    }
}

fn limit<K: Ord + Clone>(table: &CountTable<K>, top: usize) -> Vec<(K, u64)> {
    if top == 0 {
        table.sorted()
    } else {
        table.top_k(top)
    }
}

pub fn tag_counts(config: &Config, corpus: &Corpus) -> CountTable<String> {
    parallel::count_tags(corpus.documents(), config.jobs)
}

pub fn top_tags(config: &Config, corpus: &Corpus) -> Vec<(String, u64)> {
    limit(&tag_counts(config, corpus), config.tags.top)
}

pub fn pair_counts(config: &Config, corpus: &Corpus) -> CountTable<TagPair> {
    parallel::count_tag_pairs(corpus.documents(), config.jobs)
}

pub fn top_pairs(config: &Config, corpus: &Corpus) -> Vec<(TagPair, u64)> {
    limit(&pair_counts(config, corpus), config.pairs.top)
}

pub fn graph(config: &Config, corpus: &Corpus) -> Result<CooccurrenceGraph> {
    let g = &config.graph;
    let whitelist: Option<BTreeSet<String>> = g
        .whitelist_top
        .map(|n| tag_counts(config, corpus).top_k(n).into_iter().map(|(t, _)| t).collect());
    let opts = BuildOptions {
        whitelist: whitelist.as_ref(),
        retain_isolates: g.retain_isolates,
    };
    build_graph(&pair_counts(config, corpus), g.threshold, &opts).map_err(|e| Error::Config(e.to_string()))
}

/// Tags to plot: the configured list, else the most frequent ones.
pub fn timeline_tags(config: &Config, corpus: &Corpus) -> Vec<String> {
    if !config.timeline.tags.is_empty() {
        let mut tags: Vec<String> = config.timeline.tags.iter().map(|t| t.to_lowercase()).collect();
        tags.sort();
        tags.dedup();
        return tags;
    }
    let mut tags: Vec<String> = tag_counts(config, corpus)
        .top_k(config.timeline.top)
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    tags.sort();
    tags
}

pub fn timeline(config: &Config, corpus: &Corpus) -> Vec<(CumulativeSeries, ShapeVerdict)> {
    let params = config.timeline.shape_params();
    timeline_tags(config, corpus)
        .iter()
        .map(|t| {
            let s = cumulative_series(corpus, t);
            let v = classify_shape(&s, &params);
            (s, v)
        })
        .collect()
}

pub fn coding(config: &Config, corpus: &Corpus, taxonomy: &Taxonomy) -> Result<CodingResult> {
    Ok(code_vocabulary(
        corpus.documents(),
        taxonomy,
        &stopwords(config)?,
        config.coding.min_freq,
        config.coding.mode()?,
    ))
}

pub fn pronouns(config: &Config, corpus: &Corpus) -> Result<PronounReport> {
    Ok(pronoun_orientation(corpus.documents(), &pronoun_groups(config)?))
}

pub fn sentiment(config: &Config, corpus: &Corpus) -> Result<PowerReport> {
    let s = &config.sentiment;
    let family = if s.filter.is_empty() {
        None
    } else {
        Some(KeywordFamily::new(&s.filter, s.filter_mode()?).map_err(|e| Error::Config(format!("sentiment.filter: {e}")))?)
    };
    let table = parallel::count_token_2grams(corpus.documents(), &stopwords(config)?, family.as_ref(), config.jobs);
    Ok(power_report(&table, &lexicon(config)?, s.min_freq))
}
