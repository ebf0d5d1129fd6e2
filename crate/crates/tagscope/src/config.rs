//! Run configuration, read from TOML.
//!
//! ```toml
//! [twitter]
//! path = "fixtures/twitter.jsonl"
//! window = "2013-05-15..2013-07-15"
//! min_tags = 2
//!
//! [forum]
//! path = "fixtures/forum.jsonl"
//!
//! [graph]
//! threshold = 2
//! cap = 100
//!
//! [stages]
//! enabled = ["tags", "pairs", "graph"]
//! ```
//!
//! Relative paths are resolved against the directory holding the config
//! file. Resource paths that are left out fall back to the built-in Polish
//! defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use tagscope_core::coding::CountMode;
use tagscope_core::text::MatchMode;
use tagscope_core::timeline::ShapeParams;

use crate::error::{Error, Result};
use crate::graph_io::GraphFormat;
use crate::ingest::InputFormat;
use crate::plot::TimelineFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Tags,
    Pairs,
    Graph,
    Timeline,
    Coding,
    Pronouns,
    Sentiment,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Tags,
        Stage::Pairs,
        Stage::Graph,
        Stage::Timeline,
        Stage::Coding,
        Stage::Pronouns,
        Stage::Sentiment,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Tags => "tags",
            Stage::Pairs => "pairs",
            Stage::Graph => "graph",
            Stage::Timeline => "timeline",
            Stage::Coding => "coding",
            Stage::Pronouns => "pronouns",
            Stage::Sentiment => "sentiment",
        }
    }

    /// Tag stages read the tweet corpus, text stages the forum corpus.
    pub fn uses_forum(self) -> bool {
        matches!(self, Stage::Coding | Stage::Pronouns | Stage::Sentiment)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Option<InputFormat>,
    #[serde(default)]
    pub window: Option<String>,
    #[serde(default = "default_min_tags")]
    pub min_tags: usize,
    /// Variant tag → canonical tag, applied before counting.
    #[serde(default)]
    pub aliases: BTreeMap<String, String>,
}

fn default_min_tags() -> usize {
    2
}

impl CorpusConfig {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        CorpusConfig {
            path: path.into(),
            format: None,
            window: None,
            min_tags: default_min_tags(),
            aliases: BTreeMap::new(),
        }
    }

    pub fn input_format(&self) -> InputFormat {
        self.format.unwrap_or_else(|| InputFormat::from_path(&self.path))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TextConfig {
    pub stopwords: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopConfig {
    /// 0 keeps every row.
    pub top: usize,
}

impl Default for TopConfig {
    fn default() -> Self {
        TopConfig { top: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    pub threshold: u64,
    /// Restrict nodes to the N most frequent tags.
    pub whitelist_top: Option<usize>,
    pub cap: Option<u64>,
    pub format: String,
    pub retain_isolates: bool,
    pub dyads: usize,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            threshold: tagscope_core::graph::DEFAULT_THRESHOLD,
            whitelist_top: None,
            cap: None,
            format: "dot".into(),
            retain_isolates: false,
            dyads: 10,
        }
    }
}

impl GraphConfig {
    pub fn graph_format(&self) -> Result<GraphFormat> {
        self.format.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimelineConfig {
    /// Tags to plot; empty means the `top` most frequent.
    pub tags: Vec<String>,
    pub top: usize,
    pub formats: Vec<String>,
    pub step_fraction: f64,
    pub burst_fraction: f64,
    pub burst_days: usize,
    pub linear_r2: f64,
    pub min_total: u64,
}

impl Default for TimelineConfig {
    fn default() -> Self {
        let p = ShapeParams::default();
        TimelineConfig {
            tags: Vec::new(),
            top: 5,
            formats: vec!["csv".into(), "svg".into()],
            step_fraction: p.step_fraction,
            burst_fraction: p.burst_fraction,
            burst_days: p.burst_days,
            linear_r2: p.linear_r2,
            min_total: p.min_total,
        }
    }
}

impl TimelineConfig {
    pub fn shape_params(&self) -> ShapeParams {
        ShapeParams {
            step_fraction: self.step_fraction,
            burst_fraction: self.burst_fraction,
            burst_days: self.burst_days,
            linear_r2: self.linear_r2,
            min_total: self.min_total,
        }
    }

    pub fn timeline_formats(&self) -> Result<Vec<TimelineFormat>> {
        self.formats.iter().map(|f| f.parse()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodingConfig {
    pub taxonomy: Option<PathBuf>,
    pub min_freq: u64,
    /// `unique` or `occurrences`.
    pub count_mode: String,
}

impl Default for CodingConfig {
    fn default() -> Self {
        CodingConfig {
            taxonomy: None,
            min_freq: 1,
            count_mode: "unique".into(),
        }
    }
}

impl CodingConfig {
    pub fn mode(&self) -> Result<CountMode> {
        match self.count_mode.as_str() {
            "unique" => Ok(CountMode::UniqueWords),
            "occurrences" => Ok(CountMode::Occurrences),
            other => Err(Error::Config(format!(
                "coding.count_mode must be `unique` or `occurrences`, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PronounsConfig {
    pub groups: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SentimentConfig {
    pub lexicon: Option<PathBuf>,
    /// Only 2-grams touching this family are scored; empty disables.
    pub filter: String,
    pub filter_mode: String,
    pub min_freq: u64,
}

impl Default for SentimentConfig {
    fn default() -> Self {
        SentimentConfig {
            lexicon: None,
            filter: "policj".into(),
            filter_mode: "prefix".into(),
            min_freq: 2,
        }
    }
}

impl SentimentConfig {
    pub fn filter_mode(&self) -> Result<MatchMode> {
        MatchMode::parse(&self.filter_mode).ok_or_else(|| {
            Error::Config(format!(
                "sentiment.filter_mode must be `prefix` or `exact`, got {:?}",
                self.filter_mode
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("runs") }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StagesConfig {
    pub enabled: Vec<Stage>,
}

impl Default for StagesConfig {
    fn default() -> Self {
        StagesConfig {
            enabled: Stage::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub twitter: Option<CorpusConfig>,
    pub forum: Option<CorpusConfig>,
    pub text: TextConfig,
    pub tags: TopConfig,
    pub pairs: TopConfig,
    pub graph: GraphConfig,
    pub timeline: TimelineConfig,
    pub coding: CodingConfig,
    pub pronouns: PronounsConfig,
    pub sentiment: SentimentConfig,
    pub output: OutputConfig,
    pub stages: StagesConfig,
    /// Worker threads for counting. Never part of the digest.
    #[serde(skip)]
    pub jobs: usize,
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl Config {
    pub fn parse(text: &str, base: &Path) -> Result<Config> {
        let mut config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.resolve_paths(base);
        config.jobs = 1;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(Error::read(path))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Config::parse(&text, base)
    }

    fn resolve_paths(&mut self, base: &Path) {
        for c in [&mut self.twitter, &mut self.forum].into_iter().flatten() {
            resolve(base, &mut c.path);
        }
        for p in [
            &mut self.text.stopwords,
            &mut self.coding.taxonomy,
            &mut self.pronouns.groups,
            &mut self.sentiment.lexicon,
        ]
        .into_iter()
        .flatten()
        {
            resolve(base, p);
        }
        resolve(base, &mut self.output.dir);
    }

    pub fn stage_enabled(&self, stage: Stage) -> bool {
        self.stages.enabled.contains(&stage)
    }

    /// Rejects settings that would only fail halfway through a run.
    pub fn validate(&self) -> Result<()> {
        let stages = &self.stages.enabled;
        if stages.iter().any(|s| !s.uses_forum()) && self.twitter.is_none() {
            return Err(Error::Config("tag stages need a [twitter] section".into()));
        }
        if stages.iter().any(|s| s.uses_forum()) && self.forum.is_none() {
            return Err(Error::Config("text stages need a [forum] section".into()));
        }
        if self.graph.threshold == 0 {
            return Err(Error::Config("graph.threshold must be at least 1".into()));
        }
        self.graph.graph_format()?;
        self.timeline.timeline_formats()?;
        self.coding.mode()?;
        self.sentiment.filter_mode()?;
        for c in [&self.twitter, &self.forum].into_iter().flatten() {
            if let Some(w) = &c.window {
                crate::ingest::parse_window(w)?;
            }
        }
        Ok(())
    }

    /// Canonical form used for the config digest: every file path is
    /// replaced by the SHA-256 of its contents, and the output directory
    /// and thread count are left out, so the digest moves only when an
    /// input that affects results moves.
    pub fn effective(&self) -> Result<Value> {
        let mut v = serde_json::to_value(self).map_err(|e| Error::Data(e.to_string()))?;
        if let Value::Object(map) = &mut v {
            map.remove("output");
        }
        for pointer in [
            "/twitter/path",
            "/forum/path",
            "/text/stopwords",
            "/coding/taxonomy",
            "/pronouns/groups",
            "/sentiment/lexicon",
        ] {
            if let Some(slot) = v.pointer_mut(pointer) {
                if let Value::String(path) = slot {
                    *slot = Value::String(format!("sha256:{}", file_digest(Path::new(path))?));
                }
            }
        }
        Ok(v)
    }

    pub fn digest(&self) -> Result<String> {
        Ok(sha256_hex(self.effective()?.to_string().as_bytes()))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(Error::read(path))?;
    Ok(sha256_hex(&bytes))
}
