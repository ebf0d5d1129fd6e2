//! End-to-end runs: every enabled stage writes its artifacts into a run
//! directory named after the config digest, plus a `manifest.json`.
//!
//! Artifacts are written to a staging directory first and moved into
//! place only when every stage succeeded; a failed run leaves nothing
//! behind.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use serde::Serialize;
use tagscope_core::corpus::Corpus;

use crate::analysis;
use crate::config::{file_digest, sha256_hex, Config, Stage};
use crate::error::{Error, Result};
use crate::graph_io::export_graph;
use crate::plot::export_timeline;
use crate::tables;

pub const MANIFEST_FILE: &str = "manifest.json";

static STAGING_SEQ: AtomicUsize = AtomicUsize::new(0);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputEntry {
    pub name: String,
    /// Relative to the run directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub corpus_digest: String,
    pub config_digest: String,
    pub stages: Vec<Stage>,
    pub outputs: Vec<OutputEntry>,
    /// Wall-clock time per stage. Kept out of `manifest.json` so that the
    /// file is identical across reruns.
    #[serde(skip)]
    pub timings: Vec<(Stage, Duration)>,
    #[serde(skip)]
    pub run_dir: PathBuf,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

struct Artifact {
    name: String,
    file: String,
    bytes: Vec<u8>,
}

fn artifact(name: impl Into<String>, file: impl Into<String>, text: String) -> Artifact {
    Artifact {
        name: name.into(),
        file: file.into(),
        bytes: text.into_bytes(),
    }
}

fn run_stage(stage: Stage, config: &Config, twitter: Option<&Corpus>, forum: Option<&Corpus>) -> Result<Vec<Artifact>> {
    fn need(c: Option<&Corpus>) -> Result<&Corpus> {
        c.ok_or_else(|| Error::Config("stage has no corpus".into()))
    }
    Ok(match stage {
        Stage::Tags => {
            let rows = analysis::top_tags(config, need(twitter)?);
            vec![artifact("tag_counts", "tags.csv", tables::count_csv(&rows, &["tag"]))]
        }
        Stage::Pairs => {
            let rows = analysis::top_pairs(config, need(twitter)?);
            vec![artifact("pair_counts", "pairs.csv", tables::count_csv(&rows, &["tag_a", "tag_b"]))]
        }
        Stage::Graph => {
            let g = analysis::graph(config, need(twitter)?)?;
            let format = config.graph.graph_format()?;
            let dyads = tagscope_core::graph::dyad_report(&g, config.graph.dyads.max(1));
            let comps = tagscope_core::graph::components(&g);
            vec![
                artifact(
                    "graph",
                    format!("graph.{}", format.extension()),
                    export_graph(&g, format, config.graph.cap),
                ),
                artifact("graph_dyads", "graph_dyads.csv", tables::dyads(&dyads).to_csv()),
                artifact("graph_components", "graph_components.csv", tables::components(&comps).to_csv()),
            ]
        }
        Stage::Timeline => {
            let rows = analysis::timeline(config, need(twitter)?);
            let series: Vec<_> = rows.iter().map(|(s, _)| s.clone()).collect();
            let mut out = Vec::new();
            for format in config.timeline.timeline_formats()? {
                out.push(artifact(
                    format!("timeline_{}", format.extension()),
                    format!("timeline.{}", format.extension()),
                    export_timeline(&series, format)?,
                ));
            }
            let shapes: Vec<_> = rows.into_iter().map(|(s, v)| (s.tag.clone(), s.total, v)).collect();
            out.push(artifact("timeline_shapes", "timeline_shapes.csv", tables::shapes(&shapes).to_csv()));
            out
        }
        Stage::Coding => {
            let taxonomy = analysis::taxonomy(config)?;
            let result = analysis::coding(config, need(forum)?, &taxonomy)?;
            vec![
                artifact("coding", "coding.csv", tables::coding(&result, &taxonomy).to_csv()),
                artifact("coding_words", "coding_words.csv", tables::coded_words(&result).to_csv()),
            ]
        }
        Stage::Pronouns => {
            let report = analysis::pronouns(config, need(forum)?)?;
            vec![artifact("pronouns", "pronouns.csv", tables::pronouns(&report).to_csv())]
        }
        Stage::Sentiment => {
            let report = analysis::sentiment(config, need(forum)?)?;
            vec![artifact("sentiment_power", "sentiment.csv", tables::power(&report).to_csv())]
        }
    })
}

fn corpus_digest(config: &Config, uses_twitter: bool, uses_forum: bool) -> Result<String> {
    let mut parts = String::new();
    for (name, section, used) in [("twitter", &config.twitter, uses_twitter), ("forum", &config.forum, uses_forum)] {
        if let (Some(s), true) = (section, used) {
            parts.push_str(&format!("{name}:{}\n", file_digest(&s.path)?));
        }
    }
    Ok(sha256_hex(parts.as_bytes()))
}

fn stage_err(stage: &'static str) -> impl FnOnce(Error) -> Error {
    move |source| Error::Stage {
        stage,
        source: Box::new(source),
    }
}

/// Removes the staging directory unless disarmed.
struct Staging(Option<PathBuf>);

impl Drop for Staging {
    fn drop(&mut self) {
        if let Some(p) = self.0.take() {
            let _ = fs::remove_dir_all(p);
        }
    }
}

pub fn run_dir_for(config: &Config, config_digest: &str) -> PathBuf {
    config.output.dir.join(&config_digest[..16])
}

pub fn run_pipeline(config: &Config) -> Result<RunManifest> {
    config.validate()?;
    let stages: Vec<Stage> = Stage::ALL.into_iter().filter(|s| config.stage_enabled(*s)).collect();
    let uses_twitter = stages.iter().any(|s| !s.uses_forum());
    let uses_forum = stages.iter().any(|s| s.uses_forum());

    let corpus_digest = corpus_digest(config, uses_twitter, uses_forum).map_err(stage_err("ingest"))?;

    let twitter = if uses_twitter {
        let (c, report) = analysis::load_twitter(config).map_err(stage_err("ingest"))?;
        log::info!("twitter corpus: {} of {} records kept", report.kept, report.records_read);
        Some(c)
    } else {
        None
    };
    let forum = if uses_forum {
        let (c, report) = analysis::load_forum(config).map_err(stage_err("ingest"))?;
        log::info!("forum corpus: {} of {} records kept", report.kept, report.records_read);
        Some(c)
    } else {
        None
    };

    let config_digest = config.digest().map_err(stage_err("config"))?;
    let run_dir = run_dir_for(config, &config_digest);
    fs::create_dir_all(&config.output.dir).map_err(Error::write(&config.output.dir))?;
    let staging_path = config
        .output
        .dir
        .join(format!(
            ".{}.staging-{}-{}",
            &config_digest[..16],
            std::process::id(),
            STAGING_SEQ.fetch_add(1, Ordering::Relaxed)
        ));
    if staging_path.exists() {
        fs::remove_dir_all(&staging_path).map_err(Error::write(&staging_path))?;
    }
    fs::create_dir(&staging_path).map_err(Error::write(&staging_path))?;
    let mut staging = Staging(Some(staging_path.clone()));

    let mut outputs = Vec::new();
    let mut timings = Vec::new();
    for &stage in &stages {
        let started = Instant::now();
        let artifacts = run_stage(stage, config, twitter.as_ref(), forum.as_ref()).map_err(stage_err(stage.as_str()))?;
        for a in artifacts {
            let target = staging_path.join(&a.file);
            fs::write(&target, &a.bytes)
                .map_err(Error::write(&target))
                .map_err(stage_err(stage.as_str()))?;
            outputs.push(OutputEntry {
                name: a.name,
                path: a.file,
                sha256: sha256_hex(&a.bytes),
                bytes: a.bytes.len() as u64,
            });
        }
        let elapsed = started.elapsed();
        log::info!("stage {stage}: {:.3}s", elapsed.as_secs_f64());
        timings.push((stage, elapsed));
    }
    outputs.sort_by(|a, b| a.path.cmp(&b.path));

    let manifest = RunManifest {
        corpus_digest,
        config_digest,
        stages,
        outputs,
        timings,
        run_dir: run_dir.clone(),
    };
    let manifest_path = staging_path.join(MANIFEST_FILE);
    fs::write(&manifest_path, manifest.to_json()).map_err(Error::write(&manifest_path))?;

    if run_dir.exists() {
        fs::remove_dir_all(&run_dir).map_err(Error::write(&run_dir))?;
    }
    fs::rename(&staging_path, &run_dir).map_err(Error::write(&run_dir))?;
    staging.0 = None;
    Ok(manifest)
}

/// Reads every file of a finished run, keyed by relative path.
pub fn read_run(run_dir: &Path) -> Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(run_dir).map_err(Error::read(run_dir))? {
        let entry = entry.map_err(Error::read(run_dir))?;
        let path = entry.path();
        let bytes = fs::read(&path).map_err(Error::read(&path))?;
        files.push((entry.file_name().to_string_lossy().into_owned(), bytes));
    }
    files.sort();
    Ok(files)
}
