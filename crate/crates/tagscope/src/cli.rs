//! Command-line interface. Each subcommand loads a config (or defaults),
//! applies flag overrides, calls the matching `analysis` function and
//! renders the result.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis;
use crate::config::{Config, CorpusConfig, Stage};
use crate::error::{Error, Result};
use crate::graph_io::{export_graph, GraphFormat};
use crate::ingest::parse_window;
use crate::pipeline::run_pipeline;
use crate::plot::{export_timeline, TimelineFormat};
use crate::tables;

#[derive(Debug, Parser)]
#[command(name = "tagscope", version, about = "Hashtag and forum text analysis toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Dot,
    Graphml,
    Svg,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format; not every subcommand supports every format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Number of rows to print (0 = all).
    #[arg(long, global = true, value_name = "K")]
    pub top: Option<usize>,
    /// Minimum edge weight kept in the co-occurrence graph.
    #[arg(long, global = true, value_name = "N")]
    pub threshold: Option<u64>,
    /// Minimum word or 2-gram frequency for coding and sentiment.
    #[arg(long, global = true, value_name = "N")]
    pub min_freq: Option<u64>,
    /// Worker threads used for counting.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Corpus window, e.g. 2013-05-15..2013-07-15.
    #[arg(long, global = true, value_name = "START..END")]
    pub window: Option<String>,
    /// Minimum distinct tags per tweet.
    #[arg(long, global = true, value_name = "N")]
    pub min_tags: Option<usize>,
    /// Write the result to a file instead of stdout.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Corpus file; overrides the config.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a corpus file and print its load report.
    Ingest(Input),
    /// Most frequent hashtags.
    Tags(Input),
    /// Most frequent hashtag pairs.
    Pairs(Input),
    /// Thresholded co-occurrence graph.
    Graph {
        #[command(flatten)]
        input: Input,
        /// Cap on the drawn edge width.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Cumulative tag timelines and their shapes.
    Timeline {
        #[command(flatten)]
        input: Input,
        /// Comma-separated tags to plot.
        #[arg(long, value_delimiter = ',')]
        tags: Vec<String>,
    },
    /// Content coding of the forum vocabulary.
    Code(Input),
    /// Them/us pronoun counts.
    Pronouns(Input),
    /// Sentiment power of keyword 2-grams.
    Sentiment(Input),
    /// Run every enabled stage and write a run directory.
    Run {
        /// Output directory; overrides the config.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn set_input(section: &mut Option<CorpusConfig>, input: &Input) {
    if let Some(p) = &input.input {
        match section {
            Some(s) => {
                s.path = p.clone();
                s.format = None;
            }
            None => *section = Some(CorpusConfig::new(p.clone())),
        }
    }
}

fn effective_config(global: &GlobalArgs) -> Result<Config> {
    let mut config = match &global.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    config.jobs = global.jobs.unwrap_or(config.jobs).max(1);
    if let Some(top) = global.top {
        config.tags.top = top;
        config.pairs.top = top;
        config.graph.dyads = top;
        config.timeline.top = top;
    }
    if let Some(t) = global.threshold {
        config.graph.threshold = t;
    }
    if let Some(m) = global.min_freq {
        config.coding.min_freq = m;
        config.sentiment.min_freq = m;
    }
    if let Some(w) = &global.window {
        parse_window(w)?;
        for s in [&mut config.twitter, &mut config.forum].into_iter().flatten() {
            s.window = Some(w.clone());
        }
    }
    if let Some(m) = global.min_tags {
        if let Some(s) = &mut config.twitter {
            s.min_tags = m;
        }
    }
    Ok(config)
}

fn unsupported(format: OutputFormat) -> Error {
    let name = format.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Error::UnsupportedFormat(name)
}

fn tabular(format: OutputFormat, table: tables::Table) -> Result<String> {
    match format {
        OutputFormat::Table => Ok(table.to_text()),
        OutputFormat::Csv => Ok(table.to_csv()),
        other => Err(unsupported(other)),
    }
}

fn execute(cli: Cli) -> Result<(String, Option<String>)> {
    let g = &cli.global;
    let format = g.format;
    let mut config = effective_config(g)?;
    let table_format = format.unwrap_or(OutputFormat::Table);
    let out = match &cli.command {
        Command::Ingest(input) => {
            let mut text = String::new();
            if input.input.is_some() || config.twitter.is_some() || config.forum.is_none() {
                set_input(&mut config.twitter, input);
                let section = config
                    .twitter
                    .as_ref()
                    .ok_or_else(|| Error::Config("no corpus given: pass a file or --config".into()))?;
                let (corpus, report) = analysis::load_section(section)?;
                let multi = corpus.filter_multi_tag(section.min_tags).len();
                text.push_str(&format!(
                    "{report}\n{:<28}{:>8}\n",
                    format!("with >= {} tags", section.min_tags),
                    multi
                ));
            }
            if input.input.is_none() {
                if let Some(section) = &config.forum {
                    let (_, report) = analysis::load_section(section)?;
                    text.push_str(&format!("{report}\n"));
                }
            }
            text
        }
        Command::Tags(input) => {
            set_input(&mut config.twitter, input);
            let (corpus, _) = analysis::load_twitter(&config)?;
            let rows = analysis::top_tags(&config, &corpus);
            match table_format {
                OutputFormat::Csv => tables::count_csv(&rows, &["tag"]),
                f => tabular(f, tables::counts(&rows, &["tag"]))?,
            }
        }
        Command::Pairs(input) => {
            set_input(&mut config.twitter, input);
            let (corpus, _) = analysis::load_twitter(&config)?;
            let rows = analysis::top_pairs(&config, &corpus);
            match table_format {
                OutputFormat::Csv => tables::count_csv(&rows, &["tag_a", "tag_b"]),
                f => tabular(f, tables::counts(&rows, &["tag_a", "tag_b"]))?,
            }
        }
        Command::Graph { input, cap } => {
            set_input(&mut config.twitter, input);
            if cap.is_some() {
                config.graph.cap = *cap;
            }
            let (corpus, _) = analysis::load_twitter(&config)?;
            let graph = analysis::graph(&config, &corpus)?;
            let format = match format {
                Some(f) => f,
                None => match config.graph.graph_format()? {
                    GraphFormat::Dot => OutputFormat::Dot,
                    GraphFormat::GraphMl => OutputFormat::Graphml,
                },
            };
            match format {
                OutputFormat::Dot => export_graph(&graph, GraphFormat::Dot, config.graph.cap),
                OutputFormat::Graphml => export_graph(&graph, GraphFormat::GraphMl, config.graph.cap),
                OutputFormat::Csv => {
                    tables::dyads(&tagscope_core::graph::dyad_report(&graph, graph.edges().len())).to_csv()
                }
                OutputFormat::Table => {
                    let dyads = tagscope_core::graph::dyad_report(&graph, config.graph.dyads.max(1));
                    let comps = tagscope_core::graph::components(&graph);
                    format!(
                        "{} nodes, {} edges at threshold {}\n\n{}\n{}",
                        graph.nodes().len(),
                        graph.edges().len(),
                        graph.threshold(),
                        tables::dyads(&dyads).to_text(),
                        tables::components(&comps).to_text()
                    )
                }
                other => return Err(unsupported(other)),
            }
        }
        Command::Timeline { input, tags } => {
            set_input(&mut config.twitter, input);
            if !tags.is_empty() {
                config.timeline.tags = tags.clone();
            }
            let (corpus, _) = analysis::load_twitter(&config)?;
            let rows = analysis::timeline(&config, &corpus);
            let series: Vec<_> = rows.iter().map(|(s, _)| s.clone()).collect();
            match table_format {
                OutputFormat::Csv => export_timeline(&series, TimelineFormat::Csv)?,
                OutputFormat::Svg => export_timeline(&series, TimelineFormat::Svg)?,
                OutputFormat::Table => {
                    let shapes: Vec<_> = rows.into_iter().map(|(s, v)| (s.tag.clone(), s.total, v)).collect();
                    tables::shapes(&shapes).to_text()
                }
                other => return Err(unsupported(other)),
            }
        }
        Command::Code(input) => {
            set_input(&mut config.forum, input);
            let (corpus, _) = analysis::load_forum(&config)?;
            let taxonomy = analysis::taxonomy(&config)?;
            let result = analysis::coding(&config, &corpus, &taxonomy)?;
            let mut text = tabular(table_format, tables::coding(&result, &taxonomy))?;
            if table_format == OutputFormat::Table && !result.ambiguous.is_empty() {
                text.push_str("\nwords matching more than one family (first match used):\n");
                for (w, ids) in &result.ambiguous {
                    let ids: Vec<String> = ids.iter().map(ToString::to_string).collect();
                    text.push_str(&format!("  {w}: {}\n", ids.join(", ")));
                }
            }
            text
        }
        Command::Pronouns(input) => {
            set_input(&mut config.forum, input);
            let (corpus, _) = analysis::load_forum(&config)?;
            tabular(table_format, tables::pronouns(&analysis::pronouns(&config, &corpus)?))?
        }
        Command::Sentiment(input) => {
            set_input(&mut config.forum, input);
            let (corpus, _) = analysis::load_forum(&config)?;
            tabular(table_format, tables::power(&analysis::sentiment(&config, &corpus)?))?
        }
        Command::Run { out } => {
            if let Some(dir) = out {
                config.output.dir = dir.clone();
            }
            if format.is_some_and(|f| f != OutputFormat::Table) {
                return Err(unsupported(format.unwrap()));
            }
            let manifest = run_pipeline(&config)?;
            let mut timings = String::new();
            for (stage, d) in &manifest.timings {
                timings.push_str(&format!("{:<10}{:>9.3}s\n", Stage::as_str(*stage), d.as_secs_f64()));
            }
            timings.push_str(&format!("run directory: {}\n", manifest.run_dir.display()));
            return Ok((manifest.to_json(), Some(timings)));
        }
    };
    Ok((out, None))
}

/// Parses `args` and runs the command, returning the process exit code:
/// 0 success, 1 usage error, 2 data error, 3 internal error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let output = cli.global.output.clone();
    match execute(cli) {
        Ok((text, note)) => {
            if let Some(n) = note {
                let _ = write!(stderr, "{n}");
            }
            let written = match &output {
                Some(path) => std::fs::write(path, &text).map_err(Error::write(path)),
                None => stdout.write_all(text.as_bytes()).map_err(Error::write("<stdout>")),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["tagscope", "frobnicate"], &mut out, &mut err), 1);
        assert_eq!(run(["tagscope", "tags", "--bogus"], &mut out, &mut err), 1);
        assert_eq!(run(["tagscope", "--help"], &mut out, &mut err), 0);
    }
}
