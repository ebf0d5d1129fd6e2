use std::path::{Path, PathBuf};
use std::process::Command;

use tagscope::config::{Config, CorpusConfig};
use tagscope::{analysis, tables};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tagscope"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = tagscope::cli::run(std::iter::once("tagscope").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Compares against a checked-in file; `TAGSCOPE_BLESS=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = fixture(name);
    if std::env::var_os("TAGSCOPE_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{} differs from output", path.display());
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for sub in ["ingest", "tags", "pairs", "graph", "timeline", "code", "pronouns", "sentiment", "run"] {
        assert!(text.contains(sub), "help lists {sub}");
    }
    for sub in ["tags", "run"] {
        let out = bin().args([sub, "--help"]).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        assert!(String::from_utf8(out.stdout).unwrap().contains("--config"));
    }
}

#[test]
fn usage_errors_exit_one() {
    let out = bin().args(["tags", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let out = bin().arg("explode").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let t = fixture("twitter.jsonl");
    let (code, _, err) = run(&["tags", t.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = run(&["tags", t.to_str().unwrap(), "--window", "yesterday"]);
    assert_eq!(code, 1);
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"id\":\"1\",\"ts\":\"2013-05-20\",\"text\":\"x\",\"tags\":[\"a\",\"b\"]}\nnot json\n").unwrap();
    let out = bin().args(["tags", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains(":2"));
    let (code, _, _) = run(&["tags", dir.path().join("missing.jsonl").to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn tags_top_twenty() {
    let t = fixture("twitter.jsonl");
    let (code, out, err) = run(&["tags", t.to_str().unwrap(), "--top", "20"]);
    assert_eq!(code, 0, "{err}");
    let rows: Vec<Vec<&str>> = out.lines().skip(2).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 20);
    assert_eq!(rows[0], ["1", "svpol", "3897"]);
    assert_eq!(rows[1], ["2", "sthlmriots", "1319"]);
    assert_eq!(rows[2], ["3", "migpol", "436"]);
    assert_eq!(rows[19], ["20", "tensta", "69"]);
}

#[test]
fn csv_output_is_parseable_and_matches_library() {
    let t = fixture("twitter.jsonl");
    let (code, out, _) = run(&["pairs", t.to_str().unwrap(), "--top", "6", "--format", "csv", "--jobs", "3"]);
    assert_eq!(code, 0);
    let mut config = Config {
        twitter: Some(CorpusConfig::new(&t)),
        ..Config::default()
    };
    config.pairs.top = 6;
    let (corpus, _) = analysis::load_twitter(&config).unwrap();
    let expected = tables::count_csv(&analysis::top_pairs(&config, &corpus), &["tag_a", "tag_b"]);
    assert_eq!(out, expected);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[5].iter().collect::<Vec<_>>(), ["migpol", "sthlmriots", "37"]);
}

#[test]
fn graph_dot_matches_golden() {
    let t = fixture("twitter.jsonl");
    let (code, out, err) = run(&["graph", t.to_str().unwrap(), "--threshold", "2", "--format", "dot"]);
    assert_eq!(code, 0, "{err}");
    golden("graph_t2.dot", &out);
}

#[test]
fn graph_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("g.graphml");
    let t = fixture("twitter.jsonl");
    let (code, out, _) = run(&[
        "graph",
        t.to_str().unwrap(),
        "--threshold",
        "38",
        "--format",
        "graphml",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let parsed = tagscope::graph_io::parse_graphml(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(parsed.graph.edges().len(), 5);
}

#[test]
fn timeline_svg_orders_lines() {
    let t = fixture("twitter.jsonl");
    let (code, svg, _) = run(&["timeline", t.to_str().unwrap(), "--tags", "svpol,sthlmriots", "--format", "svg"]);
    assert_eq!(code, 0);
    let end_y = |tag: &str| -> f64 {
        let line = svg.lines().find(|l| l.contains(&format!("data-tag=\"{tag}\""))).unwrap();
        let pts = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        pts.split(' ').next_back().unwrap().split(',').nth(1).unwrap().parse().unwrap()
    };
    assert!(end_y("svpol") < end_y("sthlmriots"));
    let (code, table, _) = run(&["timeline", t.to_str().unwrap(), "--tags", "svpol,nymo,svtdebatt"]);
    assert_eq!(code, 0);
    let shape = |tag: &str| {
        table
            .lines()
            .find(|l| l.starts_with(tag))
            .and_then(|l| l.split_whitespace().nth(2))
            .unwrap()
            .to_string()
    };
    assert_eq!(shape("svpol"), "linear");
    assert_eq!(shape("nymo"), "stepwise");
    assert_eq!(shape("svtdebatt"), "burst");
}

#[test]
fn forum_subcommands() {
    let f = fixture("forum.jsonl");
    let f = f.to_str().unwrap();
    let (code, out, _) = run(&["pronouns", f, "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("them,them,im,79\n"));
    assert!(out.ends_with("# them_us_ratio,16.000\n"));
    let (code, out, _) = run(&["sentiment", f, "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("# sum_power,-8\n"), "{out}");
    let (code, out, _) = run(&["code", f]);
    assert_eq!(code, 0);
    assert!(out.contains("External fields"));
    let (code, out, _) = run(&["ingest", f]);
    assert_eq!(code, 0);
    assert!(out.contains("525"));
}

#[test]
fn config_file_drives_subcommands() {
    let cfg = fixture("run.toml");
    let (code, out, err) = run(&["--config", cfg.to_str().unwrap(), "pairs", "--top", "1", "--format", "csv"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "tag_a,tag_b,count\nsthlmriots,svpol,533\n");
    let (code, out, _) = run(&["ingest", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("with >= 2 tags"));
}
