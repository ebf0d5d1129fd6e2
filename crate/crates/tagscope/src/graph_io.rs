//! DOT and GraphML export of co-occurrence graphs, and readers for the same
//! documents.
//!
//! Nodes and edges are written in sorted order, so output bytes depend only
//! on the graph. Every edge carries its true `weight`; its drawn width is
//! `min(weight, cap)` when a cap is given, which keeps one or two dominant
//! dyads from swamping a drawing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use tagscope_core::graph::CooccurrenceGraph;
use tagscope_core::ngram::TagPair;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    GraphMl,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(GraphFormat::Dot),
            "graphml" => Ok(GraphFormat::GraphMl),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

impl GraphFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Dot => "dot",
            GraphFormat::GraphMl => "graphml",
        }
    }
}

pub fn render_width(weight: u64, cap: Option<u64>) -> u64 {
    cap.map_or(weight, |c| weight.min(c))
}

pub fn export_graph(graph: &CooccurrenceGraph, format: GraphFormat, cap: Option<u64>) -> String {
    match format {
        GraphFormat::Dot => to_dot(graph, cap),
        GraphFormat::GraphMl => to_graphml(graph, cap),
    }
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn to_dot(graph: &CooccurrenceGraph, cap: Option<u64>) -> String {
    let mut out = String::from("graph cooccurrence {\n");
    match cap {
        Some(c) => writeln!(out, "  graph [threshold={}, render_cap={c}];", graph.threshold()),
        None => writeln!(out, "  graph [threshold={}];", graph.threshold()),
    }
    .unwrap();
    for n in graph.nodes() {
        writeln!(out, "  {};", dot_quote(n)).unwrap();
    }
    for (p, &w) in graph.edges() {
        writeln!(
            out,
            "  {} -- {} [weight={w}, penwidth={}];",
            dot_quote(p.a()),
            dot_quote(p.b()),
            render_width(w, cap)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn xml_unescape(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

pub fn to_graphml(graph: &CooccurrenceGraph, cap: Option<u64>) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n\
  <key id=\"threshold\" for=\"graph\" attr.name=\"threshold\" attr.type=\"int\"/>\n\
  <key id=\"render_cap\" for=\"graph\" attr.name=\"render_cap\" attr.type=\"int\"/>\n\
  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n\
  <key id=\"render_width\" for=\"edge\" attr.name=\"render_width\" attr.type=\"double\"/>\n\
  <graph id=\"cooccurrence\" edgedefault=\"undirected\">\n",
    );
    writeln!(out, "    <data key=\"threshold\">{}</data>", graph.threshold()).unwrap();
    if let Some(c) = cap {
        writeln!(out, "    <data key=\"render_cap\">{c}</data>").unwrap();
    }
    for n in graph.nodes() {
        writeln!(out, "    <node id=\"{}\"/>", xml_escape(n)).unwrap();
    }
    for (p, &w) in graph.edges() {
        writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\">\n      <data key=\"weight\">{w}</data>\n      <data key=\"render_width\">{}</data>\n    </edge>",
            xml_escape(p.a()),
            xml_escape(p.b()),
            render_width(w, cap)
        )
        .unwrap();
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// Graph and render cap recovered from an exported document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedGraph {
    pub graph: CooccurrenceGraph,
    pub cap: Option<u64>,
}

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Data(format!("graph document line {line}: {}", msg.into()))
}

/// Reads one quoted DOT id starting at `s`; returns it and the rest.
fn dot_id(s: &str) -> Option<(String, &str)> {
    let s = s.trim_start().strip_prefix('"')?;
    let mut out = String::new();
    let mut chars = s.char_indices();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?.1),
            '"' => return Some((out, &s[i + 1..])),
            c => out.push(c),
        }
    }
    None
}

fn attrs(s: &str) -> Option<BTreeMap<&str, &str>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix("];")?;
    inner
        .split(',')
        .map(|kv| kv.trim().split_once('='))
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().collect())
}

pub fn parse_dot(text: &str) -> Result<ParsedGraph> {
    let mut threshold = None;
    let mut cap = None;
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line == "}" || line.starts_with("graph cooccurrence") {
            continue;
        }
        if let Some(rest) = line.strip_prefix("graph ") {
            let a = attrs(rest).ok_or_else(|| parse_error(n, "bad graph attributes"))?;
            threshold = a.get("threshold").and_then(|v| v.parse::<u64>().ok());
            cap = a.get("render_cap").and_then(|v| v.parse::<u64>().ok());
            continue;
        }
        let (first, rest) = dot_id(line).ok_or_else(|| parse_error(n, "expected a quoted id"))?;
        let rest = rest.trim_start();
        if rest == ";" {
            nodes.insert(first);
            continue;
        }
        let rest = rest.strip_prefix("--").ok_or_else(|| parse_error(n, "expected `--`"))?;
        let (second, rest) = dot_id(rest).ok_or_else(|| parse_error(n, "expected a quoted id"))?;
        let a = attrs(rest).ok_or_else(|| parse_error(n, "bad edge attributes"))?;
        let weight: u64 = a
            .get("weight")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| parse_error(n, "edge without integer weight"))?;
        let pair = TagPair::new(first, second).ok_or_else(|| parse_error(n, "self-loop"))?;
        edges.insert(pair, weight);
    }
    let threshold = threshold.ok_or_else(|| parse_error(0, "missing graph threshold"))?;
    let graph = CooccurrenceGraph::from_parts(nodes, edges, threshold).map_err(|e| Error::Data(e.to_string()))?;
    Ok(ParsedGraph { graph, cap })
}

fn xml_attr<'a>(line: &'a str, name: &str) -> Option<&'a str> {
    let start = line.find(&format!("{name}=\""))? + name.len() + 2;
    let len = line[start..].find('"')?;
    Some(&line[start..start + len])
}

fn xml_data(line: &str) -> Option<(&str, &str)> {
    let key = xml_attr(line, "key")?;
    let start = line.find('>')? + 1;
    let end = line.rfind("</data>")?;
    Some((key, &line[start..end]))
}

pub fn parse_graphml(text: &str) -> Result<ParsedGraph> {
    let mut threshold = None;
    let mut cap = None;
    let mut nodes = BTreeSet::new();
    let mut edges = BTreeMap::new();
    let mut open_edge: Option<(String, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.starts_with("<node ") {
            let id = xml_attr(line, "id").ok_or_else(|| parse_error(n, "node without id"))?;
            nodes.insert(xml_unescape(id));
        } else if line.starts_with("<edge ") {
            let s = xml_attr(line, "source").ok_or_else(|| parse_error(n, "edge without source"))?;
            let t = xml_attr(line, "target").ok_or_else(|| parse_error(n, "edge without target"))?;
            open_edge = Some((xml_unescape(s), xml_unescape(t)));
        } else if line.starts_with("<data ") {
            let (key, value) = xml_data(line).ok_or_else(|| parse_error(n, "malformed data element"))?;
            let number = || value.parse::<u64>().map_err(|_| parse_error(n, format!("bad {key} value")));
            match (key, &open_edge) {
                ("threshold", None) => threshold = Some(number()?),
                ("render_cap", None) => cap = Some(number()?),
                ("weight", Some((s, t))) => {
                    let pair = TagPair::new(s.as_str(), t.as_str()).ok_or_else(|| parse_error(n, "self-loop"))?;
                    edges.insert(pair, number()?);
                }
                _ => {}
            }
        } else if line == "</edge>" {
            open_edge = None;
        }
    }
    let threshold = threshold.ok_or_else(|| parse_error(0, "missing graph threshold"))?;
    let graph = CooccurrenceGraph::from_parts(nodes, edges, threshold).map_err(|e| Error::Data(e.to_string()))?;
    Ok(ParsedGraph { graph, cap })
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<ParsedGraph> {
    match format {
        GraphFormat::Dot => parse_dot(text),
        GraphFormat::GraphMl => parse_graphml(text),
    }
}
