//! Corpus files: JSONL and CSV readers, writers and the load report.
//!
//! Both formats carry the columns `id, ts, text, tags, lang, source`. In
//! CSV the tags are `|`-separated. `ts` is an RFC 3339 timestamp, a naive
//! `YYYY-MM-DD[T ]HH:MM:SS` (read as UTC), a bare date, or Unix seconds.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, NaiveDateTime, NaiveTime, SecondsFormat, Utc};
use serde::Serialize;
use serde_json::{Map, Value};
use tagscope_core::corpus::{normalize_tag, Corpus, Document, Source, Window};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    #[default]
    Jsonl,
    Csv,
}

impl InputFormat {
    /// `.csv` files are CSV, everything else JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => InputFormat::Csv,
            _ => InputFormat::Jsonl,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(InputFormat::Jsonl),
            "csv" => Ok(InputFormat::Csv),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadReport {
    pub path: PathBuf,
    pub records_read: usize,
    pub kept: usize,
    pub dropped_outside_window: usize,
    pub window: Window,
}

impl fmt::Display for LoadReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "corpus     {}", self.path.display())?;
        writeln!(
            f,
            "window     {} .. {}",
            format_timestamp(self.window.start()),
            format_timestamp(self.window.end())
        )?;
        writeln!(f, "{:<28}{:>8}", "records read", self.records_read)?;
        writeln!(f, "{:<28}{:>8}", "kept", self.kept)?;
        write!(f, "{:<28}{:>8}", "dropped: outside window", self.dropped_outside_window)
    }
}

pub fn format_timestamp(ts: i64) -> String {
    DateTime::<Utc>::from_timestamp(ts, 0)
        .map(|d| d.to_rfc3339_opts(SecondsFormat::Secs, true))
        .unwrap_or_else(|| ts.to_string())
}

pub fn format_day(day: i64) -> String {
    format_timestamp(day * tagscope_core::corpus::SECONDS_PER_DAY)[..10].to_string()
}

/// Parses a timestamp; naive forms are taken as UTC.
pub fn parse_timestamp(s: &str) -> Option<i64> {
    let s = s.trim();
    if let Ok(secs) = s.parse::<i64>() {
        return Some(secs);
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(dt.and_utc().timestamp());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .map(|d| d.and_time(NaiveTime::MIN).and_utc().timestamp())
}

/// Parses `START..END`. A bare end date covers the whole day.
pub fn parse_window(s: &str) -> Result<Window> {
    let bad = || Error::Window(s.to_string());
    let (start, end) = s.split_once("..").ok_or_else(bad)?;
    let start = parse_timestamp(start).ok_or_else(bad)?;
    let end_str = end.trim();
    let end = if NaiveDate::parse_from_str(end_str, "%Y-%m-%d").is_ok() {
        parse_timestamp(end_str).ok_or_else(bad)? + tagscope_core::corpus::SECONDS_PER_DAY - 1
    } else {
        parse_timestamp(end_str).ok_or_else(bad)?
    };
    Window::new(start, end).map_err(|_| bad())
}

struct RawRecord {
    line: u64,
    id: String,
    ts: String,
    text: String,
    tags: Vec<String>,
    lang: Option<String>,
    source: Option<String>,
}

fn record_error(path: &Path, line: u64, field: &str, message: impl Into<String>) -> Error {
    Error::Record {
        path: path.to_path_buf(),
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn json_string(obj: &Map<String, Value>, field: &str) -> Option<std::result::Result<String, String>> {
    match obj.get(field)? {
        Value::Null => None,
        Value::String(s) => Some(Ok(s.clone())),
        Value::Number(n) => Some(Ok(n.to_string())),
        other => Some(Err(format!("expected a string, found {other}"))),
    }
}

fn read_jsonl(path: &Path) -> Result<Vec<RawRecord>> {
    let file = File::open(path).map_err(Error::read(path))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(Error::read(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(&line)
            .map_err(|e| record_error(path, line_no, "<record>", e.to_string()))?;
        let Value::Object(obj) = value else {
            return Err(record_error(path, line_no, "<record>", "expected a JSON object"));
        };
        let get = |field: &str, required: bool| -> Result<Option<String>> {
            match json_string(&obj, field) {
                Some(Ok(s)) => Ok(Some(s)),
                Some(Err(m)) => Err(record_error(path, line_no, field, m)),
                None if required => Err(record_error(path, line_no, field, "missing")),
                None => Ok(None),
            }
        };
        let tags = match obj.get("tags") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    other => Err(record_error(path, line_no, "tags", format!("expected strings, found {other}"))),
                })
                .collect::<Result<_>>()?,
            Some(other) => {
                return Err(record_error(path, line_no, "tags", format!("expected an array, found {other}")))
            }
        };
        out.push(RawRecord {
            line: line_no,
            id: get("id", true)?.unwrap_or_default(),
            ts: get("ts", true)?.unwrap_or_default(),
            text: get("text", false)?.unwrap_or_default(),
            tags,
            lang: get("lang", false)?,
            source: get("source", false)?,
        });
    }
    Ok(out)
}

fn read_csv(path: &Path) -> Result<Vec<RawRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| record_error(path, 1, "<header>", e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| record_error(path, 1, "<header>", e.to_string()))?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(id_col), Some(ts_col)) = (column("id"), column("ts")) else {
        return Err(record_error(path, 1, "<header>", "columns `id` and `ts` are required"));
    };
    let (text_col, tags_col, lang_col, source_col) = (column("text"), column("tags"), column("lang"), column("source"));
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            record_error(path, line, "<record>", e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let cell = |col: Option<usize>| col.and_then(|c| row.get(c)).map(str::to_string);
        let nonempty = |col| cell(col).filter(|s| !s.trim().is_empty());
        out.push(RawRecord {
            line,
            id: cell(Some(id_col)).unwrap_or_default(),
            ts: cell(Some(ts_col)).unwrap_or_default(),
            text: cell(text_col).unwrap_or_default(),
            tags: cell(tags_col)
                .map(|t| t.split('|').filter(|s| !s.trim().is_empty()).map(str::to_string).collect())
                .unwrap_or_default(),
            lang: nonempty(lang_col),
            source: nonempty(source_col),
        });
    }
    Ok(out)
}

fn to_document(path: &Path, raw: RawRecord) -> Result<Document> {
    let id = raw.id.trim().to_string();
    if id.is_empty() {
        return Err(record_error(path, raw.line, "id", "empty id"));
    }
    let timestamp = parse_timestamp(&raw.ts)
        .ok_or_else(|| record_error(path, raw.line, "ts", format!("unparseable timestamp {:?}", raw.ts)))?;
    let hashtags = raw
        .tags
        .iter()
        .map(|t| normalize_tag(t).ok_or_else(|| record_error(path, raw.line, "tags", format!("invalid tag {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let source = match raw.source.as_deref().map(str::trim) {
        None | Some("") => Source::Tweet,
        Some(s) => Source::parse(s)
            .ok_or_else(|| record_error(path, raw.line, "source", format!("unknown source {s:?}")))?,
    };
    Ok(Document {
        id,
        timestamp,
        text: raw.text,
        hashtags,
        lang: raw.lang.map(|l| l.trim().to_string()).filter(|l| !l.is_empty()),
        source,
    })
}

/// Reads, validates and window-filters a corpus file.
///
/// Without a `window` the corpus window is the span of the records.
pub fn load_corpus(path: &Path, format: InputFormat, window: Option<Window>) -> Result<(Corpus, LoadReport)> {
    let raw = match format {
        InputFormat::Jsonl => read_jsonl(path)?,
        InputFormat::Csv => read_csv(path)?,
    };
    let records_read = raw.len();
    let mut docs = Vec::with_capacity(raw.len());
    let mut seen = std::collections::HashMap::new();
    for r in raw {
        let line = r.line;
        let doc = to_document(path, r)?;
        if let Some(first) = seen.insert(doc.id.clone(), line) {
            return Err(record_error(
                path,
                line,
                "id",
                format!("duplicate id {:?} (first seen on line {first})", doc.id),
            ));
        }
        docs.push(doc);
    }
    let window = match window {
        Some(w) => w,
        None => Window::covering(docs.iter().map(|d| d.timestamp))
            .ok_or_else(|| Error::EmptyCorpus { path: path.to_path_buf() })?,
    };
    docs.retain(|d| window.contains(d.timestamp));
    if docs.is_empty() {
        return Err(Error::EmptyCorpus { path: path.to_path_buf() });
    }
    let kept = docs.len();
    let corpus = Corpus::new(docs, window).map_err(|source| Error::Corpus {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((
        corpus,
        LoadReport {
            path: path.to_path_buf(),
            records_read,
            kept,
            dropped_outside_window: records_read - kept,
            window,
        },
    ))
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    id: &'a str,
    ts: String,
    text: &'a str,
    tags: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    lang: Option<&'a str>,
    source: &'static str,
}

pub fn write_jsonl<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    for d in corpus.documents() {
        let rec = JsonRecord {
            id: &d.id,
            ts: format_timestamp(d.timestamp),
            text: &d.text,
            tags: &d.hashtags,
            lang: d.lang.as_deref(),
            source: d.source.as_str(),
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(corpus: &Corpus, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "ts", "text", "tags", "lang", "source"])?;
    for d in corpus.documents() {
        w.write_record([
            d.id.as_str(),
            &format_timestamp(d.timestamp),
            &d.text,
            &d.hashtags.join("|"),
            d.lang.as_deref().unwrap_or(""),
            d.source.as_str(),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(contents: &str, suffix: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    const THREE: &str = r##"{"id":"3","ts":"2013-05-21T10:00:00Z","text":"c","tags":["#Svpol","Husby"],"lang":"sv","source":"tweet"}
{"id":"1","ts":"2013-05-20 08:00:00","text":"a","tags":["husby"]}
{"id":"2","ts":1369051200,"text":"b","tags":[],"source":"forum_post"}
"##;

    #[test]
    fn three_valid_lines() {
        let f = file(THREE, ".jsonl");
        let (c, report) = load_corpus(f.path(), InputFormat::Jsonl, None).unwrap();
        let ids: Vec<&str> = c.documents().iter().map(|d| d.id.as_str()).collect();
        assert_eq!(ids, ["1", "2", "3"]);
        assert_eq!(report.kept, 3);
        assert_eq!(report.dropped_outside_window, 0);
        assert_eq!(c.documents()[2].hashtags, ["svpol", "husby"]);
        assert_eq!(c.documents()[1].source, Source::ForumPost);
    }

    #[test]
    fn window_drops_and_reports() {
        let f = file(THREE, ".jsonl");
        let w = parse_window("2013-05-20..2013-05-20").unwrap();
        let (c, report) = load_corpus(f.path(), InputFormat::Jsonl, Some(w)).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(report.dropped_outside_window, 1);
        assert!(report.to_string().contains("dropped: outside window"));
    }

    #[test]
    fn malformed_record_names_line_and_field() {
        let f = file("{\"id\":\"1\",\"ts\":\"2013-05-20\"}\n{\"id\":\"2\",\"ts\":\"yesterday\"}\n", ".jsonl");
        let err = load_corpus(f.path(), InputFormat::Jsonl, None).unwrap_err();
        match err {
            Error::Record { line, field, .. } => assert_eq!((line, field.as_str()), (2, "ts")),
            other => panic!("unexpected {other}"),
        }
        let f = file("{\"id\":\"1\",\"ts\":\"2013-05-20\",\"tags\":[\"two words\"]}\n", ".jsonl");
        assert!(matches!(
            load_corpus(f.path(), InputFormat::Jsonl, None),
            Err(Error::Record { ref field, .. }) if field == "tags"
        ));
        let f = file("not json\n", ".jsonl");
        assert!(matches!(load_corpus(f.path(), InputFormat::Jsonl, None), Err(Error::Record { line: 1, .. })));
    }

    #[test]
    fn duplicate_id_is_an_error() {
        let f = file("{\"id\":\"1\",\"ts\":\"2013-05-20\"}\n{\"id\":\"1\",\"ts\":\"2013-05-21\"}\n", ".jsonl");
        let err = load_corpus(f.path(), InputFormat::Jsonl, None).unwrap_err();
        assert!(err.to_string().contains("duplicate id"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn empty_after_filtering_is_an_error() {
        let f = file(THREE, ".jsonl");
        let w = parse_window("2014-01-01..2014-01-02").unwrap();
        assert!(matches!(
            load_corpus(f.path(), InputFormat::Jsonl, Some(w)),
            Err(Error::EmptyCorpus { .. })
        ));
        let f = file("", ".jsonl");
        assert!(matches!(load_corpus(f.path(), InputFormat::Jsonl, None), Err(Error::EmptyCorpus { .. })));
    }

    #[test]
    fn csv_with_pipe_tags() {
        let f = file(
            "id,ts,text,tags,lang,source\n1,2013-05-20T10:00:00Z,\"hej, hej\",#Svpol|#Sthlmriots,sv,tweet\n2,2013-05-21,x,,,\n",
            ".csv",
        );
        assert_eq!(InputFormat::from_path(f.path()), InputFormat::Csv);
        let (c, _) = load_corpus(f.path(), InputFormat::Csv, None).unwrap();
        assert_eq!(c.documents()[0].hashtags, ["svpol", "sthlmriots"]);
        assert_eq!(c.documents()[0].text, "hej, hej");
        assert!(c.documents()[1].hashtags.is_empty());
        assert_eq!(c.documents()[1].lang, None);
    }

    #[test]
    fn csv_bad_source_reports_line() {
        let f = file("id,ts,source\n1,2013-05-20,tweet\n2,2013-05-20,blog\n", ".csv");
        match load_corpus(f.path(), InputFormat::Csv, None).unwrap_err() {
            Error::Record { line, field, .. } => assert_eq!((line, field.as_str()), (3, "source")),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn round_trips_through_both_formats() {
        let f = file(THREE, ".jsonl");
        let (c, _) = load_corpus(f.path(), InputFormat::Jsonl, None).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&c, &mut buf).unwrap();
        let g = file(std::str::from_utf8(&buf).unwrap(), ".jsonl");
        assert_eq!(load_corpus(g.path(), InputFormat::Jsonl, None).unwrap().0, c);
        let mut buf = Vec::new();
        write_csv(&c, &mut buf).unwrap();
        let h = file(std::str::from_utf8(&buf).unwrap(), ".csv");
        assert_eq!(load_corpus(h.path(), InputFormat::Csv, None).unwrap().0, c);
    }

    #[test]
    fn windows_and_timestamps() {
        assert_eq!(parse_timestamp("1970-01-02"), Some(86_400));
        assert_eq!(parse_timestamp("1970-01-01T01:00:00+01:00"), Some(0));
        let w = parse_window("2013-05-15..2013-07-15").unwrap();
        assert_eq!(w.days(), 62);
        assert_eq!(format_timestamp(w.end()), "2013-07-15T23:59:59Z");
        assert!(parse_window("2013-05-15").is_err());
        assert!(parse_window("2013-07-15..2013-05-15").is_err());
        assert_eq!(format_day(w.first_day()), "2013-05-15");
    }
}
