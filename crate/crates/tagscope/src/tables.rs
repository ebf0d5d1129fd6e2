//! Rendering of analysis results as CSV or aligned text tables.

use std::collections::{BTreeMap, BTreeSet};

use tagscope_core::coding::{rollup, CategoryId, CodingResult, PronounReport, Taxonomy};
use tagscope_core::graph::DyadEntry;
use tagscope_core::ngram::CountKey;
use tagscope_core::sentiment::PowerReport;
use tagscope_core::timeline::ShapeVerdict;

use crate::ingest::format_day;

/// Header plus string rows, rendered either way.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Emitted after the rows: `# key,value` in CSV, `key: value` in text.
    pub footer: Vec<(String, String)>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            ..Table::default()
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        for (k, v) in &self.footer {
            w.write_record([format!("# {k}"), v.clone()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_text(&self) -> String {
        let width = |s: &str| s.chars().count();
        let mut widths: Vec<usize> = self.header.iter().map(|h| width(h)).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                widths[i] = widths[i].max(width(c));
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                s.push_str(c);
                if i + 1 < cells.len() {
                    s.push_str(&" ".repeat(widths[i] - width(c)));
                }
            }
            s.push('\n');
            s
        };
        let mut out = line(&self.header);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&line(&rule));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        for (k, v) in &self.footer {
            out.push_str(&format!("{k}: {v}\n"));
        }
        out
    }
}

/// Ranked counts with a 1-based rank column.
pub fn counts<K: CountKey>(rows: &[(K, u64)], key_headers: &[&str]) -> Table {
    let mut t = Table::new(
        std::iter::once("rank")
            .chain(key_headers.iter().copied())
            .chain(std::iter::once("count")),
    );
    for (i, (k, c)) in rows.iter().enumerate() {
        let mut row = vec![(i + 1).to_string()];
        row.extend(k.parts().into_iter().map(str::to_string));
        row.push(c.to_string());
        t.rows.push(row);
    }
    t
}

/// `key(,key2),count` without ranks, the on-disk count table format.
pub fn count_csv<K: CountKey>(rows: &[(K, u64)], key_headers: &[&str]) -> String {
    let mut t = Table::new(key_headers.iter().copied().chain(std::iter::once("count")));
    for (k, c) in rows {
        let mut row: Vec<String> = k.parts().into_iter().map(str::to_string).collect();
        row.push(c.to_string());
        t.rows.push(row);
    }
    t.to_csv()
}

pub fn dyads(entries: &[DyadEntry]) -> Table {
    let mut t = Table::new(["rank", "tag_a", "tag_b", "weight", "ratio_to_max"]);
    for (i, d) in entries.iter().enumerate() {
        t.push([
            (i + 1).to_string(),
            d.pair.a().to_string(),
            d.pair.b().to_string(),
            d.weight.to_string(),
            format!("{:.4}", d.ratio),
        ]);
    }
    t
}

pub fn components(comps: &[BTreeSet<String>]) -> Table {
    let mut t = Table::new(["component", "size", "members"]);
    for (i, c) in comps.iter().enumerate() {
        t.push([
            (i + 1).to_string(),
            c.len().to_string(),
            c.iter().cloned().collect::<Vec<_>>().join(" "),
        ]);
    }
    t
}

pub fn shapes(verdicts: &[(String, u64, ShapeVerdict)]) -> Table {
    let mut t = Table::new([
        "tag",
        "total",
        "shape",
        "linearity_r2",
        "max_step_fraction",
        "burst_mass_fraction",
        "burst_start",
        "burst_end",
    ]);
    for (tag, total, v) in verdicts {
        t.push([
            tag.clone(),
            total.to_string(),
            v.shape.to_string(),
            format!("{:.4}", v.linearity_r2),
            format!("{:.4}", v.max_step_fraction),
            format!("{:.4}", v.burst_mass_fraction),
            format_day(v.burst_window.0),
            format_day(v.burst_window.1),
        ]);
    }
    t
}

pub fn coding(result: &CodingResult, taxonomy: &Taxonomy) -> Table {
    let rolled: BTreeMap<CategoryId, u64> = rollup(result, taxonomy);
    let mut t = Table::new(["category", "label", "unique_words", "count", "rolled_up"]);
    for cat in taxonomy.categories() {
        let tally = result.per_category.get(&cat.id);
        t.push([
            cat.id.to_string(),
            cat.label.clone(),
            tally.map_or(0, |x| x.unique_words.len()).to_string(),
            tally.map_or(0, |x| x.count).to_string(),
            rolled.get(&cat.id).copied().unwrap_or(0).to_string(),
        ]);
    }
    t.footer = vec![
        ("vocabulary_size".into(), result.vocabulary_size.to_string()),
        ("categorized".into(), result.categorized().to_string()),
        ("uncategorized".into(), result.uncategorized.len().to_string()),
        ("ambiguous".into(), result.ambiguous.len().to_string()),
    ];
    t
}

/// Word-level listing of a coding run: one row per vocabulary word.
pub fn coded_words(result: &CodingResult) -> Table {
    let mut t = Table::new(["word", "category"]);
    let mut rows: Vec<(String, String)> = result
        .per_category
        .iter()
        .flat_map(|(id, tally)| tally.unique_words.iter().map(move |w| (w.clone(), id.to_string())))
        .chain(result.uncategorized.iter().map(|w| (w.clone(), String::new())))
        .collect();
    rows.sort();
    for (w, c) in rows {
        t.push([w, c]);
    }
    t
}

pub fn pronouns(report: &PronounReport) -> Table {
    let mut t = Table::new(["group", "label", "surface", "count"]);
    for r in &report.rows {
        t.push([r.group.as_str(), &r.label, &r.surface, &r.count.to_string()]);
    }
    t.footer = vec![
        ("them_total".into(), report.them_total.to_string()),
        ("us_total".into(), report.us_total.to_string()),
        ("them_us_ratio".into(), report.ratio.to_string()),
    ];
    t
}

pub fn power(report: &PowerReport) -> Table {
    let mut t = Table::new(["ngram", "frequency", "strength", "power"]);
    for r in &report.rows {
        t.push([
            r.ngram.to_string(),
            r.frequency.to_string(),
            r.strength.to_string(),
            r.power.to_string(),
        ]);
    }
    t.footer = vec![("sum_power".into(), report.sum_power.to_string())];
    t
}
