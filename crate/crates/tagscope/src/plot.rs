//! Timeline export: cumulative series as CSV or as an SVG line chart.

use std::fmt::Write as _;
use std::str::FromStr;

use tagscope_core::timeline::{same_window, CumulativeSeries};

use crate::error::{Error, Result};
use crate::ingest::format_day;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 130.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 40.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimelineFormat {
    Csv,
    Svg,
}

impl FromStr for TimelineFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TimelineFormat::Csv),
            "svg" => Ok(TimelineFormat::Svg),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

impl TimelineFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TimelineFormat::Csv => "csv",
            TimelineFormat::Svg => "svg",
        }
    }
}

/// Series sorted by tag, checked to share one day axis.
fn aligned(series: &[CumulativeSeries]) -> Result<Vec<&CumulativeSeries>> {
    let mut sorted: Vec<&CumulativeSeries> = series.iter().collect();
    sorted.sort_by(|a, b| a.tag.cmp(&b.tag));
    if let Some(first) = sorted.first() {
        if let Some(bad) = sorted.iter().find(|s| !same_window(first, s)) {
            return Err(Error::Data(format!(
                "series `{}` and `{}` cover different days",
                first.tag, bad.tag
            )));
        }
    }
    Ok(sorted)
}

pub fn export_timeline(series: &[CumulativeSeries], format: TimelineFormat) -> Result<String> {
    match format {
        TimelineFormat::Csv => timeline_csv(series),
        TimelineFormat::Svg => timeline_svg(series),
    }
}

pub fn timeline_csv(series: &[CumulativeSeries]) -> Result<String> {
    let sorted = aligned(series)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("date").chain(sorted.iter().map(|s| s.tag.as_str()));
    w.write_record(header).expect("in-memory write");
    if let Some(first) = sorted.first() {
        for (i, &(day, _)) in first.buckets.iter().enumerate() {
            let row = std::iter::once(format_day(day)).chain(sorted.iter().map(|s| s.buckets[i].1.to_string()));
            w.write_record(row).expect("in-memory write");
        }
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input"))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn color_for(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

pub fn timeline_svg(series: &[CumulativeSeries]) -> Result<String> {
    let sorted = aligned(series)?;
    let days = sorted.first().map_or(0, |s| s.buckets.len());
    let max = sorted.iter().map(|s| s.final_count()).max().unwrap_or(0).max(1) as f64;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |i: usize| {
        if days <= 1 {
            MARGIN_LEFT
        } else {
            MARGIN_LEFT + plot_w * i as f64 / (days - 1) as f64
        }
    };
    let y = |v: u64| MARGIN_TOP + plot_h * (1.0 - v as f64 / max);

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"11\">"
    )
    .unwrap();
    writeln!(out, "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>").unwrap();
    let (x0, x1, yb) = (MARGIN_LEFT, MARGIN_LEFT + plot_w, MARGIN_TOP + plot_h);
    writeln!(out, "  <line x1=\"{x0}\" y1=\"{yb}\" x2=\"{x1}\" y2=\"{yb}\" stroke=\"black\"/>").unwrap();
    writeln!(out, "  <line x1=\"{x0}\" y1=\"{MARGIN_TOP}\" x2=\"{x0}\" y2=\"{yb}\" stroke=\"black\"/>").unwrap();
    writeln!(out, "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>", x0 - 4.0, MARGIN_TOP + 4.0, max as u64).unwrap();
    writeln!(out, "  <text x=\"{}\" y=\"{yb}\" text-anchor=\"end\">0</text>", x0 - 4.0).unwrap();
    if let Some(first) = sorted.first() {
        if let (Some(d0), Some(d1)) = (first.first_day(), first.last_day()) {
            let ty = yb + 16.0;
            writeln!(out, "  <text x=\"{x0}\" y=\"{ty}\">{}</text>", format_day(d0)).unwrap();
            writeln!(out, "  <text x=\"{x1}\" y=\"{ty}\" text-anchor=\"end\">{}</text>", format_day(d1)).unwrap();
        }
    }
    for (i, s) in sorted.iter().enumerate() {
        let points: Vec<String> = s
            .buckets
            .iter()
            .enumerate()
            .map(|(j, &(_, v))| format!("{:.2},{:.2}", x(j), y(v)))
            .collect();
        writeln!(
            out,
            "  <polyline data-tag=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
            escape(&s.tag),
            color_for(i),
            points.join(" ")
        )
        .unwrap();
    }
    for (i, s) in sorted.iter().enumerate() {
        let ly = MARGIN_TOP + 10.0 + 16.0 * i as f64;
        let lx = x1 + 10.0;
        writeln!(
            out,
            "  <line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{}\" stroke-width=\"2\"/>",
            lx + 16.0,
            color_for(i)
        )
        .unwrap();
        writeln!(out, "  <text x=\"{}\" y=\"{}\">{} ({})</text>", lx + 20.0, ly + 4.0, escape(&s.tag), s.final_count()).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
