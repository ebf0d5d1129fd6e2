//! Cumulative daily tag series and curve-shape classification.
//!
//! Three statistics describe a cumulative curve:
//! - `linearity_r2`: r² of a least-squares line through the cumulative values,
//! - `max_step_fraction`: the largest single-day increment over the total,
//! - `burst_mass_fraction`: the largest share of the total inside any
//!   `burst_days`-long sliding window.
//!
//! The verdict is the first rule that fires in the order
//! stepwise, burst, linear; anything else is `Other`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::{day_of, Corpus, Window};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulativeSeries {
    pub tag: String,
    /// `(day index, cumulative count)` for every day of the window.
    pub buckets: Vec<(i64, u64)>,
    pub total: u64,
}

impl CumulativeSeries {
    /// Builds a series from per-day increments starting at `first_day`.
    pub fn from_increments(tag: impl Into<String>, first_day: i64, increments: &[u64]) -> Self {
        let mut running = 0;
        let buckets = increments
            .iter()
            .enumerate()
            .map(|(i, inc)| {
                running += inc;
                (first_day + i as i64, running)
            })
            .collect();
        CumulativeSeries {
            tag: tag.into(),
            buckets,
            total: running,
        }
    }

    pub fn increments(&self) -> Vec<u64> {
        let mut prev = 0;
        self.buckets
            .iter()
            .map(|&(_, c)| {
                let inc = c - prev;
                prev = c;
                inc
            })
            .collect()
    }

    pub fn first_day(&self) -> Option<i64> {
        self.buckets.first().map(|b| b.0)
    }

    pub fn last_day(&self) -> Option<i64> {
        self.buckets.last().map(|b| b.0)
    }

    pub fn final_count(&self) -> u64 {
        self.buckets.last().map_or(0, |b| b.1)
    }
}

fn daily_increments(corpus: &Corpus, tag: &str) -> Vec<u64> {
    let window = corpus.window();
    let first = window.first_day();
    let mut incs = alloc::vec![0u64; window.days()];
    for doc in corpus.documents() {
        if doc.has_tag(tag) {
            incs[(day_of(doc.timestamp) - first) as usize] += 1;
        }
    }
    incs
}

/// Daily cumulative count of documents carrying `tag`, one bucket per day
/// of the corpus window. Unknown tags give an all-zero series.
pub fn cumulative_series(corpus: &Corpus, tag: &str) -> CumulativeSeries {
    let window = corpus.window();
    CumulativeSeries::from_increments(tag, window.first_day(), &daily_increments(corpus, tag))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Linear,
    Stepwise,
    Burst,
    Other,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Linear => "linear",
            Shape::Stepwise => "stepwise",
            Shape::Burst => "burst",
            Shape::Other => "other",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    pub step_fraction: f64,
    pub burst_fraction: f64,
    pub burst_days: usize,
    pub linear_r2: f64,
    pub min_total: u64,
}

impl Default for ShapeParams {
    fn default() -> Self {
        ShapeParams {
            step_fraction: 0.4,
            burst_fraction: 0.6,
            burst_days: 7,
            linear_r2: 0.95,
            min_total: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeVerdict {
    pub shape: Shape,
    pub linearity_r2: f64,
    pub max_step_fraction: f64,
    pub burst_mass_fraction: f64,
    /// Inclusive day range of the densest sliding window.
    pub burst_window: (i64, i64),
    /// Set when the series was too small to classify.
    pub reason: Option<&'static str>,
}

/// r² of the least-squares line through `(i, values[i])`. Zero when the
/// values have no spread.
pub fn linearity_r2(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    let mean_x = (nf - 1.0) / 2.0;
    let mean_y = values.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (i, &y) in values.iter().enumerate() {
        let dx = i as f64 - mean_x;
        let dy = y - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if syy == 0.0 || sxx == 0.0 {
        return 0.0;
    }
    // for a fit with intercept, r² equals the squared correlation
    let r2 = (sxy * sxy) / (sxx * syy);
    r2.clamp(0.0, 1.0)
}

/// Largest window sum and its start index; the earliest window wins ties.
fn densest_window(increments: &[u64], width: usize) -> (u64, usize, usize) {
    let width = width.clamp(1, increments.len().max(1));
    if increments.len() <= width {
        return (increments.iter().sum(), 0, increments.len().saturating_sub(1));
    }
    let mut sum: u64 = increments[..width].iter().sum();
    let (mut best, mut best_start) = (sum, 0);
    for start in 1..=increments.len() - width {
        sum = sum + increments[start + width - 1] - increments[start - 1];
        if sum > best {
            best = sum;
            best_start = start;
        }
    }
    (best, best_start, best_start + width - 1)
}

pub fn classify_shape(series: &CumulativeSeries, params: &ShapeParams) -> ShapeVerdict {
    let incs = series.increments();
    let first = series.first_day().unwrap_or(0);
    let total = series.total;
    let cumulative: Vec<f64> = series.buckets.iter().map(|b| b.1 as f64).collect();
    let r2 = linearity_r2(&cumulative);
    let (mass, lo, hi) = densest_window(&incs, params.burst_days);
    let max_step = incs.iter().copied().max().unwrap_or(0);
    let frac = |x: u64| if total == 0 { 0.0 } else { x as f64 / total as f64 };

    let mut verdict = ShapeVerdict {
        shape: Shape::Other,
        linearity_r2: r2,
        max_step_fraction: frac(max_step),
        burst_mass_fraction: frac(mass),
        burst_window: (first + lo as i64, first + hi as i64),
        reason: None,
    };
    if total < params.min_total {
        verdict.reason = Some("too few events to classify");
        return verdict;
    }
    verdict.shape = if verdict.max_step_fraction >= params.step_fraction {
        Shape::Stepwise
    } else if verdict.burst_mass_fraction >= params.burst_fraction {
        Shape::Burst
    } else if r2 >= params.linear_r2 {
        Shape::Linear
    } else {
        Shape::Other
    };
    verdict
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptyCorpus;

impl fmt::Display for EmptyCorpus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("corpus is empty")
    }
}

impl core::error::Error for EmptyCorpus {}

/// Fraction of the corpus documents carrying `tag`. Pass the multi-tag
/// filtered corpus to reproduce the per-tweet share of a tag.
pub fn share_over_time(corpus: &Corpus, tag: &str) -> Result<f64, EmptyCorpus> {
    if corpus.is_empty() {
        return Err(EmptyCorpus);
    }
    let hits = corpus.documents().iter().filter(|d| d.has_tag(tag)).count();
    Ok(hits as f64 / corpus.len() as f64)
}

/// Adds per-day increments of series sharing a window and tag.
pub fn merge_series(a: &CumulativeSeries, b: &CumulativeSeries) -> Option<CumulativeSeries> {
    if a.tag != b.tag || a.first_day() != b.first_day() || a.buckets.len() != b.buckets.len() {
        return None;
    }
    let incs: Vec<u64> = a.increments().iter().zip(b.increments()).map(|(x, y)| x + y).collect();
    Some(CumulativeSeries::from_increments(
        a.tag.clone(),
        a.first_day().unwrap_or(0),
        &incs,
    ))
}

/// Windows of two series agree when they cover the same days.
pub fn same_window(a: &CumulativeSeries, b: &CumulativeSeries) -> bool {
    a.first_day() == b.first_day() && a.last_day() == b.last_day()
}

pub fn window_days(window: Window) -> impl Iterator<Item = i64> {
    window.first_day()..=window.last_day()
}
