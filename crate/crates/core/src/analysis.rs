//! Error analysis of multiplier models against plain integer multiplication.
//!
//! Relative error of one pair is `ER = (P_true − P_model) / P_true`. A run
//! aggregates the mean (AER) and maximum (MER) of |ER|, the share of exact
//! pairs and a histogram. Aggregation is exact integer arithmetic: each ER is held as a
//! 2^-60 fixed-point integer and summed in a `u128`, and the maximum is kept as
//! a rational. Any partitioning of the work therefore gives identical bits.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::UWord;
use crate::kom::{KomVariant, Model, MultiplierConfig};
use crate::rng::XorShift64Star;

/// Widest operand for which every pair is enumerated.
pub const MAX_EXHAUSTIVE_WIDTH: u32 = 8;

const FIXED_SHIFT: u32 = 60;
const SAMPLE_CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("undefined ER: true product is zero")]
    UndefinedErrorRate,
    #[error("width {0} is too large for exhaustive enumeration (max {MAX_EXHAUSTIVE_WIDTH}); use analyze_sampled")]
    TooWideForExhaustive(u32),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("unknown enumeration convention `{0}`")]
    UnknownConvention(String),
    #[error("unknown report format `{0}`")]
    UnknownFormat(String),
}

/// Relative error of an approximate product, as a fraction of the true one.
pub fn error_rate(p_true: u64, p_err: u64) -> Result<f64, AnalysisError> {
    if p_true == 0 {
        return Err(AnalysisError::UndefinedErrorRate);
    }
    Ok((p_true as i128 - p_err as i128) as f64 / p_true as f64)
}

/// Which operand pairs an exhaustive run visits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Every ordered pair with both operands nonzero.
    #[default]
    OrderedNonzero,
    /// Every ordered pair; pairs with a zero true product are skipped.
    OrderedAll,
    /// Pairs `(a, b)` with `0 < a <= b`.
    UnorderedNonzero,
}

impl Convention {
    pub const ALL: [Convention; 3] = [
        Convention::OrderedNonzero,
        Convention::OrderedAll,
        Convention::UnorderedNonzero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Convention::OrderedNonzero => "ordered-nonzero",
            Convention::OrderedAll => "ordered-all",
            Convention::UnorderedNonzero => "unordered-nonzero",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Convention::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| AnalysisError::UnknownConvention(s.to_string()))
    }
}

/// Name recorded for sampled runs in place of an exhaustive convention.
pub const SAMPLED_CONVENTION: &str = "sampled-nonzero";

/// Histogram bucket bounds over |ER|; the first bucket is `ER == 0`, the
/// rest are half-open `(lower, upper]`. The last one, unbounded, only fills
/// for models that can overestimate by more than the true product.
pub const BUCKET_BOUNDS: [(f64, Option<f64>); 6] = [
    (0.0, Some(0.0)),
    (0.0, Some(0.05)),
    (0.05, Some(0.1)),
    (0.1, Some(0.5)),
    (0.5, Some(1.0)),
    (1.0, None),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBucket {
    pub lower: f64,
    /// `None` for the unbounded overflow bucket.
    pub upper: Option<f64>,
    pub count: u64,
}

impl HistogramBucket {
    pub fn label(&self) -> String {
        match self.upper {
            Some(0.0) => "er=0".to_string(),
            Some(u) => format!("({},{}]", self.lower, u),
            None => format!("({},inf)", self.lower),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub width: u32,
    pub model: Model,
    pub variant: KomVariant,
    pub enumeration_convention: String,
    pub seed: Option<u64>,
    pub pairs_evaluated: u64,
    pub aer_percent: f64,
    pub mer_percent: f64,
    pub zero_error_fraction: f64,
    pub histogram: Vec<HistogramBucket>,
}

/// Exact, mergeable partial aggregate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Accumulator {
    pairs: u64,
    er_sum_fixed: u128,
    max_num: u64,
    max_den: u64,
    histogram: [u64; 6],
}

impl Accumulator {
    #[inline]
    fn push(&mut self, p_true: u64, p_model: u64) {
        debug_assert!(p_true > 0);
        let diff = p_true.abs_diff(p_model);
        self.pairs += 1;
        self.er_sum_fixed += ((diff as u128) << FIXED_SHIFT) / p_true as u128;
        self.take_max(diff, p_true);
        let (d, t) = (diff as u128, p_true as u128);
        let bucket = if d == 0 {
            0
        } else if d * 20 <= t {
            1
        } else if d * 10 <= t {
            2
        } else if d * 2 <= t {
            3
        } else if d <= t {
            4
        } else {
            5
        };
        self.histogram[bucket] += 1;
    }

    /// Keeps the larger ratio; ties go to the smaller denominator so the kept
    /// pair does not depend on visiting order.
    #[inline]
    fn take_max(&mut self, num: u64, den: u64) {
        if self.max_den == 0 {
            self.max_num = num;
            self.max_den = den;
            return;
        }
        let lhs = num as u128 * self.max_den as u128;
        let rhs = self.max_num as u128 * den as u128;
        if lhs > rhs || (lhs == rhs && den < self.max_den) {
            self.max_num = num;
            self.max_den = den;
        }
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        self.pairs += other.pairs;
        self.er_sum_fixed += other.er_sum_fixed;
        if other.max_den != 0 {
            self.take_max(other.max_num, other.max_den);
        }
        for (h, o) in self.histogram.iter_mut().zip(other.histogram) {
            *h += o;
        }
        self
    }

    fn finish(self, cfg: &MultiplierConfig, convention: &str, seed: Option<u64>) -> ErrorStats {
        let (aer, mer, zero) = if self.pairs == 0 {
            (0.0, 0.0, 0.0)
        } else {
            let mean_fixed = self.er_sum_fixed as f64 / self.pairs as f64;
            (
                mean_fixed / (1u128 << FIXED_SHIFT) as f64 * 100.0,
                self.max_num as f64 / self.max_den as f64 * 100.0,
                self.histogram[0] as f64 / self.pairs as f64,
            )
        };
        ErrorStats {
            width: cfg.width(),
            model: cfg.model(),
            variant: cfg.variant(),
            enumeration_convention: convention.to_string(),
            seed,
            pairs_evaluated: self.pairs,
            aer_percent: aer,
            mer_percent: mer,
            zero_error_fraction: zero,
            histogram: BUCKET_BOUNDS
                .iter()
                .zip(self.histogram)
                .map(|(&(lower, upper), count)| HistogramBucket { lower, upper, count })
                .collect(),
        }
    }
}

/// Evaluates every operand pair of `convention` at `cfg.width()`.
pub fn analyze_exhaustive(cfg: &MultiplierConfig, convention: Convention) -> Result<ErrorStats, AnalysisError> {
    let width = cfg.width();
    if width > MAX_EXHAUSTIVE_WIDTH {
        return Err(AnalysisError::TooWideForExhaustive(width));
    }
    let n = 1u64 << width;
    let first = match convention {
        Convention::OrderedAll => 0,
        _ => 1,
    };
    let acc = (first..n)
        .into_par_iter()
        .map(|a| {
            let mut acc = Accumulator::default();
            let b_start = match convention {
                Convention::OrderedNonzero => 1,
                Convention::OrderedAll => 0,
                Convention::UnorderedNonzero => a,
            };
            for b in b_start..n {
                let p_true = a * b;
                if p_true == 0 {
                    continue;
                }
                acc.push(p_true, cfg.multiply_raw(a, b));
            }
            acc
        })
        .reduce(Accumulator::default, Accumulator::merge);
    Ok(acc.finish(cfg, convention.name(), None))
}

/// Structured operands always included in a sampled run: 1, all ones, the top
/// bit alone, both alternating patterns and `3·2^m` (Mitchell's worst case).
pub fn corner_operands(width: u32) -> Vec<u64> {
    let max = UWord::max_value(width);
    let mut v = vec![
        1,
        max,
        1u64 << (width - 1),
        0x5555_5555_5555_5555 & max,
        0xAAAA_AAAA_AAAA_AAAA & max,
        3,
        3u64 << (width - 2),
    ];
    v.sort_unstable();
    v.dedup();
    v
}

/// Evaluates `samples` uniformly drawn nonzero pairs plus every ordered pair
/// of [`corner_operands`]. Deterministic in `seed`.
pub fn analyze_sampled(cfg: &MultiplierConfig, samples: u64, seed: u64) -> Result<ErrorStats, AnalysisError> {
    if samples == 0 {
        return Err(AnalysisError::NoSamples);
    }
    let width = cfg.width();
    let span = UWord::max_value(width);
    let corners = corner_operands(width);

    let mut acc = Accumulator::default();
    for &a in &corners {
        for &b in &corners {
            acc.push(a * b, cfg.multiply_raw(a, b));
        }
    }

    let mut rng = XorShift64Star::new(seed);
    let mut remaining = samples;
    let mut chunk = Vec::with_capacity(SAMPLE_CHUNK);
    while remaining > 0 {
        let take = remaining.min(SAMPLE_CHUNK as u64);
        chunk.clear();
        for _ in 0..take {
            let a = rng.next_in_span(1, span);
            let b = rng.next_in_span(1, span);
            chunk.push((a, b));
        }
        let part = chunk
            .par_iter()
            .fold(Accumulator::default, |mut acc, &(a, b)| {
                acc.push(a * b, cfg.multiply_raw(a, b));
                acc
            })
            .reduce(Accumulator::default, Accumulator::merge);
        acc = acc.merge(part);
        remaining -= take;
    }
    Ok(acc.finish(cfg, SAMPLED_CONVENTION, Some(seed)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(AnalysisError::UnknownFormat(other.to_string())),
        }
    }
}

impl ErrorStats {
    /// `# model=...,width=...` line shared by every report format.
    pub fn header_line(&self) -> String {
        format!(
            "# model={},width={},variant={},convention={},seed={}",
            self.model,
            self.width,
            self.variant,
            self.enumeration_convention,
            self.seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into())
        )
    }

    pub fn summary_line(&self) -> String {
        format!("AER={:.6}% MER={:.6}%", self.aer_percent, self.mer_percent)
    }
}

pub fn export_report<W: Write + ?Sized>(stats: &ErrorStats, format: ReportFormat, out: &mut W) -> io::Result<()> {
    match format {
        ReportFormat::Csv => write_csv(stats, out),
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, stats)?;
            writeln!(out)
        }
    }
}

fn write_csv<W: Write + ?Sized>(s: &ErrorStats, out: &mut W) -> io::Result<()> {
    writeln!(out, "{}", s.header_line())?;
    writeln!(
        out,
        "# buckets: first is ER == 0, others are half-open (lower,upper] over |ER| as a fraction"
    )?;
    writeln!(out, "field,value")?;
    writeln!(out, "width,{}", s.width)?;
    writeln!(out, "model,{}", s.model)?;
    writeln!(out, "variant,{}", s.variant)?;
    writeln!(out, "enumeration_convention,{}", s.enumeration_convention)?;
    writeln!(out, "seed,{}", s.seed.map(|v| v.to_string()).unwrap_or_default())?;
    writeln!(out, "pairs_evaluated,{}", s.pairs_evaluated)?;
    writeln!(out, "aer_percent,{:.6}", s.aer_percent)?;
    writeln!(out, "mer_percent,{:.6}", s.mer_percent)?;
    writeln!(out, "zero_error_fraction,{:.6}", s.zero_error_fraction)?;
    writeln!(out)?;
    writeln!(out, "bucket,lower,upper,count,fraction")?;
    for b in &s.histogram {
        let fraction = if s.pairs_evaluated == 0 {
            0.0
        } else {
            b.count as f64 / s.pairs_evaluated as f64
        };
        let upper = b.upper.map(|u| format!("{u:.6}")).unwrap_or_else(|| "inf".into());
        writeln!(
            out,
            "\"{}\",{:.6},{},{},{:.6}",
            b.label(),
            b.lower,
            upper,
            b.count,
            fraction
        )?;
    }
    Ok(())
}
