//! Cleaning, length/ratio filtering and corpus length statistics.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

const QUOTES: &[char] = &[
    '"', '\'', '\u{201C}', '\u{201D}', '\u{201E}', '\u{201F}', '\u{2018}', '\u{2019}', '\u{201A}', '\u{201B}',
    '\u{00AB}', '\u{00BB}', '\u{2039}', '\u{203A}',
];

const SOFT_HYPHEN: char = '\u{00AD}';

fn clean_side(s: &str) -> Option<String> {
    let s = s.trim().trim_matches(QUOTES).trim();
    if s.is_empty() {
        return None;
    }
    Some(s.replace(SOFT_HYPHEN, "-"))
}

/// Strips wrapping quotation marks and maps soft hyphens to `-`.
///
/// Returns `None` (drop the pair) when either side is empty afterwards.
pub fn clean_pair(src: &str, tgt: &str) -> Option<(String, String)> {
    Some((clean_side(src)?, clean_side(tgt)?))
}

pub fn word_count(s: &str) -> usize {
    s.split_whitespace().count()
}

pub fn char_count(s: &str) -> usize {
    s.chars().count()
}

/// Exclusive upper bounds of the length filter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterConfig {
    pub max_words: usize,
    pub max_word_diff: usize,
    pub max_word_ratio: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { max_words: 32, max_word_diff: 7, max_word_ratio: 1.6 }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("filter thresholds must be positive: {0:?}")]
pub struct InvalidFilterConfig(pub FilterConfig);

impl FilterConfig {
    pub fn validate(self) -> Result<Self, InvalidFilterConfig> {
        if self.max_words == 0 || self.max_word_diff == 0 || !(self.max_word_ratio > 0.0) {
            return Err(InvalidFilterConfig(self));
        }
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Keep,
    EmptySide,
    TooLong,
    Misaligned,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Keep => "keep",
            Verdict::EmptySide => "empty",
            Verdict::TooLong => "too-long",
            Verdict::Misaligned => "length-mismatch",
        }
    }

    pub fn is_keep(self) -> bool {
        self == Verdict::Keep
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `max/min` of two positive counts.
pub fn length_ratio(a: usize, b: usize) -> f64 {
    a.max(b) as f64 / a.min(b) as f64
}

/// The filter on word counts alone.
pub fn judge_counts(ws: usize, wt: usize, cfg: &FilterConfig) -> Verdict {
    if ws == 0 || wt == 0 {
        return Verdict::EmptySide;
    }
    if ws >= cfg.max_words || wt >= cfg.max_words {
        return Verdict::TooLong;
    }
    if ws.abs_diff(wt) < cfg.max_word_diff || length_ratio(ws, wt) < cfg.max_word_ratio {
        Verdict::Keep
    } else {
        Verdict::Misaligned
    }
}

pub fn judge(src: &str, tgt: &str, cfg: &FilterConfig) -> Verdict {
    judge_counts(word_count(src), word_count(tgt), cfg)
}

/// Whether a cleaned pair survives the length and ratio filter.
pub fn length_filter(src: &str, tgt: &str, cfg: &FilterConfig) -> bool {
    judge(src, tgt, cfg).is_keep()
}

/// Max, min, mean, population standard deviation and nearest-rank quantiles.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub stdev: f64,
    /// Values at [`QUANTILES`].
    pub quantiles: [f64; 5],
}

pub const QUANTILES: [f64; 5] = [0.25, 0.5, 0.75, 0.99, 0.999];

/// Nearest-rank quantile of ascending `sorted`: the value at rank `ceil(q n)`.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = (libm::ceil(q * n as f64) as usize).clamp(1, n);
    sorted[rank - 1]
}

impl Summary {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let var = sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(Summary {
            count: sorted.len(),
            max: sorted[sorted.len() - 1],
            min: sorted[0],
            mean,
            stdev: libm::sqrt(var),
            quantiles: QUANTILES.map(|q| nearest_rank(&sorted, q)),
        })
    }
}

/// Length statistics of one unit (words or characters).
#[derive(Clone, Debug, PartialEq)]
pub struct UnitStats {
    pub src: Summary,
    pub tgt: Summary,
    /// `|src - tgt|` per pair.
    pub diff: Summary,
    /// `max/min` per pair, over pairs where both sides are non-empty.
    pub ratio: Option<Summary>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusStats {
    pub pairs: usize,
    pub words: UnitStats,
    pub chars: UnitStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("cannot compute statistics of an empty corpus")]
pub struct EmptyCorpus;

fn unit_stats(lengths: &[(usize, usize)]) -> UnitStats {
    let col = |f: &dyn Fn(&(usize, usize)) -> f64| lengths.iter().map(f).collect::<Vec<f64>>();
    let ratios: Vec<f64> = lengths.iter().filter(|(a, b)| *a > 0 && *b > 0).map(|&(a, b)| length_ratio(a, b)).collect();
    UnitStats {
        src: Summary::of(&col(&|p| p.0 as f64)).unwrap(),
        tgt: Summary::of(&col(&|p| p.1 as f64)).unwrap(),
        diff: Summary::of(&col(&|p| p.0.abs_diff(p.1) as f64)).unwrap(),
        ratio: Summary::of(&ratios),
    }
}

pub fn compute_stats<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<CorpusStats, EmptyCorpus> {
    if pairs.is_empty() {
        return Err(EmptyCorpus);
    }
    let words: Vec<(usize, usize)> =
        pairs.iter().map(|(s, t)| (word_count(s.as_ref()), word_count(t.as_ref()))).collect();
    let chars: Vec<(usize, usize)> =
        pairs.iter().map(|(s, t)| (char_count(s.as_ref()), char_count(t.as_ref()))).collect();
    Ok(CorpusStats { pairs: pairs.len(), words: unit_stats(&words), chars: unit_stats(&chars) })
}

/// Which filter a threshold sweep varies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepAxis {
    /// Keep pairs with `0 < words < t` on both sides.
    MaxWords,
    /// Keep pairs with `0 < words < max_words` and `ratio < t`.
    RatioWithFixedCount { max_words: usize },
    /// Keep non-empty pairs with `diff < max_diff` or `ratio < t`.
    RatioWithFixedDiff { max_diff: usize },
}

fn survives(ws: usize, wt: usize, axis: SweepAxis, t: f64) -> bool {
    if ws == 0 || wt == 0 {
        return false;
    }
    match axis {
        SweepAxis::MaxWords => (ws as f64) < t && (wt as f64) < t,
        SweepAxis::RatioWithFixedCount { max_words } => ws < max_words && wt < max_words && length_ratio(ws, wt) < t,
        SweepAxis::RatioWithFixedDiff { max_diff } => ws.abs_diff(wt) < max_diff || length_ratio(ws, wt) < t,
    }
}

/// Fraction of pairs surviving each threshold of `grid`.
///
/// An empty corpus yields fraction 0 everywhere.
pub fn threshold_sweep<S: AsRef<str>>(pairs: &[(S, S)], axis: SweepAxis, grid: &[f64]) -> Vec<(f64, f64)> {
    let counts: Vec<(usize, usize)> =
        pairs.iter().map(|(s, t)| (word_count(s.as_ref()), word_count(t.as_ref()))).collect();
    sweep_counts(&counts, axis, grid)
}

pub fn sweep_counts(counts: &[(usize, usize)], axis: SweepAxis, grid: &[f64]) -> Vec<(f64, f64)> {
    grid.iter()
        .map(|&t| {
            if counts.is_empty() {
                return (t, 0.0);
            }
            let kept = counts.iter().filter(|&&(a, b)| survives(a, b, axis, t)).count();
            (t, kept as f64 / counts.len() as f64)
        })
        .collect()
}
