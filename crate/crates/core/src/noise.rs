//! Depth-weighted source-side noising: blanking, dropout and replacement.
//!
//! Words near the root of the dependency tree are assumed to carry most of
//! a sentence's meaning, so they are the least likely to be picked. A word
//! at depth `d` (root = 1) gets the raw score `q = 1 - 2^-(d-1)`, and the
//! scores are turned into a selection distribution with a softmax. The
//! target side is never touched.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use thiserror::Error;

use crate::deptree::DepTree;

/// Placeholder written over blanked words.
pub const BLANK: &str = "BLANK";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NoiseMethod {
    Blank,
    Dropout,
    Replace,
}

impl NoiseMethod {
    pub const ALL: [NoiseMethod; 3] = [NoiseMethod::Blank, NoiseMethod::Dropout, NoiseMethod::Replace];

    pub fn as_str(self) -> &'static str {
        match self {
            NoiseMethod::Blank => "blank",
            NoiseMethod::Dropout => "dropout",
            NoiseMethod::Replace => "replace",
        }
    }

    pub fn parse(s: &str) -> Option<NoiseMethod> {
        NoiseMethod::ALL.into_iter().find(|m| m.as_str() == s)
    }
}

impl fmt::Display for NoiseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NoiseError {
    #[error("cannot select {count} words from a sentence of {len}")]
    TooMany { count: usize, len: usize },
    #[error("frequency table has no alternative to {0:?}")]
    NoAlternative(String),
}

/// Per-token depth, raw score and selection probability, indexed by `id - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionModel {
    pub depths: Vec<usize>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl SelectionModel {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// `1 - 2^-(depth-1)`; zero at the root.
pub fn depth_score(depth: usize) -> f64 {
    let mut half_powers = 1.0f64;
    for _ in 1..depth {
        half_powers *= 0.5;
    }
    1.0 - half_powers
}

pub fn softmax(xs: &[f64]) -> Vec<f64> {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = xs.iter().map(|&x| libm::exp(x - max)).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

pub fn selection_probs(tree: &DepTree) -> SelectionModel {
    let depths = tree.depths();
    let q: Vec<f64> = depths.iter().map(|&d| depth_score(d)).collect();
    let p = softmax(&q);
    SelectionModel { depths, q, p }
}

/// How many words get selected, or whether each is drawn independently.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SelectionMode {
    /// Draw `max(1, round(ratio * n))` distinct words from the softmax.
    FixedCount { ratio: f64 },
    /// Select every word independently with probability `q`.
    Bernoulli,
}

impl Default for SelectionMode {
    fn default() -> Self {
        SelectionMode::FixedCount { ratio: 0.15 }
    }
}

pub fn default_count(len: usize, ratio: f64) -> usize {
    let c = libm::round(ratio * len as f64) as usize;
    c.clamp(1, len.max(1))
}

/// Draws `count` distinct ids, proportionally to `p`, without replacement.
pub fn select_words<R: Rng + ?Sized>(
    model: &SelectionModel,
    count: usize,
    rng: &mut R,
) -> Result<BTreeSet<usize>, NoiseError> {
    let n = model.len();
    if count > n {
        return Err(NoiseError::TooMany { count, len: n });
    }
    let mut weights = model.p.clone();
    let mut picked = BTreeSet::new();
    for _ in 0..count {
        let total: f64 = weights.iter().sum();
        let mut r = rng.random::<f64>() * total;
        let mut choice = None;
        for (i, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            choice = Some(i);
            if r < w {
                break;
            }
            r -= w;
        }
        // rounding can leave `r` past the last weight; `choice` is then the
        // last positive one
        let i = choice.expect("fewer picks than positive weights");
        weights[i] = 0.0;
        picked.insert(i + 1);
    }
    Ok(picked)
}

/// Selects each id independently with probability `q`.
pub fn select_bernoulli<R: Rng + ?Sized>(model: &SelectionModel, rng: &mut R) -> BTreeSet<usize> {
    model.q.iter().enumerate().filter(|&(_, &q)| rng.random::<f64>() < q).map(|(i, _)| i + 1).collect()
}

pub fn select<R: Rng + ?Sized>(model: &SelectionModel, mode: SelectionMode, rng: &mut R) -> BTreeSet<usize> {
    match mode {
        SelectionMode::FixedCount { ratio } => {
            let count = default_count(model.len(), ratio);
            select_words(model, count, rng).expect("count is clamped to the sentence length")
        }
        SelectionMode::Bernoulli => select_bernoulli(model, rng),
    }
}

fn join<'a>(words: impl Iterator<Item = &'a str>) -> String {
    let mut out = String::new();
    for (i, w) in words.enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

/// Replaces the selected words with [`BLANK`]; output is space-separated.
pub fn apply_blank<S: AsRef<str>>(forms: &[S], selected: &BTreeSet<usize>) -> String {
    join(forms.iter().enumerate().map(|(i, f)| if selected.contains(&(i + 1)) { BLANK } else { f.as_ref() }))
}

/// Deletes the selected words. `None` when nothing would be left.
pub fn apply_dropout<S: AsRef<str>>(forms: &[S], selected: &BTreeSet<usize>) -> Option<String> {
    let out = join(forms.iter().enumerate().filter(|(i, _)| !selected.contains(&(i + 1))).map(|(_, f)| f.as_ref()));
    (!out.is_empty()).then_some(out)
}

/// Replaces each selected word with the other word of closest corpus count.
pub fn apply_replace<S: AsRef<str>>(
    forms: &[S],
    selected: &BTreeSet<usize>,
    freq: &FreqTable,
) -> Result<String, NoiseError> {
    let mut out: Vec<&str> = Vec::with_capacity(forms.len());
    for (i, f) in forms.iter().enumerate() {
        let f = f.as_ref();
        if selected.contains(&(i + 1)) {
            out.push(freq.nearest(f).ok_or_else(|| NoiseError::NoAlternative(f.into()))?);
        } else {
            out.push(f);
        }
    }
    Ok(join(out.into_iter()))
}

/// A noised pair: the rewritten source, the untouched target and the ids
/// that were selected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoisedPair {
    pub src: String,
    pub tgt: String,
    pub selected: BTreeSet<usize>,
}

/// Everything needed to noise a sentence pair.
#[derive(Clone, Debug)]
pub struct Noiser {
    pub method: NoiseMethod,
    pub mode: SelectionMode,
    /// Only consulted by [`NoiseMethod::Replace`].
    pub freq: FreqTable,
}

impl Noiser {
    pub fn new(method: NoiseMethod, mode: SelectionMode, freq: FreqTable) -> Self {
        Noiser { method, mode, freq }
    }

    /// Noises the source side. `Ok(None)` when dropout would leave nothing.
    pub fn apply<R: Rng + ?Sized>(
        &self,
        src: &DepTree,
        tgt: &str,
        rng: &mut R,
    ) -> Result<Option<NoisedPair>, NoiseError> {
        let model = selection_probs(src);
        let selected = select(&model, self.mode, rng);
        let forms: Vec<&str> = src.sentence().forms().collect();
        let out = match self.method {
            NoiseMethod::Blank => Some(apply_blank(&forms, &selected)),
            NoiseMethod::Dropout => apply_dropout(&forms, &selected),
            NoiseMethod::Replace => Some(apply_replace(&forms, &selected, &self.freq)?),
        };
        Ok(out.map(|src| NoisedPair { src, tgt: tgt.into(), selected }))
    }
}

/// Unigram counts over a corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreqTable {
    counts: BTreeMap<String, u64>,
    // ascending by (count, word)
    by_count: Vec<(u64, String)>,
}

impl FreqTable {
    /// Zero counts are dropped.
    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut map: BTreeMap<String, u64> = BTreeMap::new();
        for (w, c) in counts {
            if c > 0 {
                *map.entry(w.into()).or_default() += c;
            }
        }
        Self::from_map(map)
    }

    pub fn from_words<'a, I: IntoIterator<Item = &'a str>>(words: I) -> Self {
        let mut map: BTreeMap<String, u64> = BTreeMap::new();
        for w in words {
            *map.entry(w.into()).or_default() += 1;
        }
        Self::from_map(map)
    }

    fn from_map(counts: BTreeMap<String, u64>) -> Self {
        let mut by_count: Vec<(u64, String)> = counts.iter().map(|(w, &c)| (c, w.clone())).collect();
        by_count.sort();
        FreqTable { counts, by_count }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// Rows sorted by descending count, then word.
    pub fn rows(&self) -> Vec<(&str, u64)> {
        let mut rows: Vec<(&str, u64)> = self.counts.iter().map(|(w, &c)| (w.as_str(), c)).collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows
    }

    /// Smallest word other than `exclude` with exactly `count` occurrences.
    fn first_with_count(&self, count: u64, exclude: &str) -> Option<&str> {
        let start = self.by_count.partition_point(|(c, _)| *c < count);
        self.by_count[start..].iter().take_while(|(c, _)| *c == count).map(|(_, w)| w.as_str()).find(|w| *w != exclude)
    }

    /// The other word whose count is nearest to `word`'s, ties broken by
    /// the lexicographically smaller word. Unknown words count as 0.
    pub fn nearest(&self, word: &str) -> Option<&str> {
        let c = self.count(word);
        if let Some(w) = self.first_with_count(c, word) {
            return Some(w);
        }
        let below = self.by_count.partition_point(|(k, _)| *k < c);
        let above = self.by_count.partition_point(|(k, _)| *k <= c);
        let lo = below.checked_sub(1).map(|i| self.by_count[i].0);
        let hi = self.by_count.get(above).map(|(k, _)| *k);
        match (lo, hi) {
            (None, None) => None,
            (Some(l), None) => self.first_with_count(l, word),
            (None, Some(h)) => self.first_with_count(h, word),
            (Some(l), Some(h)) => {
                let (dl, dh) = (c - l, h - c);
                let wl = self.first_with_count(l, word);
                let wh = self.first_with_count(h, word);
                if dl < dh {
                    wl
                } else if dh < dl {
                    wh
                } else {
                    wl.min(wh)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::seed;
    use alloc::vec;

    fn set(ids: &[usize]) -> BTreeSet<usize> {
        ids.iter().copied().collect()
    }

    #[test]
    fn scores_by_depth() {
        assert_eq!(depth_score(1), 0.0);
        assert_eq!(depth_score(2), 0.5);
        assert_eq!(depth_score(3), 0.75);
        assert_eq!(depth_score(4), 0.875);
    }

    #[test]
    fn two_node_softmax() {
        let t = fixtures::tree(&[("Birds", "NOUN", 2, "nsubj", true), ("fly", "VERB", 0, "root", true)]);
        let m = selection_probs(&t);
        assert_eq!(m.q, vec![0.5, 0.0]);
        // e^0.5 / (1 + e^0.5) = 0.622459331...
        assert!((m.p[0] - 0.622_459_331_201_854_6).abs() < 1e-12);
        assert!((m.p[1] - 0.377_540_668_798_145_4).abs() < 1e-12);
    }

    #[test]
    fn select_all() {
        let m = selection_probs(&fixtures::chasing_en());
        let all = select_words(&m, 9, &mut seed::rng(1)).unwrap();
        assert_eq!(all, (1..=9).collect());
        assert_eq!(select_words(&m, 10, &mut seed::rng(1)), Err(NoiseError::TooMany { count: 10, len: 9 }));
    }

    #[test]
    fn dominant_weight_wins() {
        let m = SelectionModel { depths: vec![1, 1, 1], q: vec![0.0; 3], p: vec![1e-9, 1.0 - 2e-9, 1e-9] };
        let mut rng = seed::rng(42);
        let hits = (0..10_000).filter(|_| select_words(&m, 1, &mut rng).unwrap() == set(&[2])).count();
        assert!(hits as f64 / 10_000.0 > 0.99, "{hits}");
    }

    #[test]
    fn empirical_frequencies_follow_p() {
        let m = selection_probs(&fixtures::chasing_en());
        let mut rng = seed::rng(3);
        let mut counts = [0usize; 9];
        let draws = 20_000;
        for _ in 0..draws {
            let s = select_words(&m, 1, &mut rng).unwrap();
            counts[*s.iter().next().unwrap() - 1] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let p = m.p[i];
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!((c as f64 - draws as f64 * p).abs() < 4.0 * sigma, "token {} {c} vs {p}", i + 1);
        }
    }

    #[test]
    fn seeded_selection_repeats() {
        let m = selection_probs(&fixtures::chasing_en());
        let a = select_words(&m, 3, &mut seed::rng(9)).unwrap();
        let b = select_words(&m, 3, &mut seed::rng(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn default_count_rule() {
        assert_eq!(default_count(7, 0.15), 1);
        assert_eq!(default_count(20, 0.15), 3);
        assert_eq!(default_count(1, 0.15), 1);
        assert_eq!(default_count(4, 2.0), 4);
    }

    #[test]
    fn bernoulli_never_selects_root() {
        let t = fixtures::chasing_en();
        let m = selection_probs(&t);
        let mut rng = seed::rng(0);
        for _ in 0..500 {
            assert!(!select_bernoulli(&m, &mut rng).contains(&t.root()));
        }
    }

    const BEACHES: [&str; 7] = ["We", "shall", "fight", "on", "the", "beaches", "."];

    #[test]
    fn blanking() {
        assert_eq!(apply_blank(&BEACHES, &set(&[4, 6])), "We shall fight BLANK the BLANK .");
        assert_eq!(apply_blank(&BEACHES, &set(&[])), "We shall fight on the beaches .");
        assert_eq!(apply_blank(&BEACHES, &(1..=7).collect()), "BLANK BLANK BLANK BLANK BLANK BLANK BLANK");
    }

    #[test]
    fn noising_a_parsed_sentence() {
        let t = fixtures::parse(fixtures::BEACHES_EN);
        let forms: Vec<&str> = t.sentence().forms().collect();
        let picked = set(&[4, 6]);
        assert_eq!(apply_blank(&forms, &picked), "We shall fight BLANK the BLANK .");
        assert_eq!(apply_dropout(&forms, &picked).unwrap(), "We shall fight the .");
        // on and the sit at depth 3 below beaches; fight is the root
        assert_eq!(selection_probs(&t).depths, vec![2, 2, 1, 3, 3, 2, 2]);
    }

    #[test]
    fn dropout() {
        assert_eq!(apply_dropout(&BEACHES, &set(&[4, 6])).unwrap(), "We shall fight the .");
        assert_eq!(apply_dropout(&BEACHES, &set(&[])).unwrap(), "We shall fight on the beaches .");
        assert_eq!(apply_dropout(&BEACHES, &(1..=7).collect()), None);
    }

    #[test]
    fn replacement_by_nearest_count() {
        let f = FreqTable::from_counts([("cat", 10), ("dog", 9), ("soup", 2)]);
        assert_eq!(f.nearest("cat"), Some("dog"));
        assert_eq!(apply_replace(&["the", "cat"], &set(&[2]), &f).unwrap(), "the dog");
        let f = FreqTable::from_counts([("a", 5), ("b", 5), ("c", 1)]);
        assert_eq!(f.nearest("a"), Some("b"));
        assert_eq!(f.nearest("b"), Some("a"));
        assert_eq!(f.nearest("c"), Some("a"));
        let lonely = FreqTable::from_counts([("only", 3)]);
        assert_eq!(apply_replace(&["only"], &set(&[1]), &lonely), Err(NoiseError::NoAlternative("only".into())));
    }

    fn brute_nearest<'a>(counts: &'a [(String, u64)], word: &str) -> Option<&'a str> {
        let c = counts.iter().find(|(w, _)| w == word).map(|(_, c)| *c).unwrap_or(0);
        counts
            .iter()
            .filter(|(w, _)| w != word)
            .min_by(|(wa, ca), (wb, cb)| ca.abs_diff(c).cmp(&cb.abs_diff(c)).then(wa.cmp(wb)))
            .map(|(w, _)| w.as_str())
    }

    #[test]
    fn nearest_matches_brute_force() {
        use rand::Rng as _;
        let mut rng = seed::rng(2024);
        let words: Vec<String> = (0..100).map(|i| alloc::format!("w{i:03}")).collect();
        let counts: Vec<(String, u64)> = words.iter().map(|w| (w.clone(), rng.random_range(1..40))).collect();
        let table = FreqTable::from_counts(counts.iter().map(|(w, c)| (w.as_str(), *c)));
        for w in words.iter().map(String::as_str).chain(["unseen"]) {
            assert_eq!(table.nearest(w), brute_nearest(&counts, w), "{w}");
        }
        let sentence: Vec<&str> = words.iter().take(20).map(String::as_str).collect();
        let m = SelectionModel { depths: vec![1; 20], q: vec![0.0; 20], p: vec![0.05; 20] };
        let chosen = select_words(&m, 5, &mut rng).unwrap();
        let out = apply_replace(&sentence, &chosen, &table).unwrap();
        let expected: Vec<&str> = sentence
            .iter()
            .enumerate()
            .map(|(i, w)| if chosen.contains(&(i + 1)) { brute_nearest(&counts, w).unwrap() } else { *w })
            .collect();
        assert_eq!(out, expected.join(" "));
    }

    #[test]
    fn rows_sorted_by_count_then_word() {
        let f = FreqTable::from_words("b a b c a b".split(' '));
        assert_eq!(f.rows(), vec![("b", 3), ("a", 2), ("c", 1)]);
    }
}
