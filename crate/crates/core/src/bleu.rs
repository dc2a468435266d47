//! Corpus-level BLEU with a single reference per hypothesis.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub const MAX_ORDER: usize = 4;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BleuError {
    #[error("no sentences to score")]
    EmptyCorpus,
    #[error("{hyps} hypotheses but {refs} references")]
    LengthMismatch { hyps: usize, refs: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BleuReport {
    /// In `[0, 1]`; multiply by 100 for the usual reporting scale.
    pub bleu: f64,
    /// Modified n-gram precisions for n = 1..=4.
    pub precisions: [f64; MAX_ORDER],
    pub brevity_penalty: f64,
    pub hyp_length: usize,
    pub ref_length: usize,
    /// Clipped matches and hypothesis n-gram totals per order.
    pub matches: [u64; MAX_ORDER],
    pub totals: [u64; MAX_ORDER],
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> BTreeMap<Vec<&str>, u64> {
    let mut counts = BTreeMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped n-gram statistics for one sentence pair, mergeable by addition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SentenceCounts {
    pub matches: [u64; MAX_ORDER],
    pub totals: [u64; MAX_ORDER],
    pub hyp_length: usize,
    pub ref_length: usize,
}

impl SentenceCounts {
    pub fn of<S: AsRef<str>, T: AsRef<str>>(hyp: &[S], reference: &[T]) -> Self {
        let mut c = SentenceCounts { hyp_length: hyp.len(), ref_length: reference.len(), ..Default::default() };
        for n in 1..=MAX_ORDER {
            let h = ngram_counts(hyp, n);
            let r = ngram_counts(reference, n);
            c.totals[n - 1] = h.values().sum();
            c.matches[n - 1] = h.iter().map(|(g, &k)| k.min(r.get(g).copied().unwrap_or(0))).sum();
        }
        c
    }

    pub fn merge(mut self, other: &SentenceCounts) -> Self {
        for i in 0..MAX_ORDER {
            self.matches[i] += other.matches[i];
            self.totals[i] += other.totals[i];
        }
        self.hyp_length += other.hyp_length;
        self.ref_length += other.ref_length;
        self
    }

    pub fn report(&self) -> BleuReport {
        let precisions: [f64; MAX_ORDER] = core::array::from_fn(|i| {
            if self.totals[i] == 0 {
                0.0
            } else {
                self.matches[i] as f64 / self.totals[i] as f64
            }
        });
        let (c, r) = (self.hyp_length as f64, self.ref_length as f64);
        let brevity_penalty = if self.hyp_length == 0 {
            0.0
        } else if c < r {
            libm::exp(1.0 - r / c)
        } else {
            1.0
        };
        let bleu = if precisions.contains(&0.0) {
            0.0
        } else {
            let log_mean = precisions.iter().map(|&p| libm::log(p)).sum::<f64>() / MAX_ORDER as f64;
            brevity_penalty * libm::exp(log_mean)
        };
        BleuReport {
            bleu,
            precisions,
            brevity_penalty,
            hyp_length: self.hyp_length,
            ref_length: self.ref_length,
            matches: self.matches,
            totals: self.totals,
        }
    }
}

pub fn corpus_bleu<S, T>(hypotheses: &[Vec<S>], references: &[Vec<T>]) -> Result<BleuReport, BleuError>
where
    S: AsRef<str>,
    T: AsRef<str>,
{
    if hypotheses.len() != references.len() {
        return Err(BleuError::LengthMismatch { hyps: hypotheses.len(), refs: references.len() });
    }
    if hypotheses.is_empty() {
        return Err(BleuError::EmptyCorpus);
    }
    let total = hypotheses
        .iter()
        .zip(references)
        .map(|(h, r)| SentenceCounts::of(h, r))
        .fold(SentenceCounts::default(), |acc, c| acc.merge(&c));
    Ok(total.report())
}

const TRAILING_PUNCT: &[char] = &['.', ',', '!', '?', ';', ':'];

/// Whitespace split, with trailing `. , ! ? ; :` split off each word.
///
/// Every peeled punctuation mark becomes its own token. A word made only of
/// punctuation stays whole.
pub fn tokenize_for_bleu(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let stem = word.trim_end_matches(TRAILING_PUNCT);
        if stem.is_empty() {
            out.push(String::from(word));
            continue;
        }
        out.push(String::from(stem));
        out.extend(word[stem.len()..].chars().map(String::from));
    }
    out
}
