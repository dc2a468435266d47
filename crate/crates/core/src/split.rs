//! Document-stratified splitting, swap planning and lemma-group sampling.
//!
//! Everything here is a pure function of its inputs and a seed.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::corpus::Side;
use crate::eligibility::EligiblePair;
use crate::seed;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SplitError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("validation ({val}) and test ({test}) sets need more than the {total} pairs available")]
    TooLarge { val: usize, test: usize, total: usize },
    #[error("split fraction {0} is outside [0, 1]")]
    BadFraction(f64),
    #[error("augmentation ratio must be positive, got {0}")]
    BadRatio(f64),
    #[error("need at least 2 eligible pairs to plan swaps, got {0}")]
    TooFewEligible(usize),
    #[error("no lemma group has 2 or more pairs")]
    NoUsableGroup,
}

/// Size of a held-out split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SplitSize {
    Count(usize),
    Fraction(f64),
}

impl SplitSize {
    fn resolve(self, total: usize) -> Result<usize, SplitError> {
        match self {
            SplitSize::Count(n) => Ok(n),
            SplitSize::Fraction(f) if (0.0..=1.0).contains(&f) => Ok(libm::round(f * total as f64) as usize),
            SplitSize::Fraction(f) => Err(SplitError::BadFraction(f)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitSpec {
    pub val: SplitSize,
    pub test: SplitSize,
    pub seed: u64,
}

/// Corpus positions per split, each ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// Hamilton apportionment of `total` over `weights`, capped by `caps`.
///
/// Each document first gets the floor of its proportional share; the
/// leftover units go to the largest fractional remainders (ties to the
/// earlier document) among documents still below their cap.
fn apportion(total: usize, weights: &[usize], caps: &[usize]) -> Vec<usize> {
    let sum: usize = weights.iter().sum();
    let mut alloc = Vec::with_capacity(weights.len());
    let mut remainders = Vec::with_capacity(weights.len());
    for (i, &w) in weights.iter().enumerate() {
        // exact integer arithmetic: share = total * w / sum
        let num = total as u128 * w as u128;
        let floor = ((num / sum as u128) as usize).min(caps[i]);
        alloc.push(floor);
        remainders.push((num % sum as u128, i));
    }
    let mut left = total - alloc.iter().sum::<usize>();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    while left > 0 {
        let before = left;
        for &(_, i) in &remainders {
            if left == 0 {
                break;
            }
            if alloc[i] < caps[i] {
                alloc[i] += 1;
                left -= 1;
            }
        }
        if left == before {
            break;
        }
    }
    alloc
}

/// Splits a corpus so that each document contributes to validation and test
/// in proportion to its size.
///
/// `doc_ids[i]` is the document of corpus position `i`.
pub fn stratified_split<S: AsRef<str>>(doc_ids: &[S], spec: &SplitSpec) -> Result<Split, SplitError> {
    let total = doc_ids.len();
    if total == 0 {
        return Err(SplitError::EmptyCorpus);
    }
    let val = spec.val.resolve(total)?;
    let test = spec.test.resolve(total)?;
    if val + test > total {
        return Err(SplitError::TooLarge { val, test, total });
    }

    let mut docs: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, d) in doc_ids.iter().enumerate() {
        docs.entry(d.as_ref()).or_default().push(i);
    }
    let sizes: Vec<usize> = docs.values().map(Vec::len).collect();
    let val_per_doc = apportion(val, &sizes, &sizes);
    let room: Vec<usize> = sizes.iter().zip(&val_per_doc).map(|(s, v)| s - v).collect();
    let test_per_doc = apportion(test, &sizes, &room);

    let mut rng = seed::rng(seed::stage_seed(spec.seed, "split"));
    let mut split = Split::default();
    for (k, members) in docs.into_values().enumerate() {
        let mut members = members;
        members.shuffle(&mut rng);
        let (v, rest) = members.split_at(val_per_doc[k]);
        let (t, tr) = rest.split_at(test_per_doc[k]);
        split.val.extend_from_slice(v);
        split.test.extend_from_slice(t);
        split.train.extend_from_slice(tr);
    }
    split.train.sort_unstable();
    split.val.sort_unstable();
    split.test.sort_unstable();
    Ok(split)
}

/// Donor pairs for one augmentation run, as indices into the eligible pool.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapPlan {
    pub donors: Vec<(usize, usize)>,
    /// Number of synthetic sentence pairs the run should end up with.
    pub target: usize,
    /// Donor pairs that were wanted but could not be drawn.
    pub shortfall: usize,
}

impl SwapPlan {
    /// Synthetic pairs the plan produces before trimming.
    pub fn outputs(&self) -> usize {
        2 * self.donors.len()
    }

    /// How many outputs to keep: the target, or everything when short.
    pub fn keep(&self) -> usize {
        self.target.min(self.outputs())
    }
}

/// Synthetic pairs wanted for a base corpus of `base_size` at `ratio`.
pub fn target_count(base_size: usize, ratio: f64) -> usize {
    libm::round(ratio * base_size as f64) as usize
}

/// Draws disjoint donor pairs uniformly without replacement.
pub fn plan_swaps(pool: usize, base_size: usize, ratio: f64, seed_value: u64) -> Result<SwapPlan, SplitError> {
    if !(ratio > 0.0) {
        return Err(SplitError::BadRatio(ratio));
    }
    if pool < 2 {
        return Err(SplitError::TooFewEligible(pool));
    }
    let target = target_count(base_size, ratio);
    let wanted = target.div_ceil(2);
    let mut order: Vec<usize> = (0..pool).collect();
    order.shuffle(&mut seed::rng(seed::stage_seed(seed_value, "plan")));
    let donors: Vec<(usize, usize)> = order.chunks_exact(2).take(wanted).map(|c| (c[0], c[1])).collect();
    Ok(SwapPlan { shortfall: wanted - donors.len(), donors, target })
}

/// Which predicate lemmas key a group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LemmaKeying {
    #[default]
    Both,
    Source,
    Target,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LemmaKey {
    pub src: String,
    pub tgt: String,
}

impl LemmaKey {
    pub fn of(pair: &EligiblePair, keying: LemmaKeying) -> LemmaKey {
        let lemma = |side| String::from(pair.predicate_lemma(side));
        match keying {
            LemmaKeying::Both => LemmaKey { src: lemma(Side::Source), tgt: lemma(Side::Target) },
            LemmaKeying::Source => LemmaKey { src: lemma(Side::Source), tgt: String::new() },
            LemmaKeying::Target => LemmaKey { src: String::new(), tgt: lemma(Side::Target) },
        }
    }
}

/// Eligible pairs grouped by predicate lemma key.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaGroupIndex {
    pub groups: BTreeMap<LemmaKey, Vec<usize>>,
}

impl LemmaGroupIndex {
    pub fn build(eligible: &[EligiblePair], keying: LemmaKeying) -> Self {
        Self::from_keys(eligible.iter().map(|p| LemmaKey::of(p, keying)))
    }

    /// Groups positions by the keys given for them.
    pub fn from_keys<I: IntoIterator<Item = LemmaKey>>(keys: I) -> Self {
        let mut groups: BTreeMap<LemmaKey, Vec<usize>> = BTreeMap::new();
        for (i, k) in keys.into_iter().enumerate() {
            groups.entry(k).or_default().push(i);
        }
        LemmaGroupIndex { groups }
    }

    pub fn usable_groups(&self) -> usize {
        self.groups.values().filter(|g| g.len() >= 2).count()
    }
}

/// Draws `demand` disjoint donor pairs round-robin over lemma groups.
///
/// Groups are visited in key order, one pair per visit, drawn uniformly
/// from the group's unused members. `skip(a, b)` rejects a candidate pair
/// (for example when the swap would be a no-op); a member that cannot be
/// paired with any remaining member is discarded. Returns fewer pairs than
/// asked when every group runs dry.
pub fn sample_lemma_pairs(
    index: &LemmaGroupIndex,
    demand: usize,
    seed_value: u64,
    mut skip: impl FnMut(usize, usize) -> bool,
) -> Result<Vec<(usize, usize)>, SplitError> {
    if index.usable_groups() == 0 {
        return Err(SplitError::NoUsableGroup);
    }
    let mut rng = seed::rng(seed::stage_seed(seed_value, "lemma"));
    let mut pools: Vec<Vec<usize>> = index
        .groups
        .values()
        .filter(|g| g.len() >= 2)
        .map(|g| {
            let mut g = g.clone();
            g.shuffle(&mut rng);
            g
        })
        .collect();

    let mut out = Vec::new();
    while out.len() < demand {
        let mut progressed = false;
        for pool in pools.iter_mut() {
            if out.len() == demand {
                break;
            }
            while pool.len() >= 2 {
                let a = pool.pop().unwrap();
                match pool.iter().rposition(|&b| !skip(a, b)) {
                    Some(j) => {
                        let b = pool.remove(j);
                        out.push((a, b));
                        progressed = true;
                        break;
                    }
                    None => continue,
                }
            }
        }
        if !progressed {
            break;
        }
    }
    Ok(out)
}
