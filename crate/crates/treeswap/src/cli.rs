//! Command line definitions and the entry point shared by the binary.

use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use treeswap_core::noise::NoiseMethod;
use treeswap_core::preprocess::{FilterConfig, SweepAxis};
use treeswap_core::split::{LemmaKeying, SplitSize};
use treeswap_core::{LabelConfig, SwapMethod};

use crate::config;

/// Exit status for a failed run.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config keys or option values. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Missing or malformed input. Exit code 2.
    #[error("{0:#}")]
    Data(#[from] anyhow::Error),
    /// `--help` or `--version` output. Exit code 0.
    #[error("{0}")]
    Help(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Help(_) => 0,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser, Debug)]
#[command(name = "treeswap", version, about = "Filter, split and augment dependency-parsed parallel corpora")]
pub struct Cli {
    /// key=value file of default flag values; flags on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Strip quotes and soft hyphens, then apply the length filter
    #[command(args_override_self = true)]
    Clean(CleanArgs),
    /// Word and character length statistics
    #[command(args_override_self = true)]
    Stats(StatsArgs),
    /// Fraction of pairs surviving a range of filter thresholds
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Document-stratified train/validation/test split
    #[command(args_override_self = true)]
    Split(SplitArgs),
    /// Convert CoNLL-U parses of both sides into the TSV cache
    #[command(args_override_self = true)]
    Cache(CacheArgs),
    /// Find the pairs usable for swapping and tally the rest
    #[command(args_override_self = true)]
    Eligible(EligibleArgs),
    /// Generate synthetic pairs and shuffle them into the training set
    #[command(args_override_self = true)]
    Augment(AugmentArgs),
    /// Corpus BLEU of a hypothesis file against a reference file
    #[command(args_override_self = true)]
    Bleu(BleuArgs),
    /// Show trees, depths and triplets of cached pairs
    #[command(args_override_self = true)]
    Inspect(InspectArgs),
    /// Write a seeded synthetic parsed corpus
    #[command(args_override_self = true)]
    Synth(SynthArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Clean(_) => "clean",
            Command::Stats(_) => "stats",
            Command::Sweep(_) => "sweep",
            Command::Split(_) => "split",
            Command::Cache(_) => "cache",
            Command::Eligible(_) => "eligible",
            Command::Augment(_) => "augment",
            Command::Bleu(_) => "bleu",
            Command::Inspect(_) => "inspect",
            Command::Synth(_) => "synth",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct TextArgs {
    /// Source side, one sentence per line
    #[arg(long, value_name = "FILE")]
    pub src: PathBuf,
    /// Target side, aligned with --src by line
    #[arg(long, value_name = "FILE")]
    pub tgt: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct CorpusArgs {
    #[command(flatten)]
    pub text: TextArgs,
    /// pair_id/doc_id/subcorpus TSV aligned with the text files
    #[arg(long, value_name = "FILE")]
    pub meta: Option<PathBuf>,
    /// Document id used when there is no --meta
    #[arg(long, default_value = "doc")]
    pub doc: String,
}

#[derive(Args, Debug, Clone)]
pub struct FilterArgs {
    #[arg(long, default_value_t = 32)]
    pub max_words: usize,
    #[arg(long, default_value_t = 7)]
    pub max_word_diff: usize,
    #[arg(long, default_value_t = 1.6)]
    pub max_word_ratio: f64,
}

impl FilterArgs {
    pub fn config(&self) -> Result<FilterConfig, CliError> {
        FilterConfig {
            max_words: self.max_words,
            max_word_diff: self.max_word_diff,
            max_word_ratio: self.max_word_ratio,
        }
        .validate()
        .map_err(|e| usage(e.to_string()))
    }
}

#[derive(Args, Debug, Clone)]
pub struct LabelArgs {
    #[arg(long, value_delimiter = ',', default_value = "nsubj")]
    pub subject_labels: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "obj,dobj")]
    pub object_labels: Vec<String>,
    /// Only accept predicates that are the sentence root
    #[arg(long)]
    pub require_root_predicate: bool,
    /// Accept sides without a subject (pro-drop); such pairs cannot swap subjects
    #[arg(long)]
    pub allow_dropped_subject: bool,
}

impl LabelArgs {
    pub fn config(&self) -> Result<LabelConfig, CliError> {
        Ok(LabelConfig::new(self.subject_labels.clone(), self.object_labels.clone())
            .map_err(|e| usage(e.to_string()))?
            .with_root_predicate(self.require_root_predicate)
            .with_dropped_subject(self.allow_dropped_subject))
    }
}

#[derive(Args, Debug, Clone)]
pub struct CleanArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    /// Only clean; keep every non-empty pair
    #[arg(long)]
    pub no_filter: bool,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct StatsArgs {
    #[command(flatten)]
    pub text: TextArgs,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Vary the word-count bound
    MaxWords,
    /// Vary the ratio bound with the word-count bound fixed
    RatioFixedCount,
    /// Vary the ratio bound with the difference bound fixed
    RatioFixedDiff,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub text: TextArgs,
    #[arg(long, value_enum)]
    pub axis: Axis,
    /// Ascending thresholds, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid: Vec<f64>,
    /// Word-count bound for ratio-fixed-count
    #[arg(long, default_value_t = 32)]
    pub max_words: usize,
    /// Difference bound for ratio-fixed-diff
    #[arg(long, default_value_t = 7)]
    pub max_word_diff: usize,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

impl SweepArgs {
    pub fn axis(&self) -> SweepAxis {
        match self.axis {
            Axis::MaxWords => SweepAxis::MaxWords,
            Axis::RatioFixedCount => SweepAxis::RatioWithFixedCount { max_words: self.max_words },
            Axis::RatioFixedDiff => SweepAxis::RatioWithFixedDiff { max_diff: self.max_word_diff },
        }
    }
}

/// A count ("20000") or a fraction ("0.1").
pub fn parse_split_size(s: &str) -> Result<SplitSize, String> {
    if s.contains(['.', 'e', 'E']) {
        let f: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
        if !(0.0..=1.0).contains(&f) {
            return Err(format!("fraction {f} is outside [0, 1]"));
        }
        Ok(SplitSize::Fraction(f))
    } else {
        s.parse().map(SplitSize::Count).map_err(|_| format!("not a count: {s}"))
    }
}

#[derive(Args, Debug, Clone)]
pub struct SplitArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Validation size: a pair count or a fraction
    #[arg(long, value_parser = parse_split_size)]
    pub val: SplitSize,
    /// Test size: a pair count or a fraction
    #[arg(long, value_parser = parse_split_size)]
    pub test: SplitSize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct CacheArgs {
    /// Source-side CoNLL-U
    #[arg(long, value_name = "FILE")]
    pub src: PathBuf,
    /// Target-side CoNLL-U, one sentence per source sentence
    #[arg(long, value_name = "FILE")]
    pub tgt: PathBuf,
    /// pair_id/doc_id/subcorpus TSV; otherwise ids come from `# newdoc id` comments
    #[arg(long, value_name = "FILE")]
    pub meta: Option<PathBuf>,
    /// Document id before the first `# newdoc id`
    #[arg(long, default_value = "doc")]
    pub doc: String,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct EligibleArgs {
    #[arg(long, value_name = "FILE")]
    pub cache: PathBuf,
    #[command(flatten)]
    pub labels: LabelArgs,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Obj,
    Subj,
    ObjLemma,
    SubjLemma,
    Pred,
    Blank,
    Dropout,
    Replace,
}

/// A swap or a noising method.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Augmentation {
    Swap(SwapMethod),
    Noise(NoiseMethod),
}

impl Method {
    pub fn augmentation(self) -> Augmentation {
        match self {
            Method::Obj => Augmentation::Swap(SwapMethod::Obj),
            Method::Subj => Augmentation::Swap(SwapMethod::Subj),
            Method::ObjLemma => Augmentation::Swap(SwapMethod::ObjLemma),
            Method::SubjLemma => Augmentation::Swap(SwapMethod::SubjLemma),
            Method::Pred => Augmentation::Swap(SwapMethod::Pred),
            Method::Blank => Augmentation::Noise(NoiseMethod::Blank),
            Method::Dropout => Augmentation::Noise(NoiseMethod::Dropout),
            Method::Replace => Augmentation::Noise(NoiseMethod::Replace),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self.augmentation() {
            Augmentation::Swap(m) => m.as_str(),
            Augmentation::Noise(m) => m.as_str(),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// A fixed share of the words, drawn from the depth softmax
    Fixed,
    /// Every word independently with its depth score
    Bernoulli,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keying {
    Both,
    Src,
    Tgt,
}

impl From<Keying> for LemmaKeying {
    fn from(k: Keying) -> Self {
        match k {
            Keying::Both => LemmaKeying::Both,
            Keying::Src => LemmaKeying::Source,
            Keying::Tgt => LemmaKeying::Target,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct AugmentArgs {
    /// TSV parse cache of the training pairs
    #[arg(long, value_name = "FILE")]
    pub cache: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Synthetic pairs per base training pair
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Base training source text; defaults to the cached pairs
    #[arg(long, value_name = "FILE", requires = "base_tgt")]
    pub base_src: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "base_src")]
    pub base_tgt: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "base_src")]
    pub base_meta: Option<PathBuf>,
    /// Worker threads; 0 uses one per core. Never changes the output
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub labels: LabelArgs,
    /// Word selection for the noising methods
    #[arg(long, value_enum, default_value_t = Selection::Fixed)]
    pub selection: Selection,
    /// Share of words noised with --selection fixed
    #[arg(long, default_value_t = 0.15)]
    pub noise_ratio: f64,
    /// Predicate lemmas that key the same-lemma groups
    #[arg(long, value_enum, default_value_t = Keying::Both)]
    pub lemma_keying: Keying,
    /// Allow same-lemma donor pairs whose swap changes nothing
    #[arg(long)]
    pub keep_noop: bool,
    /// Do not recase words that move to or from the sentence start
    #[arg(long)]
    pub no_case_adjust: bool,
    /// Predicate swaps exchange the form only, not the lemma
    #[arg(long)]
    pub no_swap_lemma: bool,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BleuTokenizer {
    /// Split trailing . , ! ? ; : off words
    Punct,
    /// Whitespace only
    Whitespace,
}

#[derive(Args, Debug, Clone)]
pub struct BleuArgs {
    #[arg(long, value_name = "FILE")]
    pub hyp: PathBuf,
    #[arg(long = "ref", value_name = "FILE")]
    pub reference: PathBuf,
    #[arg(long, value_enum, default_value_t = BleuTokenizer::Punct)]
    pub tokenize: BleuTokenizer,
    /// Also write bleu.tsv and a manifest here
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct InspectArgs {
    #[arg(long, value_name = "FILE")]
    pub cache: PathBuf,
    /// Pairs to show; all when absent
    #[arg(long, value_delimiter = ',')]
    pub pair: Vec<String>,
    #[command(flatten)]
    pub labels: LabelArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 10)]
    pub docs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Parses `args` (program name first), merging in the config file.
pub fn parse(args: Vec<String>) -> Result<(Cli, Vec<String>), CliError> {
    let args = match config_path(&args) {
        Some(path) => {
            let entries = config::read_config(path.as_ref()).map_err(|e| match e {
                config::ConfigError::Read { .. } => CliError::Data(e.into()),
                e => usage(e.to_string()),
            })?;
            config::merge(&Cli::command(), args, &entries, &path).map_err(|e| usage(e.to_string()))?
        }
        None => args,
    };
    let cli = Cli::try_parse_from(&args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Help(e.render().to_string())
        }
        _ => usage(e.render().to_string()),
    })?;
    Ok((cli, args))
}
