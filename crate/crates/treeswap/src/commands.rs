//! One function per subcommand.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use treeswap_core::bleu::{corpus_bleu, tokenize_for_bleu};
use treeswap_core::corpus::Side;
use treeswap_core::eligibility::{filter_corpus, find_triplet, Constituent};
use treeswap_core::noise::{selection_probs, FreqTable, Noiser, SelectionMode};
use treeswap_core::preprocess::{clean_pair, compute_stats, judge, threshold_sweep, Verdict};
use treeswap_core::split::{
    plan_swaps, sample_lemma_pairs, stratified_split, target_count, LemmaGroupIndex, SplitSpec,
};
use treeswap_core::swap::{is_noop, swap, SwapOptions};
use treeswap_core::{linearize, seed, synth, DepTree, EligiblePair, LabelConfig, Sentence, SentencePair, SwapMethod};

use crate::cache::{read_cache, write_cache};
use crate::cli::{
    usage, AugmentArgs, Augmentation, BleuArgs, BleuTokenizer, CacheArgs, CleanArgs, CliError, Command, CorpusArgs,
    EligibleArgs, InspectArgs, Selection, SplitArgs, StatsArgs, SweepArgs, SynthArgs,
};
use crate::conllu::{document_ids, parse_conllu, write_conllu};
use crate::manifest::Manifest;
use crate::parallel::{self, join_lines, read_parallel_text, with_meta, write_corpus, write_meta, write_text};
use crate::tables;

type Result<T, E = CliError> = std::result::Result<T, E>;

/// Runs one parsed command. `argv` is recorded in the manifest for replay.
pub fn run(command: Command, argv: &[String]) -> Result<()> {
    let mut m = Manifest::new(command.name());
    m.set("argv", shell_join(argv));
    m.set("parsed", format!("{command:?}"));
    match command {
        Command::Clean(a) => clean(&a, m),
        Command::Stats(a) => stats(&a, m),
        Command::Sweep(a) => sweep(&a, m),
        Command::Split(a) => split(&a, m),
        Command::Cache(a) => cache(&a, m),
        Command::Eligible(a) => eligible(&a, m),
        Command::Augment(a) => augment(&a, m),
        Command::Bleu(a) => bleu(&a, m),
        Command::Inspect(a) => inspect(&a),
        Command::Synth(a) => synth_corpus(&a, m),
    }
}

fn shell_join(argv: &[String]) -> String {
    argv.iter()
        .skip(1)
        .map(|a| {
            if !a.is_empty() && a.chars().all(|c| c.is_ascii_alphanumeric() || "-_=.,/:+".contains(c)) {
                a.clone()
            } else {
                format!("'{}'", a.replace('\'', "'\\''"))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(())
}

fn finish(m: &mut Manifest, dir: &Path) -> Result<()> {
    m.write(dir).with_context(|| format!("writing manifest in {}", dir.display()))?;
    Ok(())
}

fn record_input(m: &mut Manifest, name: &str, path: &Path) -> Result<()> {
    m.input(name, path).with_context(|| format!("reading {}", path.display()))?;
    Ok(())
}

fn read_corpus(a: &CorpusArgs, m: &mut Manifest) -> Result<Vec<SentencePair<String>>> {
    record_input(m, "src", &a.text.src)?;
    record_input(m, "tgt", &a.text.tgt)?;
    if let Some(meta) = &a.meta {
        record_input(m, "meta", meta)?;
    }
    let text = read_parallel_text(&a.text.src, &a.text.tgt).map_err(anyhow::Error::from)?;
    Ok(with_meta(text, a.meta.as_deref(), &a.doc).map_err(anyhow::Error::from)?)
}

fn write(path: &Path, text: &str) -> Result<()> {
    write_text(path, text).map_err(anyhow::Error::from)?;
    Ok(())
}

fn clean(a: &CleanArgs, mut m: Manifest) -> Result<()> {
    let cfg = a.filter.config()?;
    out_dir(&a.out)?;
    let pairs = read_corpus(&a.corpus, &mut m)?;
    let total = pairs.len();
    let mut kept = Vec::new();
    let mut log = String::from("pair_id\tverdict\n");
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for p in pairs {
        let verdict = match clean_pair(&p.src, &p.tgt) {
            None => Verdict::EmptySide,
            Some((src, tgt)) => {
                let v = if a.no_filter { Verdict::Keep } else { judge(&src, &tgt, &cfg) };
                if v.is_keep() {
                    kept.push(SentencePair { src, tgt, ..p.clone() });
                }
                v
            }
        };
        let _ = writeln!(log, "{}\t{}", crate::cache::escape(&p.pair_id), verdict);
        *counts.entry(verdict.as_str()).or_default() += 1;
    }
    write_corpus(&a.out, "clean", &kept).map_err(anyhow::Error::from)?;
    write(&a.out.join("verdicts.tsv"), &log)?;
    m.set("pairs.in", total);
    m.set("pairs.kept", kept.len());
    for (v, n) in counts {
        m.set(&format!("verdict.{v}"), n);
    }
    println!("kept {} of {} pairs", kept.len(), total);
    finish(&mut m, &a.out)
}

fn stats(a: &StatsArgs, mut m: Manifest) -> Result<()> {
    out_dir(&a.out)?;
    record_input(&mut m, "src", &a.text.src)?;
    record_input(&mut m, "tgt", &a.text.tgt)?;
    let pairs = read_parallel_text(&a.text.src, &a.text.tgt).map_err(anyhow::Error::from)?;
    let s = compute_stats(&pairs).map_err(anyhow::Error::from)?;
    write(&a.out.join("stats.tsv"), &tables::stats(&s))?;
    m.set("pairs", s.pairs);
    finish(&mut m, &a.out)
}

fn sweep(a: &SweepArgs, mut m: Manifest) -> Result<()> {
    if a.grid.is_empty() || a.grid.windows(2).any(|w| !(w[0] < w[1])) || a.grid.iter().any(|t| !t.is_finite()) {
        return Err(usage("--grid must be a non-empty, strictly ascending list of numbers"));
    }
    out_dir(&a.out)?;
    record_input(&mut m, "src", &a.text.src)?;
    record_input(&mut m, "tgt", &a.text.tgt)?;
    let pairs = read_parallel_text(&a.text.src, &a.text.tgt).map_err(anyhow::Error::from)?;
    let points = threshold_sweep(&pairs, a.axis(), &a.grid);
    write(&a.out.join("sweep.tsv"), &tables::sweep(&points))?;
    m.set("pairs", pairs.len());
    finish(&mut m, &a.out)
}

fn split(a: &SplitArgs, mut m: Manifest) -> Result<()> {
    out_dir(&a.out)?;
    let pairs = read_corpus(&a.corpus, &mut m)?;
    let docs: Vec<&str> = pairs.iter().map(|p| p.doc_id.as_str()).collect();
    let spec = SplitSpec { val: a.val, test: a.test, seed: a.seed };
    let s = stratified_split(&docs, &spec).map_err(anyhow::Error::from)?;
    for (name, members) in [("train", &s.train), ("val", &s.val), ("test", &s.test)] {
        let part: Vec<SentencePair<String>> = members.iter().map(|&i| pairs[i].clone()).collect();
        write_corpus(&a.out, name, &part).map_err(anyhow::Error::from)?;
        m.set(&format!("pairs.{name}"), part.len());
    }
    m.set("seed", a.seed);
    finish(&mut m, &a.out)
}

fn read_conllu_file(path: &Path) -> Result<Vec<Sentence>> {
    let text = parallel::read_text(path).map_err(anyhow::Error::from)?;
    Ok(parse_conllu(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn cache(a: &CacheArgs, mut m: Manifest) -> Result<()> {
    out_dir(&a.out)?;
    record_input(&mut m, "src", &a.src)?;
    record_input(&mut m, "tgt", &a.tgt)?;
    let src = read_conllu_file(&a.src)?;
    let tgt = read_conllu_file(&a.tgt)?;
    if src.len() != tgt.len() {
        return Err(anyhow!(
            "{} has {} sentences but {} has {}",
            a.src.display(),
            src.len(),
            a.tgt.display(),
            tgt.len()
        )
        .into());
    }
    let pairs = match &a.meta {
        Some(meta) => {
            record_input(&mut m, "meta", meta)?;
            with_meta(src.into_iter().zip(tgt).collect(), Some(meta), &a.doc).map_err(anyhow::Error::from)?
        }
        None => {
            let docs = document_ids(&src, &a.doc);
            let mut next: BTreeMap<&str, usize> = BTreeMap::new();
            src.into_iter()
                .zip(tgt)
                .zip(&docs)
                .map(|((s, t), d)| {
                    let i = next.entry(d).or_default();
                    let p = SentencePair::new(d.as_str(), *i, s, t);
                    *i += 1;
                    p
                })
                .collect()
        }
    };
    write(&a.out.join("cache.tsv"), &write_cache(&pairs))?;
    m.set("pairs", pairs.len());
    finish(&mut m, &a.out)
}

fn load_trees(path: &Path, m: &mut Manifest) -> Result<Vec<SentencePair<DepTree>>> {
    record_input(m, "cache", path)?;
    let text = parallel::read_text(path).map_err(anyhow::Error::from)?;
    let pairs = read_cache(&text).with_context(|| format!("reading {}", path.display()))?;
    Ok(pairs.into_iter().map(|p| p.map(DepTree::new)).collect())
}

fn span_text(c: Option<Constituent>) -> String {
    c.map_or_else(|| "-".into(), |c| format!("{}-{}", c.span.start, c.span.end))
}

fn eligible(a: &EligibleArgs, mut m: Manifest) -> Result<()> {
    let labels = a.labels.config()?;
    out_dir(&a.out)?;
    let trees = load_trees(&a.cache, &mut m)?;
    let total = trees.len();
    let (kept, tally) = filter_corpus(trees, &labels);
    let mut out =
        String::from("pair_id\tsrc_predicate\ttgt_predicate\tsrc_subject\tsrc_object\ttgt_subject\ttgt_object\n");
    for p in &kept {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            crate::cache::escape(p.pair_id()),
            crate::cache::escape(p.predicate_lemma(Side::Source)),
            crate::cache::escape(p.predicate_lemma(Side::Target)),
            span_text(p.src_triplet.subject),
            span_text(Some(p.src_triplet.object)),
            span_text(p.tgt_triplet.subject),
            span_text(Some(p.tgt_triplet.object)),
        );
    }
    write(&a.out.join("eligible.tsv"), &out)?;
    write(&a.out.join("rejections.tsv"), &tables::rejections(&tally))?;
    m.set("pairs", total);
    m.set("eligible", kept.len());
    m.set("rejected", tally.total());
    println!("eligible {} of {} pairs", kept.len(), total);
    finish(&mut m, &a.out)
}

/// One synthetic pair and where it came from.
struct Generated {
    src: String,
    tgt: String,
    donor_a: String,
    donor_b: String,
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads).build().context("starting worker threads")?)
}

fn swap_outputs(
    a: &AugmentArgs,
    method: SwapMethod,
    trees: Vec<SentencePair<DepTree>>,
    target: usize,
    base: usize,
    labels: &LabelConfig,
    pool: &rayon::ThreadPool,
    m: &mut Manifest,
) -> Result<(Vec<Generated>, Vec<(String, String)>, String)> {
    let (mut eligible, tally) = filter_corpus(trees, labels);
    m.set("eligible", eligible.len());
    if method.needs_subjects() {
        eligible.retain(EligiblePair::has_subjects);
        m.set("eligible.with_subjects", eligible.len());
    }
    let donors: Vec<(usize, usize)> = if method.groups_by_lemma() {
        let index = LemmaGroupIndex::build(&eligible, a.lemma_keying.into());
        let demand = target.div_ceil(2);
        let skip = |i: usize, j: usize| !a.keep_noop && is_noop(method, &eligible[i], &eligible[j]);
        let drawn = sample_lemma_pairs(&index, demand, a.seed, skip).map_err(anyhow::Error::from)?;
        m.set("lemma_groups.usable", index.usable_groups());
        m.set("shortfall", demand - drawn.len());
        drawn
    } else {
        let plan = plan_swaps(eligible.len(), base, a.ratio, a.seed).map_err(anyhow::Error::from)?;
        m.set("shortfall", plan.shortfall);
        plan.donors
    };
    let opts = SwapOptions { adjust_case: !a.no_case_adjust, swap_lemma: !a.no_swap_lemma };
    let swapped = pool.install(|| {
        donors.par_iter().map(|&(i, j)| swap(method, &eligible[i], &eligible[j], &opts)).collect::<Result<Vec<_>, _>>()
    });
    let swapped = swapped.map_err(|e| anyhow!("swap failed: {e}"))?;
    let mut out = Vec::with_capacity(2 * swapped.len());
    for (x, y) in swapped {
        for p in [x, y] {
            out.push(Generated { src: p.src_text, tgt: p.tgt_text, donor_a: p.donor_a, donor_b: p.donor_b });
        }
    }
    out.truncate(target);
    let plan =
        donors.iter().map(|&(i, j)| (eligible[i].pair_id().to_string(), eligible[j].pair_id().to_string())).collect();
    Ok((out, plan, tables::rejections(&tally)))
}

fn noise_outputs(
    a: &AugmentArgs,
    method: treeswap_core::noise::NoiseMethod,
    trees: &[SentencePair<DepTree>],
    target: usize,
    pool: &rayon::ThreadPool,
    m: &mut Manifest,
) -> Result<(Vec<Generated>, Vec<(String, String)>, FreqTable)> {
    let mode = match a.selection {
        Selection::Fixed => {
            if !(a.noise_ratio > 0.0 && a.noise_ratio <= 1.0) {
                return Err(usage("--noise-ratio must be in (0, 1]"));
            }
            SelectionMode::FixedCount { ratio: a.noise_ratio }
        }
        Selection::Bernoulli => SelectionMode::Bernoulli,
    };
    let freq = FreqTable::from_words(trees.iter().flat_map(|p| p.src.sentence().forms()));
    let noiser = Noiser::new(method, mode, freq);
    let mut order: Vec<usize> = (0..trees.len()).collect();
    order.shuffle(&mut seed::rng(seed::stage_seed(a.seed, "noise-pick")));
    let stage = seed::stage_seed(a.seed, "noise");
    let noised = pool.install(|| {
        order
            .par_iter()
            .map(|&i| {
                let mut rng = seed::rng(seed::item_seed(stage, i as u64));
                noiser.apply(&trees[i].src, &trees[i].tgt.linearize(), &mut rng).map(|r| (i, r))
            })
            .collect::<Result<Vec<_>, _>>()
    });
    let noised = noised.map_err(|e| anyhow!("noising failed: {e}"))?;
    let mut out = Vec::with_capacity(target);
    let mut degenerate = 0;
    for (i, r) in noised {
        if out.len() == target {
            break;
        }
        match r {
            Some(p) => {
                out.push(Generated { src: p.src, tgt: p.tgt, donor_a: trees[i].pair_id.clone(), donor_b: "-".into() })
            }
            None => degenerate += 1,
        }
    }
    m.set("skipped.degenerate", degenerate);
    m.set("shortfall", target - out.len());
    let plan = out.iter().map(|g| (g.donor_a.clone(), g.donor_b.clone())).collect();
    Ok((out, plan, noiser.freq))
}

fn augment(a: &AugmentArgs, mut m: Manifest) -> Result<()> {
    if !(a.ratio > 0.0) || !a.ratio.is_finite() {
        return Err(usage("--ratio must be positive"));
    }
    let labels = a.labels.config()?;
    out_dir(&a.out)?;
    let trees = load_trees(&a.cache, &mut m)?;
    let base: Vec<SentencePair<String>> = match (&a.base_src, &a.base_tgt) {
        (Some(s), Some(t)) => {
            let args = CorpusArgs {
                text: crate::cli::TextArgs { src: s.clone(), tgt: t.clone() },
                meta: a.base_meta.clone(),
                doc: "base".into(),
            };
            let mut b = Manifest::default();
            let corpus = read_corpus(&args, &mut b)?;
            for key in ["src", "tgt", "meta"] {
                if let Some(d) = b.get(&format!("input.{key}.sha256")) {
                    m.set(&format!("input.base_{key}.sha256"), d);
                }
            }
            corpus
        }
        _ => trees
            .iter()
            .map(|p| SentencePair {
                pair_id: p.pair_id.clone(),
                doc_id: p.doc_id.clone(),
                subcorpus: p.subcorpus.clone(),
                src: p.src.linearize(),
                tgt: p.tgt.linearize(),
            })
            .collect(),
    };
    let target = target_count(base.len(), a.ratio);
    let pool = thread_pool(a.threads)?;
    m.set("method", a.method.as_str());
    m.set("seed", a.seed);
    m.set("ratio", a.ratio);
    m.set("pairs.cache", trees.len());
    m.set("pairs.base", base.len());
    m.set("target", target);

    let (generated, plan) = match a.method.augmentation() {
        Augmentation::Swap(method) => {
            let (g, plan, rejections) = swap_outputs(a, method, trees, target, base.len(), &labels, &pool, &mut m)?;
            write(&a.out.join("rejections.tsv"), &rejections)?;
            (g, plan)
        }
        Augmentation::Noise(method) => {
            let (g, plan, freq) = noise_outputs(a, method, &trees, target, &pool, &mut m)?;
            write(&a.out.join("freq.tsv"), &tables::freq(&freq))?;
            (g, plan)
        }
    };
    let method = a.method.as_str();
    let synthetic: Vec<SentencePair<String>> = generated
        .iter()
        .enumerate()
        .map(|(k, g)| SentencePair {
            pair_id: format!("aug:{k}"),
            doc_id: "aug".into(),
            subcorpus: method.into(),
            src: g.src.clone(),
            tgt: g.tgt.clone(),
        })
        .collect();
    let rows: Vec<tables::Provenance<'_>> = synthetic
        .iter()
        .zip(&generated)
        .map(|(p, g)| tables::Provenance { pair_id: &p.pair_id, method, donor_a: &g.donor_a, donor_b: &g.donor_b })
        .collect();
    let plan_rows: Vec<(&str, &str)> = plan.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    write(&a.out.join("provenance.tsv"), &tables::provenance(&rows, a.seed))?;
    write(&a.out.join("plan.tsv"), &tables::plan(method, &plan_rows))?;
    write_corpus(&a.out, "augmented", &synthetic).map_err(anyhow::Error::from)?;

    let mut train: Vec<SentencePair<String>> = base.into_iter().chain(synthetic).collect();
    train.shuffle(&mut seed::rng(seed::stage_seed(a.seed, "shuffle")));
    write_corpus(&a.out, "train", &train).map_err(anyhow::Error::from)?;
    m.set("generated", generated.len());
    m.set("pairs.train", train.len());
    println!("generated {} of {} synthetic pairs; training set has {}", generated.len(), target, train.len());
    finish(&mut m, &a.out)
}

fn bleu(a: &BleuArgs, mut m: Manifest) -> Result<()> {
    let read = |p: &Path| -> Result<Vec<Vec<String>>> {
        let text = parallel::read_text(p).map_err(anyhow::Error::from)?;
        Ok(text
            .lines()
            .map(|l| match a.tokenize {
                BleuTokenizer::Punct => tokenize_for_bleu(l),
                BleuTokenizer::Whitespace => l.split_whitespace().map(String::from).collect(),
            })
            .collect())
    };
    let hyp = read(&a.hyp)?;
    let reference = read(&a.reference)?;
    let report = corpus_bleu(&hyp, &reference).map_err(anyhow::Error::from)?;
    println!("{:.1}", report.bleu * 100.0);
    let table = tables::bleu(&report);
    print!("{table}");
    if let Some(dir) = &a.out {
        out_dir(dir)?;
        record_input(&mut m, "hyp", &a.hyp)?;
        record_input(&mut m, "ref", &a.reference)?;
        write(&dir.join("bleu.tsv"), &table)?;
        m.set("sentences", hyp.len());
        finish(&mut m, dir)?;
    }
    Ok(())
}

fn inspect(a: &InspectArgs) -> Result<()> {
    let labels = a.labels.config()?;
    let trees = load_trees(&a.cache, &mut Manifest::default())?;
    let mut shown = 0;
    let mut out = String::new();
    for p in &trees {
        if !a.pair.is_empty() && !a.pair.contains(&p.pair_id) {
            continue;
        }
        shown += 1;
        let _ = writeln!(out, "== {} (doc {})", p.pair_id, p.doc_id);
        for side in [Side::Source, Side::Target] {
            let t = p.side(side);
            let model = selection_probs(t);
            let _ = writeln!(out, "{}: {}", side.as_str(), t.linearize());
            let _ = writeln!(out, "  id\tform\tlemma\tupos\thead\tdeprel\tdepth\tp");
            for (i, tok) in t.tokens().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.4}",
                    tok.id, tok.form, tok.lemma, tok.upos, tok.head, tok.deprel, model.depths[i], model.p[i]
                );
            }
            match find_triplet(t, &labels) {
                Ok(tr) => {
                    let _ = writeln!(
                        out,
                        "  subject {}  object {}  predicate {}",
                        span_text(tr.subject),
                        span_text(Some(tr.object)),
                        tr.predicate
                    );
                }
                Err(r) => {
                    let _ = writeln!(out, "  rejected: {r}");
                }
            }
        }
    }
    if shown == 0 && !a.pair.is_empty() {
        return Err(anyhow!("no pair named {}", a.pair.join(", ")).into());
    }
    print!("{out}");
    Ok(())
}

fn synth_corpus(a: &SynthArgs, mut m: Manifest) -> Result<()> {
    if a.docs == 0 {
        return Err(usage("--docs must be at least 1"));
    }
    out_dir(&a.out)?;
    let stage = seed::stage_seed(a.seed, "synth");
    let mut pairs: Vec<SentencePair<Sentence>> = Vec::with_capacity(a.pairs);
    let mut within = 0;
    let mut last_doc = usize::MAX;
    for i in 0..a.pairs {
        let doc = i * a.docs / a.pairs.max(1);
        if doc != last_doc {
            within = 0;
        }
        let mut rng = seed::rng(seed::item_seed(stage, i as u64));
        let (s, t) = synth::clause_pair(&mut rng);
        let sentence = |tokens: Vec<treeswap_core::Token>, first: bool| {
            let text = linearize(&tokens);
            let s = Sentence::new(tokens).expect("generated trees are valid").with_text(text);
            if first {
                s.with_comments(vec![format!("newdoc id = doc{doc}")])
            } else {
                s
            }
        };
        let first = doc != last_doc;
        pairs.push(SentencePair::new(
            format!("doc{doc}"),
            within,
            sentence(s.tokens, first),
            sentence(t.tokens, first),
        ));
        within += 1;
        last_doc = doc;
    }
    let (src, tgt): (Vec<Sentence>, Vec<Sentence>) = pairs.iter().map(|p| (p.src.clone(), p.tgt.clone())).unzip();
    write(&a.out.join("src.conllu"), &write_conllu(&src))?;
    write(&a.out.join("tgt.conllu"), &write_conllu(&tgt))?;
    let text = |side: &[Sentence]| join_lines(side.iter().map(|s| s.text().unwrap_or_default().to_string()));
    write(&a.out.join("src.txt"), &text(&src).map_err(anyhow::Error::from)?)?;
    write(&a.out.join("tgt.txt"), &text(&tgt).map_err(anyhow::Error::from)?)?;
    write(&a.out.join("meta.tsv"), &write_meta(&pairs))?;
    m.set("pairs", a.pairs);
    m.set("docs", a.docs);
    m.set("seed", a.seed);
    finish(&mut m, &a.out)
}
