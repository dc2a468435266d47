//! Line-aligned parallel text and the pair metadata TSV.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use treeswap_core::SentencePair;

use crate::cache::{escape, unescape};

pub const META_HEADER: &str = "pair_id\tdoc_id\tsubcorpus";

#[derive(Debug, Error)]
pub enum ParallelError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("source has {src} lines but target has {tgt}")]
    Misaligned { src: usize, tgt: usize },
    #[error("metadata lists {meta} pairs but the text has {text}")]
    MetaCount { meta: usize, text: usize },
    #[error("pair {index} contains a line break")]
    LineBreak { index: usize },
    #[error("{path} line {line}: {message}")]
    Meta { path: PathBuf, line: usize, message: String },
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> ParallelError + '_ {
    move |source| ParallelError::Io { path: path.to_path_buf(), source }
}

pub fn read_text(path: &Path) -> Result<String, ParallelError> {
    fs::read_to_string(path).map_err(io(path))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), ParallelError> {
    fs::write(path, text).map_err(io(path))
}

/// Lines of a text file; a final newline does not start another line.
pub fn split_lines(text: &str) -> Vec<String> {
    text.lines().map(str::to_string).collect()
}

/// Pairs line `i` of `src` with line `i` of `tgt`.
pub fn align(src: Vec<String>, tgt: Vec<String>) -> Result<Vec<(String, String)>, ParallelError> {
    if src.len() != tgt.len() {
        return Err(ParallelError::Misaligned { src: src.len(), tgt: tgt.len() });
    }
    Ok(src.into_iter().zip(tgt).collect())
}

pub fn read_parallel_text(src: &Path, tgt: &Path) -> Result<Vec<(String, String)>, ParallelError> {
    align(split_lines(&read_text(src)?), split_lines(&read_text(tgt)?))
}

/// Joins lines with a trailing newline each.
pub fn join_lines<S: AsRef<str>>(lines: impl IntoIterator<Item = S>) -> Result<String, ParallelError> {
    let mut out = String::new();
    for (index, l) in lines.into_iter().enumerate() {
        let l = l.as_ref();
        if l.contains(['\n', '\r']) {
            return Err(ParallelError::LineBreak { index });
        }
        out.push_str(l);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_parallel_text<S: AsRef<str>>(pairs: &[(S, S)], src: &Path, tgt: &Path) -> Result<(), ParallelError> {
    write_text(src, &join_lines(pairs.iter().map(|p| p.0.as_ref()))?)?;
    write_text(tgt, &join_lines(pairs.iter().map(|p| p.1.as_ref()))?)
}

/// Metadata rows of a pair corpus.
pub fn write_meta<T>(pairs: &[SentencePair<T>]) -> String {
    let mut out = String::from(META_HEADER);
    out.push('\n');
    for p in pairs {
        out.push_str(&format!("{}\t{}\t{}\n", escape(&p.pair_id), escape(&p.doc_id), escape(&p.subcorpus)));
    }
    out
}

/// `(pair_id, doc_id, subcorpus)` per row.
pub fn read_meta(path: &Path) -> Result<Vec<(String, String, String)>, ParallelError> {
    let text = read_text(path)?;
    let err = |line: usize, message: String| ParallelError::Meta { path: path.to_path_buf(), line, message };
    let mut lines = text.lines();
    if lines.next() != Some(META_HEADER) {
        return Err(err(1, format!("expected the header {META_HEADER:?}")));
    }
    lines
        .enumerate()
        .map(|(i, row)| {
            let line = i + 2;
            let cols: Vec<&str> = row.split('\t').collect();
            if cols.len() != 3 {
                return Err(err(line, format!("expected 3 columns, found {}", cols.len())));
            }
            let f = |s: &str| unescape(s).ok_or_else(|| err(line, format!("bad escape in {s:?}")));
            Ok((f(cols[0])?, f(cols[1])?, f(cols[2])?))
        })
        .collect()
}

/// Attaches provenance to `items`: from the metadata file when given,
/// otherwise `doc_id = default_doc` and ids numbered by line.
pub fn with_meta<T>(
    items: Vec<(T, T)>,
    meta: Option<&Path>,
    default_doc: &str,
) -> Result<Vec<SentencePair<T>>, ParallelError> {
    let Some(path) = meta else {
        return Ok(items.into_iter().enumerate().map(|(i, (s, t))| SentencePair::new(default_doc, i, s, t)).collect());
    };
    let rows = read_meta(path)?;
    if rows.len() != items.len() {
        return Err(ParallelError::MetaCount { meta: rows.len(), text: items.len() });
    }
    Ok(items
        .into_iter()
        .zip(rows)
        .map(|((src, tgt), (pair_id, doc_id, subcorpus))| SentencePair { pair_id, doc_id, subcorpus, src, tgt })
        .collect())
}

/// Writes `<stem>.src`, `<stem>.tgt` and `<stem>.meta.tsv` under `dir`.
pub fn write_corpus(dir: &Path, stem: &str, pairs: &[SentencePair<String>]) -> Result<(), ParallelError> {
    write_text(&dir.join(format!("{stem}.src")), &join_lines(pairs.iter().map(|p| &p.src))?)?;
    write_text(&dir.join(format!("{stem}.tgt")), &join_lines(pairs.iter().map(|p| &p.tgt))?)?;
    write_text(&dir.join(format!("{stem}.meta.tsv")), &write_meta(pairs))
}
