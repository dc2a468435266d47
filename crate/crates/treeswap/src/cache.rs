//! The TSV parse cache: one row per token, one blank line between sentences.
//!
//! Each pair is stored as its source sentence followed by its target
//! sentence. Tabs, newlines and backslashes in text fields are escaped.

use std::fmt::Write as _;

use thiserror::Error;
use treeswap_core::corpus::Side;
use treeswap_core::{Sentence, SentencePair, StructureError, Token};

pub const HEADER: &str = "pair_id\tside\tid\tform\tlemma\tupos\thead\tdeprel\tspace_after";
const COLUMNS: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CacheError {
    #[error("line 1: expected the header {HEADER:?}")]
    Header,
    #[error("line {line}: expected {COLUMNS} columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: bad {column} value {value:?}")]
    Field { line: usize, column: &'static str, value: String },
    #[error("line {line}: {message}")]
    Layout { line: usize, message: String },
    #[error("sentence ending at line {line}: {source}")]
    Structure {
        line: usize,
        #[source]
        source: StructureError,
    },
}

/// Escapes `\`, tab, newline and carriage return.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

/// Inverse of [`escape`]; `None` on a dangling or unknown escape.
pub fn unescape(s: &str) -> Option<String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            't' => '\t',
            'n' => '\n',
            'r' => '\r',
            _ => return None,
        });
    }
    Some(out)
}

/// Renders parsed pairs as a cache file.
pub fn write_cache(pairs: &[SentencePair<Sentence>]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    let mut first = true;
    for p in pairs {
        for side in [Side::Source, Side::Target] {
            if !first {
                out.push('\n');
            }
            first = false;
            for t in p.side(side).tokens() {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    escape(&p.pair_id),
                    side.as_str(),
                    t.id,
                    escape(&t.form),
                    escape(&t.lemma),
                    escape(&t.upos),
                    t.head,
                    escape(&t.deprel),
                    if t.space_after { 1 } else { 0 }
                );
            }
        }
    }
    out
}

struct Pending {
    pair_id: String,
    side: Side,
    end_line: usize,
    tokens: Vec<Token>,
}

fn field(line: usize, column: &'static str, value: &str) -> Result<String, CacheError> {
    unescape(value).ok_or_else(|| CacheError::Field { line, column, value: value.into() })
}

fn parse_row(line: usize, row: &str) -> Result<(String, Side, Token), CacheError> {
    let cols: Vec<&str> = row.split('\t').collect();
    if cols.len() != COLUMNS {
        return Err(CacheError::Columns { line, found: cols.len() });
    }
    let bad = |column: &'static str, value: &str| CacheError::Field { line, column, value: value.into() };
    let side = Side::parse(cols[1]).ok_or_else(|| bad("side", cols[1]))?;
    let id: usize = cols[2].parse().map_err(|_| bad("id", cols[2]))?;
    let head: usize = cols[6].parse().map_err(|_| bad("head", cols[6]))?;
    let space_after = match cols[8] {
        "1" => true,
        "0" => false,
        v => return Err(bad("space_after", v)),
    };
    let mut tok = Token::new(
        id,
        field(line, "form", cols[3])?,
        field(line, "lemma", cols[4])?,
        field(line, "upos", cols[5])?,
        head,
        field(line, "deprel", cols[7])?,
    );
    tok.space_after = space_after;
    Ok((field(line, "pair_id", cols[0])?, side, tok))
}

fn doc_of(pair_id: &str) -> &str {
    pair_id.rsplit_once(':').map_or(pair_id, |(d, _)| d)
}

/// Parses a cache file back into pairs.
///
/// The document id of each pair is the part of its id before the last `:`.
pub fn read_cache(text: &str) -> Result<Vec<SentencePair<Sentence>>, CacheError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        None => return Ok(Vec::new()),
        _ => return Err(CacheError::Header),
    }

    let mut sentences: Vec<Pending> = Vec::new();
    let mut open: Option<Pending> = None;
    for (line, row) in lines {
        if row.is_empty() {
            sentences.extend(open.take());
            continue;
        }
        let (pair_id, side, tok) = parse_row(line, row)?;
        match &mut open {
            Some(p) if p.pair_id == pair_id && p.side == side => {
                p.tokens.push(tok);
                p.end_line = line;
            }
            Some(_) => {
                return Err(CacheError::Layout {
                    line,
                    message: format!("row for {pair_id}/{side} inside another sentence", side = side.as_str()),
                })
            }
            None => open = Some(Pending { pair_id, side, end_line: line, tokens: vec![tok] }),
        }
    }
    sentences.extend(open);

    let mut out = Vec::with_capacity(sentences.len() / 2);
    let mut it = sentences.into_iter();
    while let Some(src) = it.next() {
        let Some(tgt) = it.next() else {
            return Err(CacheError::Layout {
                line: src.end_line,
                message: format!("{} has no target sentence", src.pair_id),
            });
        };
        if src.side != Side::Source || tgt.side != Side::Target || src.pair_id != tgt.pair_id {
            return Err(CacheError::Layout {
                line: tgt.end_line,
                message: format!("expected {} src then tgt, found {} {}", src.pair_id, tgt.pair_id, tgt.side.as_str()),
            });
        }
        let build = |p: Pending| {
            let line = p.end_line;
            Sentence::new(p.tokens).map_err(|source| CacheError::Structure { line, source })
        };
        let pair_id = src.pair_id.clone();
        let (src, tgt) = (build(src)?, build(tgt)?);
        out.push(SentencePair { doc_id: doc_of(&pair_id).into(), pair_id, subcorpus: "_".into(), src, tgt });
    }
    Ok(out)
}
