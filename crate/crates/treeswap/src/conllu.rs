//! CoNLL-U reading and writing.
//!
//! Only the columns the toolkit needs are kept: ID, FORM, LEMMA, UPOS,
//! HEAD, DEPREL and the `SpaceAfter=No` flag from MISC. Multiword-token
//! ranges (`3-4`) and empty nodes (`3.1`) are skipped.

use std::fmt::Write as _;

use thiserror::Error;
use treeswap_core::{Sentence, StructureError, Token};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConlluError {
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: {column} is not a number: {value:?}")]
    NotANumber { line: usize, column: &'static str, value: String },
    #[error("sentence starting at line {line}: {source}")]
    Structure {
        line: usize,
        #[source]
        source: StructureError,
    },
}

const TEXT_PREFIX: &str = "text =";
const NEWDOC_PREFIX: &str = "newdoc id =";

#[derive(Default)]
struct Block {
    start: usize,
    comments: Vec<String>,
    text: Option<String>,
    tokens: Vec<Token>,
}

impl Block {
    fn finish(self, out: &mut Vec<Sentence>) -> Result<(), ConlluError> {
        if self.tokens.is_empty() {
            return Ok(());
        }
        let start = self.start;
        let mut s = Sentence::new(self.tokens)
            .map_err(|source| ConlluError::Structure { line: start, source })?
            .with_comments(self.comments);
        if let Some(text) = self.text {
            s = s.with_text(text);
        }
        out.push(s);
        Ok(())
    }
}

fn number(line: usize, column: &'static str, value: &str) -> Result<usize, ConlluError> {
    value.parse().map_err(|_| ConlluError::NotANumber { line, column, value: value.into() })
}

/// Parses every sentence of a CoNLL-U document.
pub fn parse_conllu(text: &str) -> Result<Vec<Sentence>, ConlluError> {
    let mut out = Vec::new();
    let mut block = Block::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            std::mem::take(&mut block).finish(&mut out)?;
            continue;
        }
        if block.comments.is_empty() && block.tokens.is_empty() && block.text.is_none() {
            block.start = line;
        }
        if let Some(comment) = raw.strip_prefix('#') {
            let comment = comment.strip_prefix(' ').unwrap_or(comment);
            match comment.strip_prefix(TEXT_PREFIX) {
                Some(t) => block.text = Some(t.strip_prefix(' ').unwrap_or(t).into()),
                None => block.comments.push(comment.into()),
            }
            continue;
        }
        let cols: Vec<&str> = raw.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::Columns { line, found: cols.len() });
        }
        if cols[0].contains(['-', '.']) {
            continue;
        }
        let mut tok = Token::new(
            number(line, "ID", cols[0])?,
            cols[1],
            cols[2],
            cols[3],
            number(line, "HEAD", cols[6])?,
            cols[7],
        );
        if cols[9].split('|').any(|f| f == "SpaceAfter=No") {
            tok = tok.no_space_after();
        }
        block.tokens.push(tok);
    }
    block.finish(&mut out)?;
    Ok(out)
}

/// The document a sentence opens, from a `# newdoc id = ...` comment.
pub fn newdoc_id(sentence: &Sentence) -> Option<&str> {
    sentence.comments().iter().find_map(|c| c.strip_prefix(NEWDOC_PREFIX).map(str::trim))
}

/// Document id of every sentence, carrying each `newdoc` forward.
pub fn document_ids(sentences: &[Sentence], default: &str) -> Vec<String> {
    let mut current = default.to_string();
    sentences
        .iter()
        .map(|s| {
            if let Some(d) = newdoc_id(s) {
                current = d.to_string();
            }
            current.clone()
        })
        .collect()
}

/// Renders sentences as CoNLL-U. XPOS, FEATS and DEPS are written as `_`.
pub fn write_conllu(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        for c in s.comments() {
            let _ = writeln!(out, "# {c}");
        }
        if let Some(t) = s.text() {
            let _ = writeln!(out, "# text = {t}");
        }
        for t in s.tokens() {
            let misc = if t.space_after { "_" } else { "SpaceAfter=No" };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t_\t_\t{}\t{}\t_\t{}",
                t.id, t.form, t.lemma, t.upos, t.head, t.deprel, misc
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIRDS: &str = "# sent_id = 1
# text = Birds fly.
1\tBirds\tbird\tNOUN\t_\tNumber=Plur\t2\tnsubj\t_\t_
2\tfly\tfly\tVERB\t_\t_\t0\troot\t_\tSpaceAfter=No
3\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_
";

    #[test]
    fn empty_input() {
        assert_eq!(parse_conllu("").unwrap(), vec![]);
    }

    #[test]
    fn small_block_field_by_field() {
        let s = &parse_conllu(BIRDS).unwrap()[0];
        assert_eq!(s.text(), Some("Birds fly."));
        assert_eq!(s.comments(), ["sent_id = 1"]);
        let expected = [
            Token::new(1, "Birds", "bird", "NOUN", 2, "nsubj"),
            Token::new(2, "fly", "fly", "VERB", 0, "root").no_space_after(),
            Token::new(3, ".", ".", "PUNCT", 2, "punct"),
        ];
        assert_eq!(s.tokens(), expected);
        assert_eq!(treeswap_core::linearize(s.tokens()), "Birds fly.");
    }

    #[test]
    fn ranges_and_empty_nodes_are_skipped() {
        let text = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_
1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_
2\tn't\tnot\tPART\t_\t_\t3\tadvmod\t_\t_
2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_
3\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_
";
        let s = &parse_conllu(text).unwrap()[0];
        let ids: Vec<usize> = s.tokens().iter().map(|t| t.id).collect();
        assert_eq!(ids, [1, 2, 3]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_cols = "1\tBirds\tbird\n";
        assert_eq!(parse_conllu(bad_cols), Err(ConlluError::Columns { line: 1, found: 3 }));
        let bad_head = BIRDS.replace("\t2\tnsubj", "\tx\tnsubj");
        assert!(matches!(parse_conllu(&bad_head), Err(ConlluError::NotANumber { line: 3, column: "HEAD", .. })));
        let dangling = BIRDS.replace("\t2\tnsubj", "\t7\tnsubj");
        assert!(matches!(
            parse_conllu(&dangling),
            Err(ConlluError::Structure { line: 1, source: StructureError::HeadOutOfRange { .. } })
        ));
    }

    #[test]
    fn blocks_split_on_blank_lines() {
        let two = format!("{BIRDS}\n\n{BIRDS}\n");
        assert_eq!(parse_conllu(&two).unwrap().len(), 2);
    }

    #[test]
    fn write_then_parse() {
        let parsed = parse_conllu(BIRDS).unwrap();
        assert_eq!(parse_conllu(&write_conllu(&parsed)).unwrap(), parsed);
    }

    #[test]
    fn newdoc_carries_forward() {
        let text = format!("# newdoc id = a\n{BIRDS}\n{BIRDS}\n# newdoc id = b\n{BIRDS}");
        let s = parse_conllu(&text).unwrap();
        assert_eq!(document_ids(&s, "doc"), ["a", "a", "b"]);
        assert_eq!(document_ids(&s[1..2], "doc"), ["doc"]);
    }
}
