//! Tokens, validated sentences and aligned sentence pairs.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

/// One word of a dependency parse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    /// 1-based position in the sentence.
    pub id: usize,
    pub form: String,
    pub lemma: String,
    /// Universal POS tag, `_` when unknown.
    pub upos: String,
    /// Id of the governing token, `0` for the root.
    pub head: usize,
    pub deprel: String,
    /// `false` when the word is glued to the next one (`SpaceAfter=No`).
    pub space_after: bool,
}

impl Token {
    pub fn new(
        id: usize,
        form: impl Into<String>,
        lemma: impl Into<String>,
        upos: impl Into<String>,
        head: usize,
        deprel: impl Into<String>,
    ) -> Self {
        Token {
            id,
            form: form.into(),
            lemma: lemma.into(),
            upos: upos.into(),
            head,
            deprel: deprel.into(),
            space_after: true,
        }
    }

    pub fn no_space_after(mut self) -> Self {
        self.space_after = false;
        self
    }
}

/// Violations of the well-formedness rules for a parsed sentence.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("sentence has no tokens")]
    Empty,
    #[error("token ids must run 1..n without gaps: expected {expected}, found {found}")]
    IdGap { expected: usize, found: usize },
    #[error("token {id} has an empty form")]
    EmptyForm { id: usize },
    #[error("token {id} is its own head")]
    SelfLoop { id: usize },
    #[error("token {id} has head {head}, outside 0..={len}")]
    HeadOutOfRange { id: usize, head: usize, len: usize },
    #[error("head chain starting at token {id} never reaches the root")]
    Cycle { id: usize },
    #[error("sentence has {count} root tokens, expected exactly one")]
    MultipleRoots { count: usize },
    #[error("empty id set has no span")]
    EmptyIdSet,
    #[error("node {node} is not in a sentence of {len} tokens")]
    NodeOutOfRange { node: usize, len: usize },
}

/// Checks the head vector of a sentence and returns the root id.
///
/// `heads[i]` is the head of token `i + 1`. Zero roots always shows up as a
/// cycle, since every head chain in a finite rootless graph loops.
pub(crate) fn validate_heads(heads: &[usize]) -> Result<usize, StructureError> {
    let n = heads.len();
    if n == 0 {
        return Err(StructureError::Empty);
    }
    for (i, &head) in heads.iter().enumerate() {
        let id = i + 1;
        if head > n {
            return Err(StructureError::HeadOutOfRange { id, head, len: n });
        }
        if head == id {
            return Err(StructureError::SelfLoop { id });
        }
    }
    // 0 = unvisited, 1 = on the current chain, 2 = known to reach the root
    let mut state = vec![0u8; n + 1];
    for start in 1..=n {
        let mut chain = Vec::new();
        let mut cur = start;
        while cur != 0 && state[cur] != 2 {
            if state[cur] == 1 {
                return Err(StructureError::Cycle { id: start });
            }
            state[cur] = 1;
            chain.push(cur);
            cur = heads[cur - 1];
        }
        for node in chain {
            state[node] = 2;
        }
    }
    let roots: Vec<usize> = (1..=n).filter(|&id| heads[id - 1] == 0).collect();
    match roots.as_slice() {
        [root] => Ok(*root),
        _ => Err(StructureError::MultipleRoots { count: roots.len() }),
    }
}

/// A parsed sentence whose tokens form a single rooted tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
    text: Option<String>,
    comments: Vec<String>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Result<Self, StructureError> {
        for (i, tok) in tokens.iter().enumerate() {
            if tok.id != i + 1 {
                return Err(StructureError::IdGap { expected: i + 1, found: tok.id });
            }
            if tok.form.is_empty() {
                return Err(StructureError::EmptyForm { id: tok.id });
            }
        }
        let heads: Vec<usize> = tokens.iter().map(|t| t.head).collect();
        validate_heads(&heads)?;
        Ok(Sentence { tokens, text: None, comments: Vec::new() })
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn with_comments(mut self, comments: Vec<String>) -> Self {
        self.comments = comments;
        self
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn into_tokens(self) -> Vec<Token> {
        self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The raw text from a `# text = ...` comment, if the parse carried one.
    pub fn text(&self) -> Option<&str> {
        self.text.as_deref()
    }

    /// Comment lines without the leading `#`.
    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub fn token(&self, id: usize) -> Option<&Token> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.form.as_str())
    }
}

/// Which half of a sentence pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Source => "src",
            Side::Target => "tgt",
        }
    }

    pub fn parse(s: &str) -> Option<Side> {
        match s {
            "src" => Some(Side::Source),
            "tgt" => Some(Side::Target),
            _ => None,
        }
    }
}

/// An aligned source/target pair with provenance.
///
/// `T` is a raw `String` before parsing and a [`Sentence`] or
/// [`DepTree`](crate::DepTree) afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentencePair<T = String> {
    pub pair_id: String,
    pub doc_id: String,
    pub subcorpus: String,
    pub src: T,
    pub tgt: T,
}

impl<T> SentencePair<T> {
    pub fn new(doc_id: impl Into<String>, line_index: usize, src: T, tgt: T) -> Self {
        let doc_id = doc_id.into();
        SentencePair { pair_id: pair_id(&doc_id, line_index), doc_id, subcorpus: String::from("_"), src, tgt }
    }

    pub fn side(&self, side: Side) -> &T {
        match side {
            Side::Source => &self.src,
            Side::Target => &self.tgt,
        }
    }

    /// Replaces both sides, keeping provenance.
    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> SentencePair<U> {
        SentencePair {
            pair_id: self.pair_id,
            doc_id: self.doc_id,
            subcorpus: self.subcorpus,
            src: f(self.src),
            tgt: f(self.tgt),
        }
    }

    pub fn try_map<U, E>(self, mut f: impl FnMut(T) -> Result<U, E>) -> Result<SentencePair<U>, E> {
        Ok(SentencePair {
            pair_id: self.pair_id,
            doc_id: self.doc_id,
            subcorpus: self.subcorpus,
            src: f(self.src)?,
            tgt: f(self.tgt)?,
        })
    }
}

/// Stable identifier of the `line_index`-th (0-based) pair of a document.
pub fn pair_id(doc_id: &str, line_index: usize) -> String {
    format!("{doc_id}:{line_index}")
}
