//! Dependency trees over a sentence, subtree spans, depth and linearization.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{validate_heads, Sentence, StructureError, Token};

/// An inclusive interval of token ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    /// Returns `None` unless `1 <= start <= end`.
    pub fn new(start: usize, end: usize) -> Option<Span> {
        (start >= 1 && start <= end).then_some(Span { start, end })
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, id: usize) -> bool {
        self.start <= id && id <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    /// Slice of `tokens` (ids 1..n) covered by the span.
    pub fn slice<'a>(&self, tokens: &'a [Token]) -> &'a [Token] {
        &tokens[self.start - 1..self.end]
    }
}

/// Where depth counting starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DepthOrigin {
    /// The root has depth 1.
    #[default]
    One,
    /// The root has depth 0.
    Zero,
}

/// A validated rooted tree over the tokens of a [`Sentence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepTree {
    sentence: Sentence,
    root: usize,
    // children[id - 1], ascending
    children: Vec<Vec<usize>>,
}

/// Builds a tree from raw tokens, validating them first.
pub fn build_tree(tokens: Vec<Token>) -> Result<DepTree, StructureError> {
    Sentence::new(tokens).map(DepTree::new)
}

impl DepTree {
    pub fn new(sentence: Sentence) -> DepTree {
        let heads: Vec<usize> = sentence.tokens().iter().map(|t| t.head).collect();
        let root = validate_heads(&heads).expect("Sentence invariants guarantee a tree");
        let mut children = vec![Vec::new(); heads.len()];
        for (i, &head) in heads.iter().enumerate() {
            if head != 0 {
                children[head - 1].push(i + 1);
            }
        }
        DepTree { sentence, root, children }
    }

    pub fn sentence(&self) -> &Sentence {
        &self.sentence
    }

    pub fn into_sentence(self) -> Sentence {
        self.sentence
    }

    pub fn tokens(&self) -> &[Token] {
        self.sentence.tokens()
    }

    pub fn len(&self) -> usize {
        self.sentence.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn token(&self, id: usize) -> Result<&Token, StructureError> {
        self.sentence.token(id).ok_or(StructureError::NodeOutOfRange { node: id, len: self.len() })
    }

    pub fn head(&self, id: usize) -> Result<usize, StructureError> {
        self.token(id).map(|t| t.head)
    }

    /// Children of `id` in linear order.
    pub fn children(&self, id: usize) -> Result<&[usize], StructureError> {
        self.token(id)?;
        Ok(&self.children[id - 1])
    }

    /// `node` and all of its descendants, in ascending order.
    pub fn subtree_ids(&self, node: usize) -> Result<Vec<usize>, StructureError> {
        self.token(node)?;
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend_from_slice(&self.children[id - 1]);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Depth with the root at 1.
    pub fn depth(&self, node: usize) -> Result<usize, StructureError> {
        self.depth_from(node, DepthOrigin::One)
    }

    pub fn depth_from(&self, node: usize, origin: DepthOrigin) -> Result<usize, StructureError> {
        let mut cur = self.token(node)?.head;
        let mut depth = 1;
        while cur != 0 {
            depth += 1;
            cur = self.sentence.tokens()[cur - 1].head;
        }
        Ok(match origin {
            DepthOrigin::One => depth,
            DepthOrigin::Zero => depth - 1,
        })
    }

    /// Depths of all tokens (root at 1), indexed by `id - 1`.
    pub fn depths(&self) -> Vec<usize> {
        let mut depths = vec![0usize; self.len()];
        let mut stack = vec![(self.root, 1usize)];
        while let Some((id, d)) = stack.pop() {
            depths[id - 1] = d;
            for &c in &self.children[id - 1] {
                stack.push((c, d + 1));
            }
        }
        depths
    }

    /// Subtree of `node` as a span, or `None` when it is not contiguous.
    pub fn subtree_span(&self, node: usize) -> Result<Option<Span>, StructureError> {
        let ids = self.subtree_ids(node)?;
        contiguous_span(&ids)
    }

    pub fn linearize(&self) -> String {
        linearize(self.tokens())
    }
}

/// `Some(min..=max)` when `ids` (ascending) has no holes.
pub fn contiguous_span(ids: &[usize]) -> Result<Option<Span>, StructureError> {
    let (Some(&first), Some(&last)) = (ids.first(), ids.last()) else {
        return Err(StructureError::EmptyIdSet);
    };
    if first == 0 {
        return Ok(None);
    }
    Ok((last - first + 1 == ids.len() && ids.windows(2).all(|w| w[1] == w[0] + 1))
        .then_some(Span { start: first, end: last }))
}

const NO_SPACE_BEFORE: &[&str] = &[".", ",", "!", "?", ";", ":", ")", "]", "}"];
const NO_SPACE_AFTER: &[&str] = &["(", "[", "{"];

/// Rebuilds surface text from tokens.
///
/// Uses the `space_after` flags when at least one of them is `false`. When
/// every flag is `true` the sentence is assumed to carry no spacing
/// information and punctuation is attached with a small rule set instead.
pub fn linearize(tokens: &[Token]) -> String {
    let has_flags = tokens.iter().any(|t| !t.space_after);
    let mut out = String::new();
    for (i, tok) in tokens.iter().enumerate() {
        out.push_str(&tok.form);
        let Some(next) = tokens.get(i + 1) else { break };
        let space = if has_flags {
            tok.space_after
        } else {
            !NO_SPACE_BEFORE.contains(&next.form.as_str()) && !NO_SPACE_AFTER.contains(&tok.form.as_str())
        };
        if space {
            out.push(' ');
        }
    }
    out
}
