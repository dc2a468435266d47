//! Subject, object and predicate swapping between two eligible pairs.
//!
//! Every swap edits the source and the target side of both pairs in the
//! same call, so an output never combines an augmented source with an
//! untouched target.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::corpus::{Sentence, Side, StructureError, Token};
use crate::deptree::{linearize, Span};
use crate::eligibility::EligiblePair;

/// The five swap-based augmentation methods.
///
/// The same-lemma variants swap exactly like their plain counterparts; they
/// differ only in how donor pairs are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SwapMethod {
    Obj,
    Subj,
    ObjLemma,
    SubjLemma,
    Pred,
}

impl SwapMethod {
    pub const ALL: [SwapMethod; 5] =
        [SwapMethod::Obj, SwapMethod::Subj, SwapMethod::ObjLemma, SwapMethod::SubjLemma, SwapMethod::Pred];

    pub fn as_str(self) -> &'static str {
        match self {
            SwapMethod::Obj => "obj",
            SwapMethod::Subj => "subj",
            SwapMethod::ObjLemma => "obj-lemma",
            SwapMethod::SubjLemma => "subj-lemma",
            SwapMethod::Pred => "pred",
        }
    }

    pub fn parse(s: &str) -> Option<SwapMethod> {
        SwapMethod::ALL.into_iter().find(|m| m.as_str() == s)
    }

    pub fn groups_by_lemma(self) -> bool {
        matches!(self, SwapMethod::ObjLemma | SwapMethod::SubjLemma)
    }

    pub fn needs_subjects(self) -> bool {
        matches!(self, SwapMethod::Subj | SwapMethod::SubjLemma)
    }
}

impl fmt::Display for SwapMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapOptions {
    /// Fix the capitalisation of a moved span's first word.
    pub adjust_case: bool,
    /// Predicate swaps also exchange the lemma, not just the form.
    pub swap_lemma: bool,
}

impl Default for SwapOptions {
    fn default() -> Self {
        SwapOptions { adjust_case: true, swap_lemma: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SwapError {
    #[error("span {start}..={end} does not fit a sentence of {len} tokens")]
    SpanOutOfRange { start: usize, end: usize, len: usize },
    #[error("replacement is empty")]
    EmptyReplacement,
    #[error("pair {0} has no subject on both sides")]
    MissingSubject(String),
    #[error("a pair cannot be swapped with itself ({0})")]
    SameDonor(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A synthetic sentence pair and where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedPair {
    pub src: Sentence,
    pub tgt: Sentence,
    pub src_text: String,
    pub tgt_text: String,
    pub method: SwapMethod,
    /// The pair that was edited.
    pub donor_a: String,
    /// The pair the inserted material came from.
    pub donor_b: String,
}

impl AugmentedPair {
    pub fn sentence(&self, side: Side) -> &Sentence {
        match side {
            Side::Source => &self.src,
            Side::Target => &self.tgt,
        }
    }

    pub fn text(&self, side: Side) -> &str {
        match side {
            Side::Source => &self.src_text,
            Side::Target => &self.tgt_text,
        }
    }
}

/// How a moved span's sentence position changed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositionChange {
    ToInitial,
    FromInitial,
    Unchanged,
}

impl PositionChange {
    pub fn between(old_start: usize, new_start: usize) -> PositionChange {
        match (old_start == 1, new_start == 1) {
            (false, true) => PositionChange::ToInitial,
            (true, false) => PositionChange::FromInitial,
            _ => PositionChange::Unchanged,
        }
    }
}

/// Capitalises or decapitalises the first token of a moved span.
///
/// Proper nouns, words whose lemma is capitalised ("I") and acronyms
/// ("NATO") keep their case when they move away from the sentence start.
pub fn adjust_case(tokens: &mut [Token], change: PositionChange) {
    let Some(first) = tokens.first_mut() else { return };
    match change {
        PositionChange::ToInitial => {
            if first.form.chars().next().is_some_and(char::is_lowercase) {
                first.form = recase_first(&first.form, true);
            }
        }
        PositionChange::FromInitial => {
            let acronym = first.form.chars().count() > 1 && first.form.chars().all(|c| !c.is_lowercase());
            let proper_lemma = first.lemma.chars().next().is_some_and(char::is_uppercase);
            if first.upos != "PROPN" && !proper_lemma && !acronym {
                first.form = recase_first(&first.form, false);
            }
        }
        PositionChange::Unchanged => {}
    }
}

fn recase_first(s: &str, upper: bool) -> String {
    let mut chars = s.chars();
    let Some(c) = chars.next() else { return String::new() };
    let mut out = String::with_capacity(s.len());
    if upper {
        out.extend(c.to_uppercase());
    } else {
        out.extend(c.to_lowercase());
    }
    out.push_str(chars.as_str());
    out
}

/// Replaces `tokens[span]` with `replacement`, renumbering ids and heads.
///
/// `replacement` is a run of consecutive tokens cut from another sentence,
/// keeping that sentence's ids. Its tokens whose heads point outside the
/// run attach where the removed span's root attached, with the removed
/// root's relation. The last inserted token inherits the removed span's
/// trailing `space_after`.
pub fn splice(tokens: &[Token], span: Span, replacement: &[Token], case: bool) -> Result<Vec<Token>, SwapError> {
    let n = tokens.len();
    if span.start == 0 || span.end > n || span.start > span.end {
        return Err(SwapError::SpanOutOfRange { start: span.start, end: span.end, len: n });
    }
    let Some(rep_first) = replacement.first().map(|t| t.id) else {
        return Err(SwapError::EmptyReplacement);
    };
    let m = replacement.len();
    let removed = span.slice(tokens);
    let old_root = removed.iter().find(|t| !span.contains(t.head)).unwrap_or(&removed[0]);

    let map_host = |id: usize| -> usize {
        if id == 0 || id < span.start {
            id
        } else {
            id - span.len() + m
        }
    };
    let in_rep = |id: usize| id >= rep_first && id < rep_first + m;
    let new_root = span.start + replacement.iter().position(|t| !in_rep(t.head)).unwrap_or(0);

    let mut out = Vec::with_capacity(n - span.len() + m);
    for tok in &tokens[..span.start - 1] {
        out.push(host_token(tok, &span, new_root, &map_host));
    }
    for (j, tok) in replacement.iter().enumerate() {
        let mut t = tok.clone();
        t.id = span.start + j;
        if in_rep(tok.head) {
            t.head = span.start + (tok.head - rep_first);
        } else {
            t.head = map_host(old_root.head);
            t.deprel = old_root.deprel.clone();
        }
        out.push(t);
    }
    out[span.start + m - 2].space_after = removed[removed.len() - 1].space_after;
    if case {
        adjust_case(&mut out[span.start - 1..span.start - 1 + m], PositionChange::between(rep_first, span.start));
    }
    for tok in &tokens[span.end..] {
        out.push(host_token(tok, &span, new_root, &map_host));
    }
    Ok(out)
}

fn host_token(tok: &Token, span: &Span, new_root: usize, map_host: &impl Fn(usize) -> usize) -> Token {
    let mut t = tok.clone();
    t.id = map_host(tok.id);
    t.head = if span.contains(tok.head) { new_root } else { map_host(tok.head) };
    t
}

#[derive(Clone, Copy)]
enum Role {
    Subject,
    Object,
}

fn role_span(pair: &EligiblePair, side: Side, role: Role) -> Result<Span, SwapError> {
    let triplet = pair.triplet(side);
    match role {
        Role::Object => Ok(triplet.object.span),
        Role::Subject => {
            triplet.subject.map(|c| c.span).ok_or_else(|| SwapError::MissingSubject(pair.pair_id().into()))
        }
    }
}

fn distinct(a: &EligiblePair, b: &EligiblePair) -> Result<(), SwapError> {
    if a.pair_id() == b.pair_id() {
        return Err(SwapError::SameDonor(a.pair_id().into()));
    }
    Ok(())
}

fn assemble(
    src: Vec<Token>,
    tgt: Vec<Token>,
    method: SwapMethod,
    edited: &EligiblePair,
    donor: &EligiblePair,
) -> Result<AugmentedPair, SwapError> {
    let src = Sentence::new(src)?;
    let tgt = Sentence::new(tgt)?;
    Ok(AugmentedPair {
        src_text: linearize(src.tokens()),
        tgt_text: linearize(tgt.tokens()),
        src,
        tgt,
        method,
        donor_a: edited.pair_id().into(),
        donor_b: donor.pair_id().into(),
    })
}

fn swap_role(
    a: &EligiblePair,
    b: &EligiblePair,
    role: Role,
    method: SwapMethod,
    opts: &SwapOptions,
) -> Result<(AugmentedPair, AugmentedPair), SwapError> {
    distinct(a, b)?;
    let mut first = Vec::with_capacity(2);
    let mut second = Vec::with_capacity(2);
    for side in [Side::Source, Side::Target] {
        let (ta, tb) = (a.tree(side).tokens(), b.tree(side).tokens());
        let (sa, sb) = (role_span(a, side, role)?, role_span(b, side, role)?);
        first.push(splice(ta, sa, sb.slice(tb), opts.adjust_case)?);
        second.push(splice(tb, sb, sa.slice(ta), opts.adjust_case)?);
    }
    let (a_tgt, a_src) = (first.pop().unwrap(), first.pop().unwrap());
    let (b_tgt, b_src) = (second.pop().unwrap(), second.pop().unwrap());
    Ok((assemble(a_src, a_tgt, method, a, b)?, assemble(b_src, b_tgt, method, b, a)?))
}

/// Exchanges the object subtrees of `a` and `b` on both sides.
pub fn swap_objects(
    a: &EligiblePair,
    b: &EligiblePair,
    opts: &SwapOptions,
) -> Result<(AugmentedPair, AugmentedPair), SwapError> {
    swap_role(a, b, Role::Object, SwapMethod::Obj, opts)
}

/// Exchanges the subject subtrees of `a` and `b` on both sides.
pub fn swap_subjects(
    a: &EligiblePair,
    b: &EligiblePair,
    opts: &SwapOptions,
) -> Result<(AugmentedPair, AugmentedPair), SwapError> {
    swap_role(a, b, Role::Subject, SwapMethod::Subj, opts)
}

/// Exchanges the predicate words of `a` and `b` on both sides.
///
/// Only the predicate token changes. Auxiliaries, dependents and word order
/// stay as they were and no agreement is repaired.
pub fn swap_predicates(
    a: &EligiblePair,
    b: &EligiblePair,
    opts: &SwapOptions,
) -> Result<(AugmentedPair, AugmentedPair), SwapError> {
    distinct(a, b)?;
    let mut first = Vec::with_capacity(2);
    let mut second = Vec::with_capacity(2);
    for side in [Side::Source, Side::Target] {
        let (ta, tb) = (a.tree(side).tokens(), b.tree(side).tokens());
        let (pa, pb) = (a.triplet(side).predicate, b.triplet(side).predicate);
        first.push(replace_predicate(ta, pa, &tb[pb - 1], opts));
        second.push(replace_predicate(tb, pb, &ta[pa - 1], opts));
    }
    let (a_tgt, a_src) = (first.pop().unwrap(), first.pop().unwrap());
    let (b_tgt, b_src) = (second.pop().unwrap(), second.pop().unwrap());
    Ok((assemble(a_src, a_tgt, SwapMethod::Pred, a, b)?, assemble(b_src, b_tgt, SwapMethod::Pred, b, a)?))
}

fn replace_predicate(tokens: &[Token], at: usize, donor: &Token, opts: &SwapOptions) -> Vec<Token> {
    let mut out = tokens.to_vec();
    let slot = &mut out[at - 1];
    slot.form = donor.form.clone();
    if opts.swap_lemma {
        slot.lemma = donor.lemma.clone();
    }
    if opts.adjust_case {
        adjust_case(&mut out[at - 1..at], PositionChange::between(donor.id, at));
    }
    out
}

/// Whether swapping `a` and `b` with `method` would leave both unchanged:
/// the exchanged words are identical on both sides.
pub fn is_noop(method: SwapMethod, a: &EligiblePair, b: &EligiblePair) -> bool {
    let forms = |t: &[Token]| t.iter().map(|t| t.form.clone()).collect::<Vec<_>>();
    [Side::Source, Side::Target].into_iter().all(|side| {
        let (ta, tb) = (a.tree(side).tokens(), b.tree(side).tokens());
        let (pa, pb) = (a.triplet(side), b.triplet(side));
        let span_pair = match method {
            SwapMethod::Obj | SwapMethod::ObjLemma => Some((pa.object.span, pb.object.span)),
            SwapMethod::Subj | SwapMethod::SubjLemma => match (pa.subject, pb.subject) {
                (Some(x), Some(y)) => Some((x.span, y.span)),
                _ => return false,
            },
            SwapMethod::Pred => None,
        };
        match span_pair {
            Some((sa, sb)) => forms(sa.slice(ta)) == forms(sb.slice(tb)),
            None => ta[pa.predicate - 1].form == tb[pb.predicate - 1].form,
        }
    })
}

/// Runs `method` on `a` and `b`.
pub fn swap(
    method: SwapMethod,
    a: &EligiblePair,
    b: &EligiblePair,
    opts: &SwapOptions,
) -> Result<(AugmentedPair, AugmentedPair), SwapError> {
    match method {
        SwapMethod::Obj | SwapMethod::ObjLemma => swap_role(a, b, Role::Object, method, opts),
        SwapMethod::Subj | SwapMethod::SubjLemma => swap_role(a, b, Role::Subject, method, opts),
        SwapMethod::Pred => swap_predicates(a, b, opts),
    }
}
