//! Which sentence pairs can take part in subtree swapping.
//!
//! A side qualifies when its tree has exactly one subject edge and exactly
//! one object edge, both hanging off the same head (the predicate), and the
//! subtrees under the subject and the object each cover a contiguous run of
//! words. A pair qualifies when both sides do.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::corpus::{SentencePair, Side};
use crate::deptree::{DepTree, Span};

/// Dependency labels that mark subjects and objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelConfig {
    subject_labels: BTreeSet<String>,
    object_labels: BTreeSet<String>,
    /// Only accept triplets whose predicate is the sentence root.
    pub require_root_predicate: bool,
    /// Accept a side with no subject edge at all (pro-drop). The object
    /// head then defines the predicate, and the side cannot take part in
    /// subject swaps.
    pub allow_dropped_subject: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LabelConfigError {
    #[error("subject label set is empty")]
    NoSubjectLabels,
    #[error("object label set is empty")]
    NoObjectLabels,
    #[error("label {0:?} is both a subject and an object label")]
    Overlap(String),
}

impl Default for LabelConfig {
    fn default() -> Self {
        LabelConfig {
            subject_labels: ["nsubj"].into_iter().map(String::from).collect(),
            object_labels: ["obj", "dobj"].into_iter().map(String::from).collect(),
            require_root_predicate: false,
            allow_dropped_subject: false,
        }
    }
}

impl LabelConfig {
    pub fn new<S, O>(subjects: S, objects: O) -> Result<Self, LabelConfigError>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        O: IntoIterator,
        O::Item: Into<String>,
    {
        let subject_labels: BTreeSet<String> = subjects.into_iter().map(Into::into).collect();
        let object_labels: BTreeSet<String> = objects.into_iter().map(Into::into).collect();
        if subject_labels.is_empty() {
            return Err(LabelConfigError::NoSubjectLabels);
        }
        if object_labels.is_empty() {
            return Err(LabelConfigError::NoObjectLabels);
        }
        if let Some(l) = subject_labels.intersection(&object_labels).next() {
            return Err(LabelConfigError::Overlap(l.clone()));
        }
        Ok(LabelConfig { subject_labels, object_labels, ..Default::default() })
    }

    pub fn with_dropped_subject(mut self, allow: bool) -> Self {
        self.allow_dropped_subject = allow;
        self
    }

    pub fn with_root_predicate(mut self, require: bool) -> Self {
        self.require_root_predicate = require;
        self
    }

    pub fn subject_labels(&self) -> &BTreeSet<String> {
        &self.subject_labels
    }

    pub fn object_labels(&self) -> &BTreeSet<String> {
        &self.object_labels
    }

    pub fn is_subject(&self, deprel: &str) -> bool {
        self.subject_labels.contains(deprel)
    }

    pub fn is_object(&self, deprel: &str) -> bool {
        self.object_labels.contains(deprel)
    }
}

/// The head of a subject or object and the span its subtree covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Constituent {
    pub head: usize,
    pub span: Span,
}

/// Subject, object and predicate located in one tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triplet {
    /// `None` only when dropped subjects are allowed.
    pub subject: Option<Constituent>,
    pub object: Constituent,
    pub predicate: usize,
}

impl Triplet {
    pub fn subject_head(&self) -> Option<usize> {
        self.subject.map(|c| c.head)
    }

    pub fn subject_span(&self) -> Option<Span> {
        self.subject.map(|c| c.span)
    }

    pub fn object_head(&self) -> usize {
        self.object.head
    }

    pub fn object_span(&self) -> Span {
        self.object.span
    }
}

/// First condition a tree failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rejection {
    MissingSubject,
    MultipleSubjects,
    MissingObject,
    MultipleObjects,
    HeadMismatch,
    PredicateNotRoot,
    NonContiguousSubject,
    NonContiguousObject,
    OverlappingSpans,
    PredicateInSpan,
}

impl Rejection {
    pub const ALL: [Rejection; 10] = [
        Rejection::MissingSubject,
        Rejection::MultipleSubjects,
        Rejection::MissingObject,
        Rejection::MultipleObjects,
        Rejection::HeadMismatch,
        Rejection::PredicateNotRoot,
        Rejection::NonContiguousSubject,
        Rejection::NonContiguousObject,
        Rejection::OverlappingSpans,
        Rejection::PredicateInSpan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Rejection::MissingSubject => "missing-subject",
            Rejection::MultipleSubjects => "multiple-subjects",
            Rejection::MissingObject => "missing-object",
            Rejection::MultipleObjects => "multiple-objects",
            Rejection::HeadMismatch => "head-mismatch",
            Rejection::PredicateNotRoot => "predicate-not-root",
            Rejection::NonContiguousSubject => "non-contiguous-subject",
            Rejection::NonContiguousObject => "non-contiguous-object",
            Rejection::OverlappingSpans => "overlapping-spans",
            Rejection::PredicateInSpan => "predicate-in-span",
        }
    }

    pub fn parse(s: &str) -> Option<Rejection> {
        Rejection::ALL.into_iter().find(|r| r.as_str() == s)
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Locates the subject/object/predicate triplet of a tree.
pub fn find_triplet(tree: &DepTree, labels: &LabelConfig) -> Result<Triplet, Rejection> {
    let mut subjects = Vec::new();
    let mut objects = Vec::new();
    for tok in tree.tokens() {
        if labels.is_subject(&tok.deprel) {
            subjects.push(tok.id);
        } else if labels.is_object(&tok.deprel) {
            objects.push(tok.id);
        }
    }

    let subject = match subjects.as_slice() {
        [] if labels.allow_dropped_subject => None,
        [] => return Err(Rejection::MissingSubject),
        [s] => Some(*s),
        _ => return Err(Rejection::MultipleSubjects),
    };
    let object = match objects.as_slice() {
        [] => return Err(Rejection::MissingObject),
        [o] => *o,
        _ => return Err(Rejection::MultipleObjects),
    };

    let head_of = |id: usize| tree.tokens()[id - 1].head;
    let predicate = head_of(object);
    if predicate == 0 || subject.is_some_and(|s| head_of(s) != predicate) {
        return Err(Rejection::HeadMismatch);
    }
    if labels.require_root_predicate && predicate != tree.root() {
        return Err(Rejection::PredicateNotRoot);
    }

    let span_of = |id: usize| tree.subtree_span(id).expect("id comes from the tree");
    let subject = match subject {
        Some(head) => match span_of(head) {
            Some(span) => Some(Constituent { head, span }),
            None => return Err(Rejection::NonContiguousSubject),
        },
        None => None,
    };
    let object = match span_of(object) {
        Some(span) => Constituent { head: object, span },
        None => return Err(Rejection::NonContiguousObject),
    };

    if let Some(s) = subject {
        if s.span.overlaps(&object.span) {
            return Err(Rejection::OverlappingSpans);
        }
        if s.span.contains(predicate) {
            return Err(Rejection::PredicateInSpan);
        }
    }
    if object.span.contains(predicate) {
        return Err(Rejection::PredicateInSpan);
    }
    Ok(Triplet { subject, object, predicate })
}

/// Why a pair was turned down: which side, and what failed there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairRejection {
    pub side: Side,
    pub reason: Rejection,
}

/// A pair whose two sides both contain a usable triplet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EligiblePair {
    pub pair: SentencePair<DepTree>,
    pub src_triplet: Triplet,
    pub tgt_triplet: Triplet,
}

impl EligiblePair {
    pub fn pair_id(&self) -> &str {
        &self.pair.pair_id
    }

    pub fn tree(&self, side: Side) -> &DepTree {
        self.pair.side(side)
    }

    pub fn triplet(&self, side: Side) -> &Triplet {
        match side {
            Side::Source => &self.src_triplet,
            Side::Target => &self.tgt_triplet,
        }
    }

    pub fn predicate_lemma(&self, side: Side) -> &str {
        let tree = self.tree(side);
        &tree.tokens()[self.triplet(side).predicate - 1].lemma
    }

    pub fn has_subjects(&self) -> bool {
        self.src_triplet.subject.is_some() && self.tgt_triplet.subject.is_some()
    }
}

/// Checks both sides; the source side is reported first when both fail.
pub fn check_pair(pair: SentencePair<DepTree>, labels: &LabelConfig) -> Result<EligiblePair, PairRejection> {
    let src_triplet = find_triplet(&pair.src, labels).map_err(|reason| PairRejection { side: Side::Source, reason })?;
    let tgt_triplet = find_triplet(&pair.tgt, labels).map_err(|reason| PairRejection { side: Side::Target, reason })?;
    Ok(EligiblePair { pair, src_triplet, tgt_triplet })
}

/// Counts of rejected pairs, keyed by side and reason.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RejectionTally(BTreeMap<PairRejection, usize>);

impl RejectionTally {
    pub fn add(&mut self, rejection: PairRejection) {
        *self.0.entry(rejection).or_default() += 1;
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, side: Side, reason: Rejection) -> usize {
        self.0.get(&PairRejection { side, reason }).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PairRejection, usize)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn merge(&mut self, other: &RejectionTally) {
        for (k, v) in other.iter() {
            *self.0.entry(k).or_default() += v;
        }
    }
}

/// Keeps eligible pairs in input order and tallies the rest.
pub fn filter_corpus<I>(pairs: I, labels: &LabelConfig) -> (Vec<EligiblePair>, RejectionTally)
where
    I: IntoIterator<Item = SentencePair<DepTree>>,
{
    let mut kept = Vec::new();
    let mut tally = RejectionTally::default();
    for pair in pairs {
        match check_pair(pair, labels) {
            Ok(e) => kept.push(e),
            Err(r) => tally.add(r),
        }
    }
    (kept, tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, *};

    #[test]
    fn figure_tree_triplet() {
        let t = find_triplet(&chasing_en(), &LabelConfig::default()).unwrap();
        assert_eq!(t.subject, Some(Constituent { head: 3, span: Span { start: 1, end: 3 } }));
        assert_eq!(t.object, Constituent { head: 8, span: Span { start: 6, end: 8 } });
        assert_eq!(t.predicate, 5);
    }

    #[test]
    fn intransitive_lacks_object() {
        let t = fixtures::tree(&[
            ("Birds", "NOUN", 2, "nsubj", true),
            ("fly", "VERB", 0, "root", false),
            (".", "PUNCT", 2, "punct", true),
        ]);
        assert_eq!(find_triplet(&t, &LabelConfig::default()), Err(Rejection::MissingObject));
    }

    #[test]
    fn two_subjects_are_rejected() {
        // "Cats sleep and dogs eat bones."
        let t = fixtures::tree(&[
            ("Cats", "NOUN", 2, "nsubj", true),
            ("sleep", "VERB", 0, "root", true),
            ("and", "CCONJ", 5, "cc", true),
            ("dogs", "NOUN", 5, "nsubj", true),
            ("eat", "VERB", 2, "conj", true),
            ("bones", "NOUN", 5, "obj", false),
            (".", "PUNCT", 2, "punct", true),
        ]);
        assert_eq!(find_triplet(&t, &LabelConfig::default()), Err(Rejection::MultipleSubjects));
    }

    #[test]
    fn subject_and_object_must_share_head() {
        // "Mary said John likes tea": nsubj(said, Mary), obj(likes, tea), no nsubj on likes
        let t = fixtures::tree(&[
            ("Mary", "PROPN", 2, "nsubj", true),
            ("said", "VERB", 0, "root", true),
            ("John", "PROPN", 4, "vocative", true),
            ("likes", "VERB", 2, "ccomp", true),
            ("tea", "NOUN", 4, "obj", true),
        ]);
        assert_eq!(find_triplet(&t, &LabelConfig::default()), Err(Rejection::HeadMismatch));
    }

    fn extraposed() -> DepTree {
        // "A man bought a car with a beard." -- the PP modifies "man".
        parse(
            "
1 A a DET 2 det
2 man man NOUN 3 nsubj
3 bought buy VERB 0 root
4 a a DET 5 det
5 car car NOUN 3 obj
6 with with ADP 8 case
7 a a DET 8 det
8 beard beard NOUN 2 nmod -
9 . . PUNCT 3 punct",
        )
    }

    #[test]
    fn extraposed_modifier_breaks_contiguity() {
        assert_eq!(find_triplet(&extraposed(), &LabelConfig::default()), Err(Rejection::NonContiguousSubject));
    }

    #[test]
    fn pair_rejection_names_side() {
        let p = fixtures::pair("x:0", CHASING_EN, "1 Madarak madár NOUN 2 nsubj\n2 repülnek repül VERB 0 root");
        assert_eq!(
            check_pair(p, &LabelConfig::default()),
            Err(PairRejection { side: Side::Target, reason: Rejection::MissingObject })
        );
        let p = SentencePair {
            pair_id: "x:1".into(),
            doc_id: "x".into(),
            subcorpus: "_".into(),
            src: extraposed(),
            tgt: parse(CHASING_HU),
        };
        assert_eq!(
            check_pair(p, &LabelConfig::default()),
            Err(PairRejection { side: Side::Source, reason: Rejection::NonContiguousSubject })
        );
    }

    #[test]
    fn root_predicate_flag() {
        let mut labels = LabelConfig::default();
        labels.require_root_predicate = true;
        assert!(find_triplet(&chasing_en(), &labels).is_ok());
        // "I know the dog chased the cat": triplet sits under the ccomp.
        let t = parse(
            "
1 I I PRON 2 nsubj:outer
2 know know VERB 0 root
3 the the DET 4 det
4 dog dog NOUN 5 nsubj
5 chased chase VERB 2 ccomp
6 the the DET 7 det
7 cat cat NOUN 5 obj",
        );
        assert!(find_triplet(&t, &LabelConfig::default()).is_ok());
        assert_eq!(find_triplet(&t, &labels), Err(Rejection::PredicateNotRoot));
    }

    #[test]
    fn dropped_subject_is_opt_in() {
        let t = parse(LATOM_HU);
        assert_eq!(find_triplet(&t, &LabelConfig::default()), Err(Rejection::MissingSubject));
        let labels = LabelConfig::default().with_dropped_subject(true);
        let tr = find_triplet(&t, &labels).unwrap();
        assert_eq!(tr.subject, None);
        assert_eq!(tr.predicate, 1);
        assert_eq!(tr.object_span(), Span { start: 2, end: 3 });
    }

    #[test]
    fn label_config_validation() {
        assert!(LabelConfig::new(["nsubj"], ["obj"]).is_ok());
        assert_eq!(LabelConfig::new(Vec::<String>::new(), ["obj"]), Err(LabelConfigError::NoSubjectLabels));
        assert_eq!(LabelConfig::new(["x"], ["x"]), Err(LabelConfigError::Overlap("x".into())));
        let dobj = parse("1 I I PRON 2 nsubj\n2 see see VERB 0 root\n3 it it PRON 2 dobj");
        assert!(find_triplet(&dobj, &LabelConfig::default()).is_ok());
    }

    #[test]
    fn filtering_conserves_counts() {
        let (kept, tally) = filter_corpus(Vec::new(), &LabelConfig::default());
        assert!(kept.is_empty() && tally.is_empty());

        let pairs = vec![
            fixtures::pair("a:0", CHASING_EN, CHASING_HU),
            fixtures::pair("a:1", COOKING_EN, "1 Madarak madár NOUN 2 nsubj\n2 repülnek repül VERB 0 root"),
            fixtures::pair("a:2", COOKING_EN, COOKING_HU),
        ];
        let (kept, tally) = filter_corpus(pairs, &LabelConfig::default());
        assert_eq!(kept.iter().map(|e| e.pair_id()).collect::<Vec<_>>(), ["a:0", "a:2"]);
        assert_eq!(tally.total(), 1);
        assert_eq!(tally.get(Side::Target, Rejection::MissingObject), 1);
    }

    #[test]
    fn worked_example_pairs_are_eligible() {
        let labels = LabelConfig::default();
        let mut n = 0;
        for (i, (src, tgt)) in fixtures::WORKED_PAIRS.iter().enumerate() {
            let res = check_pair(fixtures::pair(&alloc::format!("worked:{i}"), src, tgt), &labels);
            if *tgt == LATOM_HU {
                assert_eq!(res.unwrap_err(), PairRejection { side: Side::Target, reason: Rejection::MissingSubject });
            } else {
                res.unwrap();
                n += 1;
            }
        }
        assert_eq!(n, 9);
        let pro_drop = LabelConfig::default().with_dropped_subject(true);
        let all: Vec<_> = fixtures::WORKED_PAIRS.iter().map(|(s, t)| fixtures::pair("p", s, t)).collect();
        let (kept, tally) = filter_corpus(all, &pro_drop);
        assert_eq!((kept.len(), tally.total()), (10, 0));
    }

    #[test]
    fn rejection_names_round_trip() {
        for r in Rejection::ALL {
            assert_eq!(Rejection::parse(r.as_str()), Some(r));
        }
    }
}
