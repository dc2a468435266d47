//! Seeded synthetic parses for benchmarks and tests.
//!
//! [`clause`] builds a transitive clause whose subject, object and
//! predicate positions are known by construction; [`random_tree`] builds an
//! arbitrary (possibly non-projective) tree with random labels.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::corpus::Token;
use crate::deptree::Span;

/// Word lists for one synthetic language.
#[derive(Clone, Copy, Debug)]
pub struct Lexicon {
    pub determiners: &'static [&'static str],
    pub adjectives: &'static [&'static str],
    pub nouns: &'static [&'static str],
    pub names: &'static [&'static str],
    pub verbs: &'static [&'static str],
    pub auxiliaries: &'static [&'static str],
    pub adpositions: &'static [&'static str],
    pub adverbs: &'static [&'static str],
}

pub const SOURCE: Lexicon = Lexicon {
    determiners: &["the", "a", "this", "that", "every"],
    adjectives: &["black", "red", "small", "old", "quiet", "bright", "heavy", "new", "strange", "warm"],
    nouns: &[
        "dog", "cat", "soup", "ship", "letter", "garden", "river", "teacher", "window", "song", "bridge", "doctor",
        "engine", "market", "story", "lamp", "forest", "painter", "coin", "storm",
    ],
    names: &["Anna", "Peter", "London", "Sauron", "Budapest", "Maria"],
    verbs: &["see", "find", "paint", "carry", "follow", "watch", "build", "sell", "hear", "open", "chase", "take"],
    auxiliaries: &["will", "can", "must", "did"],
    adpositions: &["in", "on", "near", "under", "behind", "after"],
    adverbs: &["today", "suddenly", "often", "again", "there", "slowly"],
};

pub const TARGET: Lexicon = Lexicon {
    determiners: &["a", "egy", "ez", "az", "minden"],
    adjectives: &["fekete", "piros", "kicsi", "régi", "csendes", "fényes", "nehéz", "új", "furcsa", "meleg"],
    nouns: &[
        "kutya",
        "macska",
        "leves",
        "hajó",
        "levél",
        "kert",
        "folyó",
        "tanár",
        "ablak",
        "dal",
        "híd",
        "orvos",
        "motor",
        "piac",
        "történet",
        "lámpa",
        "erdő",
        "festő",
        "érme",
        "vihar",
    ],
    names: &["Anna", "Péter", "London", "Szauron", "Budapest", "Mária"],
    verbs: &["lát", "talál", "fest", "visz", "követ", "néz", "épít", "elad", "hall", "nyit", "kerget", "vesz"],
    auxiliaries: &["fog", "tud", "kell", "akar"],
    adpositions: &["mellett", "alatt", "mögött", "után", "előtt", "között"],
    adverbs: &["ma", "hirtelen", "gyakran", "újra", "ott", "lassan"],
};

/// A clause with its known subject, object and predicate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub tokens: Vec<Token>,
    pub subject: Span,
    pub object: Span,
    pub predicate: usize,
}

/// Constituent order of a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Svo,
    Sov,
    Ovs,
    Vso,
}

impl Order {
    pub const ALL: [Order; 4] = [Order::Svo, Order::Sov, Order::Ovs, Order::Vso];
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    Subject,
    Verb,
    Object,
}

struct Draft {
    // form, lemma, upos, head (index into draft, None = root), deprel, space_after
    words: Vec<(String, String, &'static str, Option<usize>, &'static str, bool)>,
}

impl Draft {
    fn push(&mut self, form: &str, upos: &'static str, deprel: &'static str) -> usize {
        self.words.push((form.into(), form.into(), upos, None, deprel, true));
        self.words.len() - 1
    }

    fn attach(&mut self, child: usize, head: usize) {
        self.words[child].3 = Some(head);
    }
}

fn noun_phrase<R: Rng + ?Sized>(rng: &mut R, lex: &Lexicon, d: &mut Draft, deprel: &'static str) -> usize {
    if rng.random_bool(0.2) {
        return d.push(lex.names.choose(rng).unwrap(), "PROPN", deprel);
    }
    let mut deps = Vec::new();
    if rng.random_bool(0.7) {
        deps.push(d.push(lex.determiners.choose(rng).unwrap(), "DET", "det"));
    }
    if rng.random_bool(0.4) {
        deps.push(d.push(lex.adjectives.choose(rng).unwrap(), "ADJ", "amod"));
    }
    let head = d.push(lex.nouns.choose(rng).unwrap(), "NOUN", deprel);
    for dep in deps {
        d.attach(dep, head);
    }
    head
}

/// A random transitive clause in `order` ending with a full stop.
pub fn clause<R: Rng + ?Sized>(rng: &mut R, lex: &Lexicon, order: Order) -> Clause {
    let mut d = Draft { words: Vec::new() };
    let mut attach_to_verb = Vec::new();
    if rng.random_bool(0.2) {
        attach_to_verb.push(d.push(lex.adverbs.choose(rng).unwrap(), "ADV", "advmod"));
    }
    let blocks = match order {
        Order::Svo => [Block::Subject, Block::Verb, Block::Object],
        Order::Sov => [Block::Subject, Block::Object, Block::Verb],
        Order::Ovs => [Block::Object, Block::Verb, Block::Subject],
        Order::Vso => [Block::Verb, Block::Subject, Block::Object],
    };
    let (mut subject, mut object, mut verb) = ((0, 0), (0, 0), 0);
    for block in blocks {
        let start = d.words.len();
        match block {
            Block::Subject => {
                attach_to_verb.push(noun_phrase(rng, lex, &mut d, "nsubj"));
                subject = (start, d.words.len() - 1);
            }
            Block::Object => {
                attach_to_verb.push(noun_phrase(rng, lex, &mut d, "obj"));
                object = (start, d.words.len() - 1);
            }
            Block::Verb => {
                if rng.random_bool(0.3) {
                    attach_to_verb.push(d.push(lex.auxiliaries.choose(rng).unwrap(), "AUX", "aux"));
                }
                verb = d.push(lex.verbs.choose(rng).unwrap(), "VERB", "root");
            }
        }
    }
    if rng.random_bool(0.3) {
        let case = d.push(lex.adpositions.choose(rng).unwrap(), "ADP", "case");
        let head = d.push(lex.nouns.choose(rng).unwrap(), "NOUN", "obl");
        d.attach(case, head);
        attach_to_verb.push(head);
    }
    let last = d.words.len() - 1;
    d.words[last].5 = false;
    attach_to_verb.push(d.push(".", "PUNCT", "punct"));
    for i in attach_to_verb {
        d.attach(i, verb);
    }

    let first = &mut d.words[0];
    if first.2 != "PROPN" {
        first.0 = capitalize(&first.0);
    }
    let tokens = d
        .words
        .into_iter()
        .enumerate()
        .map(|(i, (form, lemma, upos, head, deprel, space))| {
            let t = Token::new(i + 1, form, lemma, upos, head.map_or(0, |h| h + 1), deprel);
            if space {
                t
            } else {
                t.no_space_after()
            }
        })
        .collect();
    Clause {
        tokens,
        subject: Span { start: subject.0 + 1, end: subject.1 + 1 },
        object: Span { start: object.0 + 1, end: object.1 + 1 },
        predicate: verb + 1,
    }
}

/// A source clause in SVO order and a target clause in a random order.
pub fn clause_pair<R: Rng + ?Sized>(rng: &mut R) -> (Clause, Clause) {
    let src = clause(rng, &SOURCE, Order::Svo);
    let order = *Order::ALL.choose(rng).unwrap();
    (src, clause(rng, &TARGET, order))
}

const LABELS: &[&str] = &["nsubj", "obj", "dobj", "det", "amod", "obl", "advmod", "punct", "nmod", "conj"];
const PUNCT: &[&str] = &[".", ",", "!", "?", ";", ":", "(", ")", "\""];

/// An arbitrary tree of `1..=max_len` tokens with random forms, labels and
/// spacing.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Vec<Token> {
    let n = rng.random_range(1..=max_len.max(1));
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = alloc::vec![0; n];
    for k in 1..n {
        heads[order[k] - 1] = order[rng.random_range(0..k)];
    }
    (1..=n)
        .map(|id| {
            let form = if rng.random_bool(0.15) {
                String::from(*PUNCT.choose(rng).unwrap())
            } else {
                format!("w{}", rng.random_range(0..50u32))
            };
            let deprel = if heads[id - 1] == 0 { "root" } else { LABELS.choose(rng).unwrap() };
            let t = Token::new(id, form.clone(), form, "X", heads[id - 1], deprel);
            if rng.random_bool(0.3) {
                t.no_space_after()
            } else {
                t
            }
        })
        .collect()
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
