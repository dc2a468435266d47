//! Hand-annotated parses shared by the unit tests.
//!
//! Each line is `id form lemma upos head deprel`, optionally followed by `-`
//! for `SpaceAfter=No`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{Sentence, SentencePair, Token};
use crate::deptree::DepTree;
use crate::eligibility::{check_pair, EligiblePair, LabelConfig};

pub fn tree(spec: &[(&str, &str, usize, &str, bool)]) -> DepTree {
    let tokens = spec
        .iter()
        .enumerate()
        .map(|(i, &(form, upos, head, deprel, space))| Token {
            space_after: space,
            ..Token::new(i + 1, form, form.to_lowercase(), upos, head, deprel)
        })
        .collect();
    DepTree::new(Sentence::new(tokens).unwrap())
}

pub fn parse(block: &str) -> DepTree {
    let tokens: Vec<Token> = block
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split_whitespace().collect();
            Token {
                id: cols[0].parse().unwrap(),
                form: cols[1].into(),
                lemma: cols[2].into(),
                upos: cols[3].into(),
                head: cols[4].parse().unwrap(),
                deprel: cols[5].into(),
                space_after: cols.get(6) != Some(&"-"),
            }
        })
        .collect();
    DepTree::new(Sentence::new(tokens).unwrap())
}

pub fn pair(id: &str, src: &str, tgt: &str) -> SentencePair<DepTree> {
    SentencePair {
        pair_id: id.into(),
        doc_id: String::from("worked"),
        subcorpus: String::from("_"),
        src: parse(src),
        tgt: parse(tgt),
    }
}

pub fn eligible(id: &str, src: &str, tgt: &str) -> EligiblePair {
    check_pair(pair(id, src, tgt), &LabelConfig::default()).unwrap()
}

pub fn chasing_en() -> DepTree {
    parse(CHASING_EN)
}

pub const CHASING_EN: &str = "
1 The the DET 3 det
2 black black ADJ 3 amod
3 dog dog NOUN 5 nsubj
4 is be AUX 5 aux
5 chasing chase VERB 0 root
6 the the DET 8 det
7 red red ADJ 8 amod
8 cat cat NOUN 5 obj -
9 . . PUNCT 5 punct";

pub const CHASING_HU: &str = "
1 A a DET 3 det
2 fekete fekete ADJ 3 amod
3 kutya kutya NOUN 4 nsubj
4 kergeti kerget VERB 0 root
5 a a DET 7 det
6 piros piros ADJ 7 amod
7 macskát macska NOUN 4 obj -
8 . . PUNCT 4 punct";

pub const COOKING_EN: &str = "
1 Gordon Gordon PROPN 4 nsubj
2 Ramsay Ramsay PROPN 1 flat
3 is be AUX 4 aux
4 cooking cook VERB 0 root
5 a a DET 7 det
6 delicious delicious ADJ 7 amod
7 soup soup NOUN 4 obj -
8 . . PUNCT 4 punct";

pub const COOKING_HU: &str = "
1 Gordon Gordon PROPN 6 nsubj
2 Ramsay Ramsay PROPN 1 flat
3 egy egy DET 5 det
4 finom finom ADJ 5 amod
5 levest leves NOUN 6 obj
6 főz főz VERB 0 root -
7 . . PUNCT 6 punct";

pub const SAURON_EN: &str = "
1 Sauron Sauron PROPN 3 nsubj
2 has have AUX 3 aux
3 regained regain VERB 0 root
4 much much ADJ 3 obj
5 of of ADP 8 case
6 his he PRON 8 nmod:poss
7 former former ADJ 8 amod
8 strength strength NOUN 4 nmod -
9 . . PUNCT 3 punct";

pub const SAURON_HU: &str = "
1 Szauron Szauron PROPN 4 nsubj
2 szinte szinte ADV 3 advmod
3 teljesen teljesen ADV 4 advmod
4 visszanyerte visszanyer VERB 0 root
5 az az DET 6 det
6 erejét erő NOUN 4 obj -
7 . . PUNCT 4 punct";

pub const HOODED_EN: &str = "
1 A a DET 3 det
2 hooded hooded ADJ 3 amod
3 figure figure NOUN 5 nsubj
4 has have AUX 5 aux
5 followed follow VERB 0 root
6 us we PRON 5 obj
7 into into ADP 9 case
8 the the DET 9 det
9 woods wood NOUN 5 obl -
10 . . PUNCT 5 punct";

pub const HOODED_HU: &str = "
1 Egy egy DET 3 det
2 csuklyás csuklyás ADJ 3 amod
3 alak alak NOUN 4 nsubj
4 követett követ VERB 0 root
5 minket mi PRON 4 obj
6 az az DET 7 det
7 erdőbe erdő NOUN 4 obl -
8 . . PUNCT 4 punct";

pub const SEEN_EN: &str = "
1 No no DET 2 det
2 one one PRON 4 nsubj
3 had have AUX 4 aux
4 seen see VERB 0 root
5 my my PRON 7 nmod:poss
6 red red ADJ 7 amod
7 bike bike NOUN 4 obj
8 since since ADP 10 case
9 yesterday yesterday NOUN 10 compound
10 evening evening NOUN 4 obl -
11 . . PUNCT 4 punct";

pub const SEEN_HU: &str = "
1 Senki senki PRON 3 nsubj
2 nem nem ADV 3 advmod
3 látta lát VERB 0 root
4 a a DET 6 det
5 piros piros ADJ 6 amod
6 biciklimet bicikli NOUN 3 obj
7 tegnap tegnap ADV 8 advmod
8 este este NOUN 3 obl
9 óta óta ADP 8 case -
10 . . PUNCT 3 punct";

pub const FIRE_EN: &str = "
1 I I PRON 2 nsubj
2 see see VERB 0 root
3 the the DET 4 det
4 fire fire NOUN 2 obj
5 in in ADP 7 case
6 her she PRON 7 nmod:poss
7 eyes eye NOUN 2 obl -
8 . . PUNCT 2 punct";

/// Hungarian drops the subject pronoun here.
pub const LATOM_HU: &str = "
1 Látom lát VERB 0 root
2 a a DET 3 det
3 tüzet tűz NOUN 1 obj
4 a a DET 5 det
5 szemében szem NOUN 1 obl -
6 . . PUNCT 1 punct";

pub const NOTHING_EN: &str = "
1 Nothing nothing PRON 4 nsubj
2 should should AUX 4 aux
3 be be AUX 4 cop
4 worth worth ADJ 0 root
5 that that PRON 4 obj -
6 . . PUNCT 4 punct";

pub const NOTHING_HU: &str = "
1 Semmi semmi PRON 3 nsubj
2 nem nem ADV 3 advmod
3 ér ér VERB 0 root
4 ennyit ennyi PRON 3 obj -
5 . . PUNCT 3 punct";

pub const SPECIMEN_EN: &str = "
1 Those that DET 3 det
2 two two NUM 3 nummod
3 specimen specimen NOUN 5 nsubj
4 are be AUX 5 cop
5 worth worth ADJ 0 root
6 millions million NOUN 5 obj
7 to to ADP 10 case
8 the the DET 10 det
9 bio-weapons bio-weapon NOUN 10 compound
10 division division NOUN 5 obl -
11 . . PUNCT 5 punct";

pub const SPECIMEN_HU: &str = "
1 Az az DET 4 det
2 a a DET 4 det
3 két két NUM 4 nummod
4 példány példány NOUN 6 nsubj
5 milliókat millió NOUN 6 obj
6 ér ér VERB 0 root
7 a a DET 10 det
8 biológiai biológiai ADJ 10 amod
9 fegyver fegyver NOUN 10 compound
10 részlegnek részleg NOUN 6 obl -
11 . . PUNCT 6 punct";

pub const EVERYBODY_EN: &str = "
1 Everybody everybody PRON 2 nsubj
2 gets get VERB 0 root
3 the the DET 5 det
4 rocket rocket NOUN 5 compound
5 ship ship NOUN 2 obj -
6 . . PUNCT 2 punct";

pub const EVERYBODY_HU: &str = "
1 Mindenki mindenki PRON 2 nsubj
2 kap kap VERB 0 root
3 rakétát rakéta NOUN 2 obj -
4 . . PUNCT 2 punct";

pub const SOMEONE_EN: &str = "
1 Someone someone PRON 3 nsubj
2 is be AUX 3 aux
3 hiding hide VERB 0 root
4 something something PRON 3 obj -
5 . . PUNCT 3 punct";

pub const SOMEONE_HU: &str = "
1 Valaki valaki PRON 2 nsubj
2 titkol titkol VERB 0 root
3 valamit valami PRON 2 obj -
4 . . PUNCT 2 punct";

/// Input pairs of the five worked swap examples, two per example.
pub const WORKED_PAIRS: [(&str, &str); 10] = [
    (CHASING_EN, CHASING_HU),
    (COOKING_EN, COOKING_HU),
    (SAURON_EN, SAURON_HU),
    (HOODED_EN, HOODED_HU),
    (SEEN_EN, SEEN_HU),
    (FIRE_EN, LATOM_HU),
    (NOTHING_EN, NOTHING_HU),
    (SPECIMEN_EN, SPECIMEN_HU),
    (EVERYBODY_EN, EVERYBODY_HU),
    (SOMEONE_EN, SOMEONE_HU),
];

pub const BEACHES_EN: &str = "
1 We we PRON 3 nsubj
2 shall shall AUX 3 aux
3 fight fight VERB 0 root
4 on on ADP 6 case
5 the the DET 6 det
6 beaches beach NOUN 3 obl
7 . . PUNCT 3 punct";
