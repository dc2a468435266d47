use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn treeswap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treeswap")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn cache_fixtures(dir: &Path) -> PathBuf {
    let o = treeswap(&[
        "cache",
        "--src",
        &fixture("swaps.en.conllu"),
        "--tgt",
        &fixture("swaps.hu.conllu"),
        "--out",
        &path(dir, "cache"),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    dir.join("cache/cache.tsv")
}

#[test]
fn exit_codes() {
    assert_eq!(treeswap(&["--help"]).status.code(), Some(0));
    assert_eq!(treeswap(&["augment", "--help"]).status.code(), Some(0));
    assert_eq!(treeswap(&[]).status.code(), Some(1));
    assert_eq!(treeswap(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(treeswap(&["augment", "--cache", "x", "--method", "nope", "--out", "y"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let missing = treeswap(&["eligible", "--cache", &path(dir.path(), "missing.tsv"), "--out", &path(dir.path(), "o")]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing.tsv"));
}

#[test]
fn misaligned_text_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a"), "one\ntwo\nthree\n").unwrap();
    fs::write(dir.path().join("b"), "egy\nkettő\n").unwrap();
    let o = treeswap(&[
        "stats",
        "--src",
        &path(dir.path(), "a"),
        "--tgt",
        &path(dir.path(), "b"),
        "--out",
        &path(dir.path(), "s"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains('3') && err.contains('2'), "{err}");
}

#[test]
fn eligibility_of_the_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = cache_fixtures(dir.path());
    let cache = cache.to_string_lossy();
    let o = treeswap(&["eligible", "--cache", &cache, "--out", &path(dir.path(), "strict")]);
    assert_eq!(stdout(&o).trim(), "eligible 9 of 10 pairs");
    let rejections = fs::read_to_string(dir.path().join("strict/rejections.tsv")).unwrap();
    assert_eq!(rejections, "side\treason\tcount\ntgt\tmissing-subject\t1\n");
    let o = treeswap(&["eligible", "--cache", &cache, "--allow-dropped-subject", "--out", &path(dir.path(), "loose")]);
    assert_eq!(stdout(&o).trim(), "eligible 10 of 10 pairs");
    let table = fs::read_to_string(dir.path().join("loose/eligible.tsv")).unwrap();
    assert!(table.contains("same-lemma-objects:1\tsee\tlát\t1-1\t3-4\t-\t2-3\n"), "{table}");
    let manifest = fs::read_to_string(dir.path().join("loose/manifest.txt")).unwrap();
    assert!(manifest.contains("eligible=10\n"));
    assert!(manifest.lines().any(|l| l.starts_with("input.cache.sha256=") && l.len() == 19 + 64));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cache = cache_fixtures(dir.path());
    let config = dir.path().join("run.conf");
    fs::write(&config, "# shared settings\nallow-dropped-subject = true\nseed = 3\nmethod = obj\n").unwrap();
    let config = config.to_string_lossy();
    let o = treeswap(&[
        "--config",
        &config,
        "eligible",
        "--cache",
        &cache.to_string_lossy(),
        "--out",
        &path(dir.path(), "e"),
    ]);
    assert_eq!(stdout(&o).trim(), "eligible 10 of 10 pairs");
    let aug = path(dir.path(), "a");
    let o =
        treeswap(&["--config", &config, "augment", "--cache", &cache.to_string_lossy(), "--seed", "2", "--out", &aug]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = fs::read_to_string(dir.path().join("a/manifest.txt")).unwrap();
    assert!(manifest.contains("\nseed=2\n") && manifest.contains("\nmethod=obj\n"), "{manifest}");

    fs::write(dir.path().join("bad.conf"), "no-such-flag = 1\n").unwrap();
    let o = treeswap(&["--config", &path(dir.path(), "bad.conf"), "eligible", "--cache", "x", "--out", "y"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-flag"));
}

#[test]
fn augment_on_the_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = cache_fixtures(dir.path());
    let out = path(dir.path(), "aug");
    let o = treeswap(&[
        "augment",
        "--cache",
        &cache.to_string_lossy(),
        "--method",
        "obj",
        "--ratio",
        "0.4",
        "--seed",
        "2",
        "--out",
        &out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let src = fs::read_to_string(dir.path().join("aug/augmented.src")).unwrap();
    let tgt = fs::read_to_string(dir.path().join("aug/augmented.tgt")).unwrap();
    assert_eq!(src.lines().count(), 4);
    assert_eq!(tgt.lines().count(), 4);
    let train = fs::read_to_string(dir.path().join("aug/train.src")).unwrap();
    assert_eq!(train.lines().count(), 14);
    for line in src.lines() {
        assert!(train.lines().any(|l| l == line));
    }
    let provenance = fs::read_to_string(dir.path().join("aug/provenance.tsv")).unwrap();
    assert_eq!(provenance.lines().count(), 5);
    assert!(provenance.lines().skip(1).all(|l| l.starts_with("aug:") && l.ends_with("\t2")));
    let meta = fs::read_to_string(dir.path().join("aug/train.meta.tsv")).unwrap();
    assert_eq!(meta.lines().filter(|l| l.contains("\taug\tobj")).count(), 4);
}

#[test]
fn bleu_of_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("h"), "All right.\nThe black dog is chasing a delicious soup.\n").unwrap();
    let h = path(dir.path(), "h");
    let o = treeswap(&["bleu", "--hyp", &h, "--ref", &h]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("100.0"));
    assert!(text.contains("brevity_penalty\t1.000000\n"));
}

#[test]
fn synth_then_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "s");
    assert!(treeswap(&["synth", "--pairs", "12", "--docs", "3", "--seed", "1", "--out", &out]).status.success());
    let meta = fs::read_to_string(dir.path().join("s/meta.tsv")).unwrap();
    assert_eq!(meta.lines().count(), 13);
    assert_eq!(meta.lines().nth(5), Some("doc1:0\tdoc1\t_"));
    let o = treeswap(&[
        "cache",
        "--src",
        &path(dir.path(), "s/src.conllu"),
        "--tgt",
        &path(dir.path(), "s/tgt.conllu"),
        "--out",
        &path(dir.path(), "c"),
    ]);
    assert!(o.status.success());
    let o = treeswap(&["inspect", "--cache", &path(dir.path(), "c/cache.tsv"), "--pair", "doc2:1"]);
    let text = stdout(&o);
    assert!(text.starts_with("== doc2:1 (doc doc2)\n"), "{text}");
    assert!(text.contains("subject "));
    let first = fs::read_to_string(dir.path().join("s/src.txt")).unwrap();
    // synth is deterministic per seed
    let again = path(dir.path(), "t");
    assert!(treeswap(&["synth", "--pairs", "12", "--docs", "3", "--seed", "1", "--out", &again]).status.success());
    assert_eq!(fs::read_to_string(dir.path().join("t/src.txt")).unwrap(), first);
}

#[test]
fn clean_then_split() {
    let dir = tempfile::tempdir().unwrap();
    let src = "\"Rendben\"\nok\n\nEgy két három négy öt hat hét nyolc\n";
    let tgt = "All right\n\nfine\nOne\n";
    fs::write(dir.path().join("a"), src).unwrap();
    fs::write(dir.path().join("b"), tgt).unwrap();
    let o = treeswap(&[
        "clean",
        "--src",
        &path(dir.path(), "a"),
        "--tgt",
        &path(dir.path(), "b"),
        "--out",
        &path(dir.path(), "c"),
    ]);
    assert_eq!(stdout(&o).trim(), "kept 1 of 4 pairs");
    assert_eq!(fs::read_to_string(dir.path().join("c/clean.src")).unwrap(), "Rendben\n");
    let verdicts = fs::read_to_string(dir.path().join("c/verdicts.tsv")).unwrap();
    assert_eq!(verdicts.lines().count(), 5);
    assert!(verdicts.contains("doc:3\tlength-mismatch\n"), "{verdicts}");

    let lines: String = (0..20).map(|i| format!("line {i}\n")).collect();
    fs::write(dir.path().join("s"), &lines).unwrap();
    fs::write(dir.path().join("t"), &lines).unwrap();
    let o = treeswap(&[
        "split",
        "--src",
        &path(dir.path(), "s"),
        "--tgt",
        &path(dir.path(), "t"),
        "--val",
        "0.1",
        "--test",
        "3",
        "--out",
        &path(dir.path(), "p"),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let count = |f: &str| fs::read_to_string(dir.path().join("p").join(f)).unwrap().lines().count();
    assert_eq!((count("train.src"), count("val.src"), count("test.src")), (15, 2, 3));
    assert_eq!(count("val.meta.tsv"), 3);
}
