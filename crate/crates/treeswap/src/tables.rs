//! TSV renderings of tallies, statistics, sweeps, plans and reports.

use std::fmt::Write as _;

use treeswap_core::bleu::BleuReport;
use treeswap_core::eligibility::RejectionTally;
use treeswap_core::noise::FreqTable;
use treeswap_core::preprocess::{CorpusStats, Summary, UnitStats, QUANTILES};

use crate::cache::escape;

pub fn rejections(tally: &RejectionTally) -> String {
    let mut out = String::from("side\treason\tcount\n");
    for (r, n) in tally.iter() {
        let _ = writeln!(out, "{}\t{}\t{}", r.side.as_str(), r.reason, n);
    }
    out
}

pub fn freq(table: &FreqTable) -> String {
    let mut out = String::from("word\tcount\n");
    for (w, c) in table.rows() {
        let _ = writeln!(out, "{}\t{}", escape(w), c);
    }
    out
}

fn summary_row(out: &mut String, unit: &str, series: &str, s: &Summary) {
    let _ = write!(out, "{unit}\t{series}\t{}\t{}\t{}\t{:.6}\t{:.6}", s.count, s.max, s.min, s.mean, s.stdev);
    for q in s.quantiles {
        let _ = write!(out, "\t{q}");
    }
    out.push('\n');
}

pub fn stats(stats: &CorpusStats) -> String {
    let mut out = String::from("unit\tseries\tcount\tmax\tmin\tmean\tstdev");
    for q in QUANTILES {
        let _ = write!(out, "\tq{q}");
    }
    out.push('\n');
    let units: [(&str, &UnitStats); 2] = [("words", &stats.words), ("chars", &stats.chars)];
    for (unit, u) in units {
        summary_row(&mut out, unit, "src", &u.src);
        summary_row(&mut out, unit, "tgt", &u.tgt);
        summary_row(&mut out, unit, "diff", &u.diff);
        if let Some(r) = &u.ratio {
            summary_row(&mut out, unit, "ratio", r);
        }
    }
    out
}

pub fn sweep(points: &[(f64, f64)]) -> String {
    let mut out = String::from("threshold\tremaining_fraction\n");
    for (t, f) in points {
        let _ = writeln!(out, "{t}\t{f:.6}");
    }
    out
}

pub fn plan(method: &str, donors: &[(&str, &str)]) -> String {
    let mut out = String::from("method\tdonor_a\tdonor_b\n");
    for (a, b) in donors {
        let _ = writeln!(out, "{method}\t{}\t{}", escape(a), escape(b));
    }
    out
}

/// One provenance row per synthetic pair.
pub struct Provenance<'a> {
    pub pair_id: &'a str,
    pub method: &'a str,
    pub donor_a: &'a str,
    pub donor_b: &'a str,
}

pub fn provenance(rows: &[Provenance<'_>], seed: u64) -> String {
    let mut out = String::from("pair_id\tmethod\tdonor_a\tdonor_b\tseed\n");
    for r in rows {
        let _ =
            writeln!(out, "{}\t{}\t{}\t{}\t{seed}", escape(r.pair_id), r.method, escape(r.donor_a), escape(r.donor_b));
    }
    out
}

pub fn bleu(report: &BleuReport) -> String {
    let mut out = String::from("metric\tvalue\n");
    let _ = writeln!(out, "bleu\t{:.6}", report.bleu);
    let _ = writeln!(out, "bleu_x100\t{:.1}", report.bleu * 100.0);
    for (i, p) in report.precisions.iter().enumerate() {
        let _ = writeln!(out, "p{}\t{p:.6}", i + 1);
    }
    let _ = writeln!(out, "brevity_penalty\t{:.6}", report.brevity_penalty);
    let _ = writeln!(out, "hyp_length\t{}", report.hyp_length);
    let _ = writeln!(out, "ref_length\t{}", report.ref_length);
    out
}
