//! Classify all 340 binary patterns with reversal of length at most 4 and
//! compare with the known answer (unavoidable iff equivalent to a factor of
//! `x y x` or `x y x~`).
//!
//! `--jsonl` prints the comparison as a regression corpus instead.

use std::collections::BTreeMap;
use std::time::Instant;

use revzimin::corpus::{binary_patterns, binary_reference_unavoidable, CorpusEntry};
use revzimin::{decide, DecideConfig, SearchBudget, Status};

fn main() {
    let jsonl = std::env::args().any(|a| a == "--jsonl");
    let cfg = DecideConfig::fast();
    let start = Instant::now();
    let mut mismatches = 0;
    let mut counts = [0usize; 3];
    let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
    for p in binary_patterns(4) {
        let reference = binary_reference_unavoidable(&p, &SearchBudget::unbounded()).expect("small search");
        let expected = if reference { Status::Unavoidable } else { Status::Avoidable };
        if jsonl {
            let entry = CorpusEntry {
                formula: p.to_string(),
                expected_status: Some(expected),
                tags: vec!["binary".into(), format!("len{}", p.len())],
            };
            println!("{}", serde_json::to_string(&entry).unwrap());
            continue;
        }
        let v = decide(&p.as_formula(), &cfg);
        counts[v.status as usize] += 1;
        *kinds.entry(v.certificate.kind()).or_default() += 1;
        if v.status != expected {
            mismatches += 1;
            println!("MISMATCH {p}: decided {}, expected {expected}", v.status);
        }
    }
    if !jsonl {
        println!(
            "340 patterns: {} unavoidable, {} avoidable, {} unknown; {mismatches} mismatches in {:.2?}",
            counts[0],
            counts[1],
            counts[2],
            start.elapsed()
        );
        for (kind, count) in kinds {
            println!("  {kind:<24} {count}");
        }
    }
}
