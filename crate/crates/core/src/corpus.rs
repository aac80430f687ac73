//! Regression corpora: JSON lines of formulas with expected verdicts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decide::{self, DecideConfig, Status, Verdict};
use crate::error::{Error, Result};
use crate::formula::{FormulaR, PatternR, Sym, Variable};
use crate::morphism::{self, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub formula: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_status: Option<Status>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

/// An entry with its 1-based line number and parsed formula.
#[derive(Debug, Clone)]
pub struct ParsedEntry {
    pub line: usize,
    pub entry: CorpusEntry,
    pub formula: FormulaR,
}

/// Parse JSON lines; blank lines and lines starting with `#` are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<ParsedEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let entry: CorpusEntry =
            serde_json::from_str(trimmed).map_err(|e| Error::Corpus { line, msg: e.to_string() })?;
        let formula = entry.formula.parse().map_err(|e: Error| Error::Corpus { line, msg: e.to_string() })?;
        out.push(ParsedEntry { line, entry, formula });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusResult {
    pub line: usize,
    pub formula: String,
    pub expected_status: Option<Status>,
    pub status: Status,
    pub matches: bool,
    #[serde(skip)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub total: usize,
    pub unavoidable: usize,
    pub avoidable: usize,
    pub unknown: usize,
    /// Line numbers whose verdict differs from the expected status.
    pub mismatches: Vec<usize>,
}

impl CorpusSummary {
    pub fn of(results: &[CorpusResult]) -> CorpusSummary {
        let mut s = CorpusSummary { total: results.len(), ..CorpusSummary::default() };
        for r in results {
            match r.status {
                Status::Unavoidable => s.unavoidable += 1,
                Status::Avoidable => s.avoidable += 1,
                Status::Unknown => s.unknown += 1,
            }
            if !r.matches {
                s.mismatches.push(r.line);
            }
        }
        s
    }
}

/// Decide every entry, in parallel on `jobs` threads (all cores when 0).
/// Results keep input order.
pub fn run_corpus(entries: &[ParsedEntry], cfg: &DecideConfig, jobs: usize) -> Result<Vec<CorpusResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        entries
            .par_iter()
            .map(|p| {
                let verdict = decide::decide(&p.formula, cfg);
                CorpusResult {
                    line: p.line,
                    formula: p.entry.formula.clone(),
                    expected_status: p.entry.expected_status,
                    status: verdict.status,
                    matches: p.entry.expected_status.is_none_or(|e| e == verdict.status),
                    verdict,
                }
            })
            .collect()
    }))
}

/// Every pattern with reversal over `x, y` of length `1..=max_len`, in
/// length-then-lexicographic order over `x < x~ < y < y~`.
pub fn binary_patterns(max_len: usize) -> Vec<PatternR> {
    let symbols: Vec<Sym> = ["x", "y"]
        .iter()
        .flat_map(|v| {
            let v = Variable::new(v).expect("valid name");
            [Sym::new(v.clone(), false), Sym::new(v, true)]
        })
        .collect();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Sym>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|p| {
                symbols.iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s.clone());
                    q
                })
            })
            .collect();
        out.extend(layer.iter().map(|p| PatternR::new(p.clone()).expect("nonempty")));
    }
    out
}

/// The known classification of binary patterns with reversal: unavoidable
/// iff equivalent to a factor of `x y x` or `x y x~`. `None` if an
/// equivalence search ran out of budget.
pub fn binary_reference_unavoidable(p: &PatternR, budget: &SearchBudget) -> Option<bool> {
    let phi = p.as_formula();
    let mut references: Vec<PatternR> = Vec::new();
    for base in ["x y x", "x y x~"] {
        let base: PatternR = base.parse().expect("valid pattern");
        for i in 0..base.len() {
            for j in i + 1..=base.len() {
                references.push(base.window(i, j).expect("nonempty"));
            }
        }
    }
    let mut incomplete = false;
    for r in references {
        match morphism::equivalent(&phi, &r.as_formula(), budget) {
            Ok(true) => return Some(true),
            Ok(false) => {}
            Err(_) => incomplete = true,
        }
    }
    (!incomplete).then_some(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_run() {
        let text = r#"{"formula": "x y x~", "expected_status": "unavoidable", "tags": ["binary"]}

# comment
{"formula": "x x"}
{"formula": "x x~", "expected_status": "unavoidable"}
"#;
        let entries = parse_corpus(text).unwrap();
        assert_eq!(entries.iter().map(|e| e.line).collect::<Vec<_>>(), vec![1, 4, 5]);
        let results = run_corpus(&entries, &DecideConfig::fast(), 2).unwrap();
        let summary = CorpusSummary::of(&results);
        assert_eq!(summary.total, 3);
        assert_eq!(summary.unavoidable, 1);
        assert_eq!(summary.mismatches, vec![5]);
    }

    #[test]
    fn binary_pattern_universe() {
        let all = binary_patterns(4);
        assert_eq!(all.len(), 340);
        assert_eq!(all[0].to_string(), "x");
        assert_eq!(all[1].to_string(), "x~");
        let budget = SearchBudget::unbounded();
        assert_eq!(binary_reference_unavoidable(&"y x~ y".parse().unwrap(), &budget), Some(true));
        assert_eq!(binary_reference_unavoidable(&"x x".parse().unwrap(), &budget), Some(false));
        assert_eq!(binary_reference_unavoidable(&"x y~ x".parse().unwrap(), &budget), Some(true));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = parse_corpus("{\"formula\": \"x\"}\n{oops}\n").unwrap_err();
        assert!(matches!(err, Error::Corpus { line: 2, .. }));
        let err = parse_corpus("{\"formula\": \"x ..\"}\n").unwrap_err();
        assert!(matches!(err, Error::Corpus { line: 1, .. }));
        let err = parse_corpus("{\"formula\": \"x\", \"expected_status\": \"maybe\"}\n").unwrap_err();
        assert!(matches!(err, Error::Corpus { line: 1, .. }));
    }
}
