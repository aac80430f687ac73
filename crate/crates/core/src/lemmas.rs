//! Sufficient conditions for avoidability and the ω-words that witness them.
//!
//! Every check here inspects the formula directly. Witness words that must
//! be generated (power-free words, avoiders of the flattened formula) are
//! produced by the oracle and cached per process.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::classic;
use crate::decide::Certificate;
use crate::error::{Error, Result};
use crate::formula::{FormulaR, PatternR, VarClass, Variable};
use crate::morphism::SearchBudget;
use crate::omega::{Constraint, OmegaWordSpec};
use crate::oracle::{self, OracleBudget};
use crate::words::{Exponent, Word};

/// Widest cycle alphabet used by the all-two-way witness.
const MAX_CYCLE_VARS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaName {
    Flat,
    AllTwoWay,
    OneWayTwice,
    TwoWayMiddle,
}

impl LemmaName {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaName::Flat => "flat",
            LemmaName::AllTwoWay => "all_two_way",
            LemmaName::OneWayTwice => "one_way_twice",
            LemmaName::TwoWayMiddle => "two_way_middle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryName {
    /// Every variable of the flattened factor occurs at least twice.
    DoubledLetters,
    /// The factor has length at least `2^k` for `k` distinct variables.
    LengthBound,
}

/// Scale of witness construction and verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessConfig {
    /// Letters stored for generated words and checked by verification.
    pub prefix_len: usize,
    pub image_bound: usize,
    pub verify_steps: u64,
    pub generation: OracleBudget,
    /// Largest alphabet tried when searching an avoider of the flattening.
    pub max_alphabet: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            prefix_len: 300,
            image_bound: 30,
            verify_steps: 10_000_000,
            generation: OracleBudget::nodes(2_000_000),
            max_alphabet: 5,
        }
    }
}

pub fn check_doubled_pattern(p: &PatternR) -> bool {
    let mut counts: HashMap<&Variable, usize> = HashMap::new();
    for s in p.syms() {
        *counts.entry(&s.var).or_default() += 1;
    }
    counts.values().all(|&c| c >= 2)
}

pub fn check_length_bound(p: &PatternR) -> bool {
    let k = p.variables().len();
    k < usize::BITS as usize && p.len() >= 1usize << k
}

/// First factor of a fragment, shortest first, that satisfies one of the
/// two counting corollaries.
pub fn corollary(phi: &FormulaR) -> Option<Certificate> {
    let longest = phi.max_fragment_len();
    for len in 1..=longest {
        for factor in phi.factors_of(len) {
            if check_doubled_pattern(&factor) {
                return Some(Certificate::Corollary { name: CorollaryName::DoubledLetters, factor });
            }
            if check_length_bound(&factor) {
                return Some(Certificate::Corollary { name: CorollaryName::LengthBound, factor });
            }
        }
    }
    None
}

fn flat_pairs(phi: &FormulaR) -> BTreeSet<(Variable, Variable)> {
    phi.fragments()
        .iter()
        .flat_map(|p| p.syms().windows(2).map(|w| (w[0].var.clone(), w[1].var.clone())))
        .collect()
}

/// Fires when `xy`, `yz` and `xz` are flattened factors for a two-way `y`;
/// `(123)^ω` avoids the formula.
pub fn lemma_two_way_middle(phi: &FormulaR) -> Option<Certificate> {
    let pairs = flat_pairs(phi);
    for y in phi.two_way_vars() {
        for (x, _) in pairs.iter().filter(|(_, b)| *b == y) {
            for (_, z) in pairs.iter().filter(|(a, _)| *a == y) {
                if pairs.contains(&(x.clone(), z.clone())) {
                    return Some(Certificate::Lemma {
                        name: LemmaName::TwoWayMiddle,
                        note: format!("{x}{y}, {y}{z}, {x}{z} are flattened factors, {y} two-way"),
                        witness: OmegaWordSpec::cycle(3),
                    });
                }
            }
        }
    }
    None
}

/// Shortest stretch between two occurrences of `var` inside one fragment.
fn minimal_gap(phi: &FormulaR, var: &Variable) -> Option<(PatternR, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (fi, p) in phi.fragments().iter().enumerate() {
        let positions: Vec<usize> =
            p.syms().iter().enumerate().filter(|(_, s)| &s.var == var).map(|(i, _)| i).collect();
        for w in positions.windows(2) {
            let gap = w[1] - w[0] - 1;
            if best.is_none_or(|b| gap < b.0) {
                best = Some((gap, fi, w[0]));
            }
        }
    }
    best.map(|(gap, fi, start)| (phi.fragments()[fi].window(start, start + gap + 2).expect("nonempty"), gap))
}

fn inner(f: &PatternR) -> Option<PatternR> {
    f.window(1, f.len() - 1)
}

fn length_bound_on(v: PatternR) -> Certificate {
    debug_assert!(check_length_bound(&v));
    Certificate::Corollary { name: CorollaryName::LengthBound, factor: v }
}

/// Fires when every variable is two-way and some variable repeats inside a
/// fragment. With `n` variables the witness is `(1 2 .. 2^(n-1)+1)^ω`, or a
/// length-bound certificate when the repeat is too far apart.
pub fn lemma_all_two_way(phi: &FormulaR) -> Option<Certificate> {
    let classes = phi.classify_vars();
    if classes.is_empty() || classes.values().any(|c| *c != VarClass::TwoWay) {
        return None;
    }
    let n = classes.len();
    let (x, f, gap) = classes
        .keys()
        .filter_map(|x| minimal_gap(phi, x).map(|(f, gap)| (x.clone(), f, gap)))
        .min_by_key(|(_, _, gap)| *gap)?;
    let half = 1usize.checked_shl(n as u32 - 1).filter(|_| n <= MAX_CYCLE_VARS)?;
    if gap >= half {
        return Some(length_bound_on(inner(&f).expect("gap is nonempty")));
    }
    let letters = half + 1;
    Some(Certificate::Lemma {
        name: LemmaName::AllTwoWay,
        note: format!("{x} repeats in {f}; cycle over {letters} letters"),
        witness: OmegaWordSpec::cycle(letters),
    })
}

fn cache<K: std::hash::Hash + Eq + Clone, V: Clone>(
    slot: &'static OnceLock<Mutex<HashMap<K, V>>>,
    key: K,
    make: impl FnOnce() -> V,
) -> V {
    let map = slot.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("cache lock").get(&key) {
        return v.clone();
    }
    let v = make();
    map.lock().expect("cache lock").insert(key, v.clone());
    v
}

type Cache<K, V> = OnceLock<Mutex<HashMap<K, V>>>;

static POWER_FREE: Cache<(usize, Exponent, usize), Option<Word>> = OnceLock::new();
static AVOIDERS: Cache<(String, usize), Option<(usize, Word)>> = OnceLock::new();

/// A cached `alpha`-power-free word of length `len` over `q` letters.
pub fn power_free_word(q: usize, alpha: Exponent, len: usize, budget: &OracleBudget) -> Option<Word> {
    cache(&POWER_FREE, (q, alpha, len), || {
        oracle::generate_power_free(q, alpha, len, budget).ok().and_then(|r| r.into_word())
    })
}

/// A cached avoider of `phi` of length `len`, on the smallest alphabet
/// (up to `max_alphabet`) where the search succeeds.
pub fn avoider_word(phi: &FormulaR, len: usize, max_alphabet: usize, budget: &OracleBudget) -> Option<(usize, Word)> {
    let key = (phi.rename_canonical("v").to_string(), len);
    cache(&AVOIDERS, key, || {
        (2..=max_alphabet).find_map(|k| {
            oracle::search_avoiding_word(phi, k, len, budget).ok()?.into_word().map(|w| (k, w))
        })
    })
}

/// Fires when every one-way variable repeats inside some fragment. With `n`
/// variables the witness is a `(2^(n-1)+1)/2^(n-1)`-power-free word over
/// `2^(n-1)+2` letters paired with `(123)^ω`.
pub fn lemma_one_way_twice(phi: &FormulaR, cfg: &WitnessConfig) -> Option<Certificate> {
    let one_way = phi.one_way_vars();
    if one_way.is_empty() {
        return None;
    }
    let n = phi.variables().len();
    let mut gaps = Vec::new();
    for y in &one_way {
        gaps.push(minimal_gap(phi, y)?);
    }
    let half = 1usize.checked_shl(n as u32 - 1).filter(|_| n <= MAX_CYCLE_VARS)?;
    if let Some((f, _)) = gaps.iter().find(|(_, gap)| *gap >= half) {
        return Some(length_bound_on(inner(f).expect("gap is nonempty")));
    }
    let q = half + 2;
    let alpha = Exponent::new(half as u64 + 1, half as u64);
    let word = power_free_word(q, alpha, cfg.prefix_len, &cfg.generation)?;
    let names: Vec<&str> = one_way.iter().map(Variable::name).collect();
    Some(Certificate::Lemma {
        name: LemmaName::OneWayTwice,
        note: format!("one-way {} each repeat in a fragment", names.join(", ")),
        witness: OmegaWordSpec::product(
            OmegaWordSpec::Generated {
                alphabet_size: q,
                constraint: Constraint::PowerFree { exponent: alpha },
                prefix: word,
            },
            OmegaWordSpec::cycle(3),
        ),
    })
}

/// Fires when the flattening is avoidable; the witness pairs an avoider of
/// the flattening with `(123)^ω`.
pub fn lemma_flat(phi: &FormulaR, budget: &SearchBudget, cfg: &WitnessConfig) -> Option<Certificate> {
    let flat = phi.flatten();
    let verdict = classic::decide_classic(&flat, budget).ok()?;
    if verdict.unavoidable {
        return None;
    }
    let (k, word) = avoider_word(&flat, cfg.prefix_len, cfg.max_alphabet, &cfg.generation)?;
    Some(Certificate::Lemma {
        name: LemmaName::Flat,
        note: format!("flattening {flat} is avoidable"),
        witness: OmegaWordSpec::product(
            OmegaWordSpec::Generated { alphabet_size: k, constraint: Constraint::Avoiding { formula: flat }, prefix: word },
            OmegaWordSpec::cycle(3),
        ),
    })
}

/// The ω-word carried by a lemma certificate.
pub fn build_witness(cert: &Certificate) -> Result<OmegaWordSpec> {
    match cert {
        Certificate::Lemma { witness, .. } => Ok(witness.clone()),
        other => Err(Error::Precondition(format!("{} certificates carry no witness", other.kind()))),
    }
}

/// Cheapest first: corollaries, then the middle, all-two-way, one-way-twice
/// and flat lemmas.
pub fn battery(phi: &FormulaR, budget: &SearchBudget, cfg: &WitnessConfig) -> Option<Certificate> {
    corollary(phi)
        .or_else(|| lemma_two_way_middle(phi))
        .or_else(|| lemma_all_two_way(phi))
        .or_else(|| lemma_one_way_twice(phi, cfg))
        .or_else(|| lemma_flat(phi, budget, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PatternR {
        s.parse().unwrap()
    }

    fn f(s: &str) -> FormulaR {
        s.parse().unwrap()
    }

    fn lemma_of(c: Option<Certificate>) -> Option<(LemmaName, OmegaWordSpec)> {
        match c? {
            Certificate::Lemma { name, witness, .. } => Some((name, witness)),
            other => panic!("expected a lemma, got {other:?}"),
        }
    }

    #[test]
    fn corollary_checks() {
        assert!(check_doubled_pattern(&p("x y~ x y")));
        assert!(!check_doubled_pattern(&p("x y x")));
        assert!(check_doubled_pattern(&p("x x~")));
        assert!(check_length_bound(&p("x x~")));
        assert!(!check_length_bound(&p("x y x")));
        assert!(check_length_bound(&p("x y x~ y")));
        match corollary(&f("x y y~ x")) {
            Some(Certificate::Corollary { name, factor }) => {
                assert_eq!(name, CorollaryName::DoubledLetters);
                assert_eq!(factor, p("y y~"));
            }
            other => panic!("{other:?}"),
        }
        assert!(corollary(&f("x y x~")).is_none());
    }

    #[test]
    fn two_way_middle_examples() {
        let (name, w) = lemma_of(lemma_two_way_middle(&f("x y~ . y z . x z"))).unwrap();
        assert_eq!(name, LemmaName::TwoWayMiddle);
        assert_eq!(w, OmegaWordSpec::periodic("123"));
        assert!(lemma_two_way_middle(&f("x y~ . y z")).is_none());
        assert!(lemma_two_way_middle(&f("x y . y z . x z")).is_none());
    }

    #[test]
    fn all_two_way_examples() {
        let (_, w) = lemma_of(lemma_all_two_way(&f("x x~"))).unwrap();
        assert_eq!(w, OmegaWordSpec::periodic("12"));
        let (_, w) = lemma_of(lemma_all_two_way(&f("x y~ y x~"))).unwrap();
        assert_eq!(w, OmegaWordSpec::periodic("123"));
        assert!(lemma_all_two_way(&f("x y x~")).is_none());
        let (_, w) = lemma_of(lemma_all_two_way(&f("x y z~ w x . x~ . y~ . z . w~"))).unwrap();
        assert_eq!(w, OmegaWordSpec::cycle(9));
    }

    #[test]
    fn one_way_twice_examples() {
        let cfg = WitnessConfig::default();
        let (name, w) = lemma_of(lemma_one_way_twice(&f("y x y . x~"), &cfg)).unwrap();
        assert_eq!(name, LemmaName::OneWayTwice);
        match &w {
            OmegaWordSpec::DirectProduct { left, right } => {
                assert_eq!(**right, OmegaWordSpec::periodic("123"));
                match &**left {
                    OmegaWordSpec::Generated { alphabet_size, constraint, prefix } => {
                        assert_eq!(*alphabet_size, 4);
                        assert_eq!(*constraint, Constraint::PowerFree { exponent: Exponent::new(3, 2) });
                        assert_eq!(prefix.len(), 300);
                        assert!(prefix.max_exponent().unwrap() < Exponent::new(3, 2));
                    }
                    other => panic!("{other:?}"),
                }
            }
            other => panic!("{other:?}"),
        }
        assert!(lemma_one_way_twice(&f("x y x~"), &cfg).is_none());
        assert!(lemma_one_way_twice(&f("y y . x x~"), &cfg).is_some());
    }

    #[test]
    fn flat_examples() {
        let cfg = WitnessConfig { prefix_len: 60, ..WitnessConfig::default() };
        let budget = SearchBudget::default();
        let (name, w) = lemma_of(lemma_flat(&f("x y x~ y"), &budget, &cfg)).unwrap();
        assert_eq!(name, LemmaName::Flat);
        assert_eq!(w.available_len(), Some(60));
        assert!(lemma_flat(&f("x y x~"), &budget, &cfg).is_none());
        assert!(lemma_flat(&f("x x~"), &budget, &cfg).is_some());
    }

    #[test]
    fn build_witness_examples() {
        let cert = lemma_two_way_middle(&f("x y~ . y z . x z")).unwrap();
        assert_eq!(build_witness(&cert).unwrap(), OmegaWordSpec::periodic("123"));
        let cert = lemma_all_two_way(&f("x y~ y x~")).unwrap();
        assert_eq!(build_witness(&cert).unwrap(), OmegaWordSpec::periodic("123"));
        assert!(build_witness(&Certificate::Inconclusive { reason: String::new() }).is_err());
    }
}
