//! Brute-force ground truth: avoiding-word search, exhaustive encounter
//! checks, bounded witness verification and power-free word generation.
//!
//! [`naive_occurs`] is a deliberately plain occurrence checker that shares
//! nothing with the search engine in [`crate::morphism`]; tests use it to
//! re-verify engine results.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{FormulaR, PatternR, Sym, Variable};
use crate::morphism::{self, ConcreteMorphism, Incomplete, Outcome, SearchBudget};
use crate::omega::OmegaWordSpec;
use crate::words::{self, Exponent, Letter, Word};

/// Largest `k^L` that [`all_words_encounter`] will enumerate.
pub const MAX_ENUMERATED_WORDS: u64 = 1 << 20;

/// Limits for the backtracking word generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    /// Extension attempts before giving up.
    pub max_nodes: u64,
    /// Steps shared by all incremental occurrence checks of one search.
    pub max_steps: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_nodes: 200_000, max_steps: 100_000_000 }
    }
}

impl OracleBudget {
    pub fn nodes(max_nodes: u64) -> OracleBudget {
        OracleBudget { max_nodes, ..OracleBudget::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WordSearchOutcome {
    Found { word: Word },
    /// Every word over the alphabet was tried; none reaches the target length.
    TreeExhausted { longest: usize },
    BudgetExhausted { longest: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordSearchResult {
    #[serde(flatten)]
    pub outcome: WordSearchOutcome,
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl WordSearchResult {
    pub fn word(&self) -> Option<&Word> {
        match &self.outcome {
            WordSearchOutcome::Found { word } => Some(word),
            _ => None,
        }
    }

    pub fn into_word(self) -> Option<Word> {
        match self.outcome {
            WordSearchOutcome::Found { word } => Some(word),
            _ => None,
        }
    }

    pub fn is_tree_exhausted(&self) -> bool {
        matches!(self.outcome, WordSearchOutcome::TreeExhausted { .. })
    }

    pub fn report(&self) -> OracleReport {
        let mode = match &self.outcome {
            WordSearchOutcome::Found { word } => ReportMode::AvoiderFound { word: word.clone() },
            WordSearchOutcome::TreeExhausted { longest } => {
                ReportMode::Failed { reason: format!("tree exhausted; longest word {longest}") }
            }
            WordSearchOutcome::BudgetExhausted { longest } => {
                ReportMode::Failed { reason: format!("budget exhausted; longest word {longest}") }
            }
        };
        OracleReport { mode, nodes: self.nodes, elapsed: self.elapsed }
    }
}

enum Step {
    Accept,
    Reject,
    Abort,
}

/// Depth-first extension over `k` letters. A new letter may only be
/// introduced in order (`a` before `b` before `c`), which skips words equal
/// up to renaming letters. Candidates that keep the suffix least repetitive
/// are tried first; plain lowest-first order sinks into deep dead subtrees
/// on square-like formulas.
fn backtrack(
    k: usize,
    len: usize,
    budget: &OracleBudget,
    mut extend_ok: impl FnMut(&[Letter]) -> Step,
) -> (WordSearchOutcome, u64) {
    let alphabet: Vec<Letter> = (0..k).map(|i| Letter::glyph(words::alpha_glyph(i))).collect();
    let mut word: Vec<usize> = Vec::with_capacity(len);
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    // candidate order and next position per depth
    let mut order: Vec<Vec<usize>> = vec![candidates(&[], 0, k)];
    let mut next: Vec<usize> = vec![0];
    let mut used: Vec<usize> = vec![0];
    let mut nodes = 0u64;
    let mut longest = 0;
    loop {
        let depth = word.len();
        if depth == len {
            return (WordSearchOutcome::Found { word: Word::new(letters) }, nodes);
        }
        let Some(&i) = order[depth].get(next[depth]) else {
            if depth == 0 {
                return (WordSearchOutcome::TreeExhausted { longest }, nodes);
            }
            word.pop();
            letters.pop();
            order.pop();
            next.pop();
            used.pop();
            continue;
        };
        next[depth] += 1;
        nodes += 1;
        if nodes > budget.max_nodes {
            return (WordSearchOutcome::BudgetExhausted { longest }, nodes);
        }
        word.push(i);
        letters.push(alphabet[i]);
        match extend_ok(&letters) {
            Step::Accept => {
                longest = longest.max(word.len());
                let u = used[depth].max(i + 1);
                order.push(candidates(&word, u, k));
                next.push(0);
                used.push(u);
            }
            Step::Reject => {
                word.pop();
                letters.pop();
            }
            Step::Abort => return (WordSearchOutcome::BudgetExhausted { longest }, nodes),
        }
    }
}

fn candidates(word: &[usize], used: usize, k: usize) -> Vec<usize> {
    let mut last = vec![None; used];
    for (pos, &c) in word.iter().enumerate() {
        last[c] = Some(pos);
    }
    let mut out: Vec<usize> = (0..used.min(k)).collect();
    if used < k {
        out.push(used);
    }
    let mut scratch = word.to_vec();
    let keys: Vec<(usize, usize)> = out
        .iter()
        .map(|&c| {
            scratch.push(c);
            let e = suffix_repetition(&scratch);
            scratch.pop();
            e
        })
        .collect();
    let mut idx: Vec<usize> = (0..out.len()).collect();
    // smaller suffix repetition first, then new letter, then least recently used
    idx.sort_by(|&a, &b| {
        let ((la, pa), (lb, pb)) = (keys[a], keys[b]);
        (la * pb).cmp(&(lb * pa)).then_with(|| last.get(out[a]).copied().flatten().cmp(&last.get(out[b]).copied().flatten()))
    });
    idx.into_iter().map(|i| out[i]).collect()
}

/// Largest `(length, period)` ratio over suffixes of `w`.
fn suffix_repetition(w: &[usize]) -> (usize, usize) {
    let n = w.len();
    let mut best = (1, 1);
    for p in 1..n {
        let run = (0..n - p).take_while(|&i| w[n - 1 - i] == w[n - 1 - i - p]).count();
        if (p + run) * best.1 > best.0 * p {
            best = (p + run, p);
        }
    }
    best
}

const FINAL_CHECK_STEPS: u64 = 1_000_000;

/// A word of length `len` over `k` letters avoiding `phi`.
///
/// Each extension only looks for occurrences with some fragment image
/// ending at the new letter; the returned word is re-checked by the
/// morphism engine.
pub fn search_avoiding_word(phi: &FormulaR, k: usize, len: usize, budget: &OracleBudget) -> Result<WordSearchResult> {
    if k == 0 || len == 0 {
        return Err(Error::Precondition("alphabet size and length must be positive".into()));
    }
    let start = Instant::now();
    if phi.is_empty() {
        return Ok(WordSearchResult {
            outcome: WordSearchOutcome::TreeExhausted { longest: 0 },
            nodes: 0,
            elapsed: start.elapsed(),
        });
    }
    let mut matcher = SuffixMatcher::new(phi, budget.max_steps);
    let (outcome, nodes) = backtrack(k, len, budget, |w| match matcher.occurs_in(w) {
        Some(true) => Step::Reject,
        Some(false) => Step::Accept,
        None => Step::Abort,
    });
    if let WordSearchOutcome::Found { word } = &outcome {
        // components share no variables, so phi occurs iff every component does;
        // the engine runs on a step budget and only a definite occurrence counts
        let full = SearchBudget::new(word.len(), FINAL_CHECK_STEPS);
        let occurs = matcher.components.iter().all(|c| {
            let part = FormulaR::new(c.iter().map(|&f| phi.fragments()[f].clone()));
            morphism::occurs(&part, word, &full).is_found()
        });
        assert!(!occurs, "avoider search accepted {word} containing {phi}");
    }
    Ok(WordSearchResult { outcome, nodes, elapsed: start.elapsed() })
}

#[derive(Clone, Copy)]
enum Then {
    Rest { skip: usize, gi: usize },
    Fwd { skip: usize, gi: usize, i: usize, pos: usize },
}

/// Incremental occurrence test for depth-first word search.
///
/// Fragments sharing variables (transitively) form components, and the
/// formula occurs iff every component does. A component that is new in
/// `w` but absent from `w` minus its last letter must have some fragment
/// image ending at the last letter, so only those anchored occurrences are
/// searched. Which components already occur is remembered per prefix
/// length, so calls must follow a depth-first order: the argument minus its
/// last letter is the last word accepted at that length.
struct SuffixMatcher {
    frags: Vec<Vec<(usize, bool)>>,
    components: Vec<Vec<usize>>,
    /// fragments of the component being matched
    active: Vec<usize>,
    /// `seen[len]`: components occurring in the accepted prefix of length `len`
    seen: Vec<Vec<bool>>,
    /// variables with a single occurrence; only the length of their image matters
    singleton: Vec<bool>,
    /// bound images as `(start, end, reversed)` ranges of `w`
    images: Vec<Option<(usize, usize, bool)>>,
    scratch: Vec<Letter>,
    w: Vec<Letter>,
    steps: u64,
    max_steps: u64,
}

impl SuffixMatcher {
    fn new(phi: &FormulaR, max_steps: u64) -> Self {
        let vars: Vec<Variable> = phi.variables().into_iter().collect();
        let frags: Vec<Vec<(usize, bool)>> = phi
            .fragments()
            .iter()
            .map(|p| p.syms().iter().map(|s| (vars.binary_search(&s.var).expect("own variable"), s.mirrored)).collect())
            .collect();
        let mut components: Vec<(BTreeSet<usize>, Vec<usize>)> = Vec::new();
        for (f, syms) in frags.iter().enumerate() {
            let mut vs: BTreeSet<usize> = syms.iter().map(|&(v, _)| v).collect();
            let mut members = vec![f];
            components.retain(|(cv, cm)| {
                if cv.is_disjoint(&vs) {
                    return true;
                }
                vs.extend(cv);
                members.extend(cm);
                false
            });
            members.sort_unstable();
            components.push((vs, members));
        }
        let components: Vec<Vec<usize>> = components.into_iter().map(|(_, m)| m).collect();
        let mut count = vec![0usize; vars.len()];
        frags.iter().flatten().for_each(|&(v, _)| count[v] += 1);
        SuffixMatcher {
            singleton: count.iter().map(|&c| c == 1).collect(),
            seen: vec![vec![false; components.len()]],
            components,
            frags,
            active: Vec::new(),
            images: vec![None; vars.len()],
            scratch: Vec::new(),
            w: Vec::new(),
            steps: 0,
            max_steps: max_steps.max(1),
        }
    }

    /// Whether the formula occurs in `w`; `None` once the step budget is spent.
    fn occurs_in(&mut self, w: &[Letter]) -> Option<bool> {
        let n = w.len();
        assert!(n >= 1 && self.seen.len() >= n, "words must be fed in depth-first order");
        self.seen.truncate(n);
        let mut flags = self.seen[n - 1].clone();
        self.w.clear();
        self.w.extend_from_slice(w);
        for (c, flag) in flags.iter_mut().enumerate() {
            if !*flag {
                *flag = self.component_ends_at_last(c)?;
            }
        }
        if flags.iter().all(|&f| f) {
            return Some(true);
        }
        self.seen.push(flags);
        Some(false)
    }

    fn component_ends_at_last(&mut self, c: usize) -> Option<bool> {
        self.active = self.components[c].clone();
        let mut found = false;
        for f in self.components[c].clone() {
            found = self.back(f, self.frags[f].len(), self.w.len(), Then::Rest { skip: f, gi: 0 });
            if found || self.steps > self.max_steps {
                break;
            }
        }
        self.images.iter_mut().for_each(|i| *i = None);
        (self.steps <= self.max_steps).then_some(found)
    }

    fn image_len(&self, var: usize) -> Option<usize> {
        self.images[var].map(|(s, e, _)| e - s)
    }

    fn fits(&self, var: usize, mirrored: bool, start: usize) -> Option<bool> {
        let (s, e, rev) = self.images[var]?;
        let Some(factor) = self.w.get(start..start + e - s) else { return Some(false) };
        let img = &self.w[s..e];
        Some(if rev != mirrored { factor.iter().eq(img.iter().rev()) } else { factor == img })
    }

    fn bind(&mut self, var: usize, mirrored: bool, start: usize, end: usize) {
        self.images[var] = Some((start, end, mirrored));
    }

    /// Image of symbols `syms` into `scratch`; false if some variable is unbound.
    fn image_into(&mut self, g: usize, syms: std::ops::Range<usize>) -> bool {
        self.scratch.clear();
        for &(var, mirrored) in &self.frags[g][syms] {
            let Some((s, e, rev)) = self.images[var] else { return false };
            if rev != mirrored {
                self.scratch.extend(self.w[s..e].iter().rev());
            } else {
                self.scratch.extend(&self.w[s..e]);
            }
        }
        true
    }

    fn scratch_occurs(&mut self) -> bool {
        let n = self.scratch.len();
        self.steps += self.w.len().saturating_sub(n) as u64 + 1;
        n <= self.w.len() && self.w.windows(n).any(|f| f == self.scratch.as_slice())
    }

    /// Whether, in every active fragment but `current`, each maximal run of
    /// bound symbols maps to a factor of `w`. Checked before branching on a
    /// new variable.
    fn runs_occur(&mut self, current: usize) -> bool {
        for gi in 0..self.active.len() {
            let g = self.active[gi];
            if g == current {
                continue;
            }
            let len = self.frags[g].len();
            let bound = |m: &Self, i: usize| m.images[m.frags[g][i].0].is_some();
            let mut i = 0;
            while i < len {
                if !bound(self, i) {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < len && bound(self, i) {
                    i += 1;
                }
                let (v, mirrored) = self.frags[g][start];
                if i - start == 1 && self.images[v].is_some_and(|(_, _, rev)| rev == mirrored) {
                    continue;
                }
                self.image_into(g, start..i);
                if !self.scratch_occurs() {
                    return false;
                }
            }
        }
        true
    }

    /// Matches symbols `..i` of fragment `f` so that they end at `end`,
    /// then continues with `then`.
    fn back(&mut self, f: usize, i: usize, end: usize, then: Then) -> bool {
        self.steps += 1;
        if self.steps > self.max_steps {
            return false;
        }
        if i == 0 {
            return match then {
                Then::Rest { skip, gi } => self.rest(skip, gi),
                Then::Fwd { skip, gi, i, pos } => self.fwd(skip, gi, i, pos),
            };
        }
        let (var, mirrored) = self.frags[f][i - 1];
        if self.singleton[var] {
            if i == 1 {
                return end >= 1 && self.back(f, 0, end - 1, then);
            }
            return (1..=end.saturating_sub(i - 1)).any(|l| self.back(f, i - 1, end - l, then));
        }
        if let Some(n) = self.image_len(var) {
            return end >= n && self.fits(var, mirrored, end - n) == Some(true) && self.back(f, i - 1, end - n, then);
        }
        if !self.runs_occur(f) {
            return false;
        }
        for l in 1..=end.saturating_sub(i - 1) {
            self.bind(var, mirrored, end - l, end);
            if self.back(f, i - 1, end - l, then) {
                return true;
            }
        }
        self.images[var] = None;
        false
    }

    /// Places the active fragments from position `gi` on, other than
    /// `skip`, anywhere.
    fn rest(&mut self, skip: usize, gi: usize) -> bool {
        let Some(&g) = self.active.get(gi) else { return true };
        if g == skip {
            return self.rest(skip, gi + 1);
        }
        if self.image_into(g, 0..self.frags[g].len()) {
            return self.scratch_occurs() && self.rest(skip, gi + 1);
        }
        // start from the occurrences of an already bound symbol
        let bound = self.frags[g].iter().position(|&(v, _)| self.images[v].is_some());
        if let Some(j) = bound {
            let (var, mirrored) = self.frags[g][j];
            let n = self.image_len(var).unwrap_or(0);
            for p in 0..=self.w.len().saturating_sub(n) {
                self.steps += 1;
                if self.steps > self.max_steps {
                    return false;
                }
                if self.fits(var, mirrored, p) == Some(true)
                    && self.back(g, j, p, Then::Fwd { skip, gi, i: j + 1, pos: p + n })
                {
                    return true;
                }
            }
            return false;
        }
        if self.singleton[self.frags[g][0].0] {
            // a leading wildcard absorbs any later start
            return self.fwd(skip, gi, 0, 0);
        }
        (0..self.w.len()).any(|start| self.fwd(skip, gi, 0, start))
    }

    fn fwd(&mut self, skip: usize, gi: usize, i: usize, pos: usize) -> bool {
        self.steps += 1;
        if self.steps > self.max_steps {
            return false;
        }
        let g = self.active[gi];
        let frag_len = self.frags[g].len();
        if i == frag_len {
            return self.rest(skip, gi + 1);
        }
        let (var, mirrored) = self.frags[g][i];
        if let Some(n) = self.image_len(var) {
            return self.fits(var, mirrored, pos) == Some(true) && self.fwd(skip, gi, i + 1, pos + n);
        }
        let room = self.w.len().saturating_sub(pos + frag_len - i - 1);
        if self.singleton[var] {
            if i + 1 == frag_len {
                return room >= 1 && self.rest(skip, gi + 1);
            }
            return (1..=room).any(|l| self.fwd(skip, gi, i + 1, pos + l));
        }
        if !self.runs_occur(g) {
            return false;
        }
        for l in 1..=room {
            self.bind(var, mirrored, pos, pos + l);
            if self.fwd(skip, gi, i + 1, pos + l) {
                return true;
            }
        }
        self.images[var] = None;
        false
    }
}

/// A word of length `len` over `q` letters with every factor of exponent
/// below `alpha`.
pub fn generate_power_free(q: usize, alpha: Exponent, len: usize, budget: &OracleBudget) -> Result<WordSearchResult> {
    if q < 2 || alpha <= Exponent::from_integer(1) {
        return Err(Error::Precondition(format!("need q >= 2 and alpha > 1, got q = {q}, alpha = {alpha}")));
    }
    let start = Instant::now();
    let (outcome, nodes) = backtrack(q, len, budget, |w| {
        if words::suffix_exceeds(w, alpha) {
            Step::Reject
        } else {
            Step::Accept
        }
    });
    if let WordSearchOutcome::Found { word } = &outcome {
        if !word.is_empty() {
            assert!(word.max_exponent().expect("nonempty") < alpha, "generator produced {word}");
        }
    }
    Ok(WordSearchResult { outcome, nodes, elapsed: start.elapsed() })
}

/// Independent occurrence check: variables take distinct factors of `w` of
/// length at most `image_bound`, in order of first appearance, and every
/// fully assigned stretch of a fragment must map to a factor of `w`.
pub fn naive_occurs(phi: &FormulaR, w: &Word, image_bound: usize) -> Option<ConcreteMorphism> {
    let mut order: Vec<Variable> = Vec::new();
    for p in phi.fragments() {
        for s in p.syms() {
            if !order.contains(&s.var) {
                order.push(s.var.clone());
            }
        }
    }
    let mut factors: Vec<Word> = Vec::new();
    for l in 1..=image_bound.min(w.len()) {
        let set: BTreeSet<Word> = (0..=w.len() - l).map(|i| w.slice(i, i + l)).collect();
        factors.extend(set);
    }
    let mut h = ConcreteMorphism::default();
    naive_assign(phi, w, &order, &factors, &mut h).then_some(h)
}

fn sym_image(h: &ConcreteMorphism, s: &Sym) -> Option<Word> {
    let img = h.0.get(&s.var)?;
    Some(if s.mirrored { img.reverse() } else { img.clone() })
}

fn stretches_ok(phi: &FormulaR, w: &Word, h: &ConcreteMorphism) -> bool {
    phi.fragments().iter().all(|p: &PatternR| {
        let mut acc = Word::empty();
        for s in p.syms() {
            match sym_image(h, s) {
                Some(img) => acc = acc.concat(&img),
                None => {
                    if !acc.is_empty() && !words::is_factor(&acc, w) {
                        return false;
                    }
                    acc = Word::empty();
                }
            }
        }
        acc.is_empty() || words::is_factor(&acc, w)
    })
}

fn naive_assign(phi: &FormulaR, w: &Word, order: &[Variable], factors: &[Word], h: &mut ConcreteMorphism) -> bool {
    let Some((v, rest)) = order.split_first() else {
        return true;
    };
    for u in factors {
        h.0.insert(v.clone(), u.clone());
        if stretches_ok(phi, w, h) && naive_assign(phi, w, rest, factors, h) {
            return true;
        }
    }
    h.0.remove(v);
    false
}

/// All `k^len` words, in lexicographic order over `a, b, ...`.
pub fn all_words(k: usize, len: usize) -> Result<Vec<Word>> {
    let total = (k as u64).checked_pow(len as u32).filter(|&t| t <= MAX_ENUMERATED_WORDS);
    let Some(total) = total else {
        return Err(Error::TooLarge(format!("{k}^{len} words")));
    };
    let alphabet: Vec<Letter> = (0..k).map(|i| Letter::glyph(words::alpha_glyph(i))).collect();
    Ok((0..total)
        .map(|mut code| {
            let mut letters = vec![alphabet[0]; len];
            for slot in letters.iter_mut().rev() {
                *slot = alphabet[(code % k as u64) as usize];
                code /= k as u64;
            }
            Word::new(letters)
        })
        .collect())
}

/// Whether every word of length `len` over `k` letters contains `phi`,
/// checked with [`naive_occurs`].
pub fn all_words_encounter(phi: &FormulaR, k: usize, len: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::Precondition("alphabet size must be positive".into()));
    }
    Ok(all_words(k, len)?.iter().all(|w| naive_occurs(phi, w, len).is_some()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ReportMode {
    AvoiderFound { word: Word },
    AllEncounter { length: usize, alphabet: usize },
    WitnessOk { prefix_len: usize, image_bound: usize },
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    #[serde(flatten)]
    pub mode: ReportMode,
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl OracleReport {
    pub fn is_ok(&self) -> bool {
        !matches!(self.mode, ReportMode::Failed { .. })
    }
}

/// Bounded sanity check of an ω-word witness: no occurrence of `phi` in the
/// first `prefix_len` letters with images of length at most `image_bound`.
/// This is not a proof that the infinite word avoids `phi`.
pub fn verify_witness_prefix(
    spec: &OmegaWordSpec,
    phi: &FormulaR,
    prefix_len: usize,
    image_bound: usize,
    max_steps: u64,
) -> Result<OracleReport> {
    let start = Instant::now();
    let prefix = spec.materialize(prefix_len)?;
    let budget = SearchBudget::new(image_bound, max_steps);
    let mode = match morphism::occurs(phi, &prefix, &budget) {
        Outcome::Found(h) => ReportMode::Failed { reason: format!("occurrence {h}") },
        Outcome::Absent | Outcome::Incomplete(Incomplete::ImageBound) => {
            ReportMode::WitnessOk { prefix_len, image_bound }
        }
        Outcome::Incomplete(Incomplete::StepLimit) => {
            ReportMode::Failed { reason: format!("step limit {max_steps} reached") }
        }
    };
    Ok(OracleReport { mode, nodes: 0, elapsed: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> FormulaR {
        s.parse().unwrap()
    }

    fn square_free(w: &Word) -> bool {
        (0..w.len()).all(|i| (1..=(w.len() - i) / 2).all(|p| w.slice(i, i + p) != w.slice(i + p, i + 2 * p)))
    }

    #[test]
    fn avoider_examples() {
        let r = search_avoiding_word(&f("x x"), 3, 30, &OracleBudget::default()).unwrap();
        let w = r.word().unwrap();
        assert_eq!(w.len(), 30);
        assert!(square_free(w));
        assert!(naive_occurs(&f("x x"), w, 30).is_none());

        let r = search_avoiding_word(&f("x x~"), 3, 30, &OracleBudget::default()).unwrap();
        assert!(naive_occurs(&f("x x~"), r.word().unwrap(), 30).is_none());

        let r = search_avoiding_word(&f("x y x~"), 2, 5, &OracleBudget::default()).unwrap();
        assert!(r.is_tree_exhausted(), "{:?}", r.outcome);

        let r = search_avoiding_word(&f("x x"), 3, 400, &OracleBudget::nodes(50)).unwrap();
        assert!(matches!(r.outcome, WordSearchOutcome::BudgetExhausted { .. }));
        assert!(search_avoiding_word(&f("x"), 0, 3, &OracleBudget::default()).is_err());
    }

    #[test]
    fn encounter_examples() {
        let z11 = f("x y x . x y x~ . x~ y x . x~ y x~");
        assert!(all_words_encounter(&z11, 2, 5).unwrap());
        assert!(!all_words_encounter(&f("x x"), 2, 3).unwrap());
        assert!(naive_occurs(&f("x x"), &Word::from("aba"), 3).is_none());
        assert!(all_words_encounter(&f("x"), 2, 1).unwrap());
        assert!(matches!(all_words_encounter(&f("x"), 2, 21), Err(Error::TooLarge(_))));
    }

    #[test]
    fn power_free_examples() {
        let two = Exponent::from_integer(2);
        let r = generate_power_free(3, two, 100, &OracleBudget::default()).unwrap();
        let w = r.word().unwrap();
        assert!(square_free(w));
        assert!(w.max_exponent().unwrap() < two);

        let r = generate_power_free(4, Exponent::new(3, 2), 200, &OracleBudget::default()).unwrap();
        assert!(r.word().unwrap().max_exponent().unwrap() < Exponent::new(3, 2));

        let r = generate_power_free(2, Exponent::new(3, 2), 10, &OracleBudget::default()).unwrap();
        assert!(r.is_tree_exhausted());
        assert!(generate_power_free(1, two, 5, &OracleBudget::default()).is_err());
        assert!(generate_power_free(3, Exponent::from_integer(1), 5, &OracleBudget::default()).is_err());
    }

    #[test]
    fn witness_examples() {
        let r = verify_witness_prefix(&OmegaWordSpec::cycle(3), &f("x y~ . y z . x z"), 300, 30, 10_000_000).unwrap();
        assert_eq!(r.mode, ReportMode::WitnessOk { prefix_len: 300, image_bound: 30 });
        let r = verify_witness_prefix(&OmegaWordSpec::cycle(2), &f("x x~"), 300, 30, 10_000_000).unwrap();
        assert!(r.is_ok());
        let r = verify_witness_prefix(&OmegaWordSpec::periodic("1"), &f("x x"), 10, 5, 10_000_000).unwrap();
        assert!(!r.is_ok());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["mode"], "failed");
    }

    #[test]
    fn naive_matches_engine_on_small_words() {
        let formulas = ["x x", "x x~", "x y x", "x y x~ . y~", "x y . y x", "x y y~ x"];
        for text in formulas {
            let phi = f(text);
            for len in 1..=7 {
                for w in all_words(2, len).unwrap() {
                    let engine = morphism::occurs(&phi, &w, &SearchBudget::unbounded()).is_found();
                    let naive = naive_occurs(&phi, &w, len);
                    if let Some(h) = &naive {
                        assert!(h.witnesses(&phi, &w));
                    }
                    assert_eq!(engine, naive.is_some(), "{phi} in {w}");
                }
            }
        }
    }

    #[test]
    fn suffix_matcher_follows_the_engine() {
        fn walk(m: &mut SuffixMatcher, phi: &FormulaR, w: &mut Vec<Letter>, alphabet: &[Letter], depth: usize) {
            for &a in alphabet {
                w.push(a);
                let word = Word::new(w.clone());
                let engine = morphism::occurs(phi, &word, &SearchBudget::unbounded()).is_found();
                assert_eq!(m.occurs_in(w), Some(engine), "{phi} in {word}");
                if !engine && depth > 1 {
                    walk(m, phi, w, alphabet, depth - 1);
                }
                w.pop();
            }
        }
        let alphabet: Vec<Letter> = "abc".chars().map(Letter::glyph).collect();
        let formulas = [
            "x x", "x x~", "x y x", "x y x~ . y~", "x y . y x", "x y y~ x", "x y z . z~ x", "x x . z y", "x y x . z~ z", "y x . z x~ x",
            "x y z x . y", "x y . z x~ z", "x y~ z . z y x~ y",
        ];
        for text in formulas {
            let phi = f(text);
            let mut m = SuffixMatcher::new(&phi, u64::MAX);
            walk(&mut m, &phi, &mut Vec::new(), &alphabet, 7);
        }
    }
}
