//! Occurrences of formulas in words and divisions between formulas.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{FormulaR, PatternR, Sym, Variable};
use crate::search::{self, Compiled, Query, Raw, SeqTarget, TemplateTarget};
use crate::words::{is_factor, Letter, Word};

/// Limits for a single search call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_image_len: usize,
    pub max_steps: u64,
}

impl SearchBudget {
    pub const DEFAULT_IMAGE_LEN: usize = 16;
    pub const DEFAULT_STEPS: u64 = 10_000_000;

    pub fn new(max_image_len: usize, max_steps: u64) -> SearchBudget {
        SearchBudget { max_image_len: max_image_len.max(1), max_steps: max_steps.max(1) }
    }

    /// No image-length cap: the engine's sound bound always applies.
    pub fn unbounded() -> SearchBudget {
        SearchBudget::new(usize::MAX, Self::DEFAULT_STEPS)
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(Self::DEFAULT_IMAGE_LEN, Self::DEFAULT_STEPS)
    }
}

/// Why a search stopped without a definite answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Incomplete {
    /// The step limit was reached.
    StepLimit,
    /// The search space was exhausted, but only up to a user image-length cap
    /// smaller than the sound bound.
    ImageBound,
}

impl fmt::Display for Incomplete {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Incomplete::StepLimit => f.write_str("step limit reached"),
            Incomplete::ImageBound => f.write_str("image length cap below the sound bound"),
        }
    }
}

/// Result of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    /// Definitely no witness exists.
    Absent,
    Incomplete(Incomplete),
}

impl<T> Outcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Outcome::Absent)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::Absent => Outcome::Absent,
            Outcome::Incomplete(i) => Outcome::Incomplete(i),
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Outcome::Found(_) => "found",
            Outcome::Absent => "absent",
            Outcome::Incomplete(Incomplete::StepLimit) => "step_limit",
            Outcome::Incomplete(Incomplete::ImageBound) => "image_bound",
        }
    }
}

/// Non-erasing morphism into concrete words, extended to mirror images by
/// word reversal.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConcreteMorphism(pub BTreeMap<Variable, Word>);

/// Non-erasing morphism into patterns with reversal, extended to mirror
/// images by d-reversal.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymbolicMorphism(pub BTreeMap<Variable, PatternR>);

impl ConcreteMorphism {
    pub fn get(&self, v: &str) -> Option<&Word> {
        self.0.iter().find(|(k, _)| k.name() == v).map(|(_, w)| w)
    }

    pub fn image_of(&self, s: &Sym) -> Result<Word> {
        let img = self.0.get(&s.var).ok_or_else(|| Error::Unassigned(s.var.to_string()))?;
        Ok(if s.mirrored { img.reverse() } else { img.clone() })
    }

    pub fn apply(&self, p: &PatternR) -> Result<Word> {
        let mut out = Vec::new();
        for s in p.syms() {
            out.extend_from_slice(self.image_of(s)?.letters());
        }
        Ok(Word::new(out))
    }

    /// `self ∘ h`: maps each variable `x` of `h` to `self(h(x))`.
    pub fn compose(&self, h: &SymbolicMorphism) -> Result<ConcreteMorphism> {
        h.0.iter()
            .map(|(v, img)| Ok((v.clone(), self.apply(img)?)))
            .collect::<Result<BTreeMap<_, _>>>()
            .map(ConcreteMorphism)
    }

    /// Coordinate projection of a morphism into a product word.
    pub fn project(&self, left: bool) -> Option<ConcreteMorphism> {
        self.0
            .iter()
            .map(|(v, w)| w.project(left).map(|p| (v.clone(), p)))
            .collect::<Option<BTreeMap<_, _>>>()
            .map(ConcreteMorphism)
    }

    /// Direct check against the definition: non-erasing and every fragment
    /// image is a factor of `w`.
    pub fn witnesses(&self, phi: &FormulaR, w: &Word) -> bool {
        phi.variables().iter().all(|v| self.0.get(v).is_some_and(|i| !i.is_empty()))
            && phi
                .fragments()
                .iter()
                .all(|p| self.apply(p).is_ok_and(|img| is_factor(&img, w)))
    }
}

impl SymbolicMorphism {
    pub fn identity(phi: &FormulaR) -> SymbolicMorphism {
        SymbolicMorphism(
            phi.variables()
                .into_iter()
                .map(|v| {
                    let p = PatternR::new(vec![Sym::plain(&v)]).expect("nonempty");
                    (v, p)
                })
                .collect(),
        )
    }

    pub fn get(&self, v: &str) -> Option<&PatternR> {
        self.0.iter().find(|(k, _)| k.name() == v).map(|(_, p)| p)
    }

    pub fn image_of(&self, s: &Sym) -> Result<PatternR> {
        let img = self.0.get(&s.var).ok_or_else(|| Error::Unassigned(s.var.to_string()))?;
        Ok(if s.mirrored { img.d_reverse() } else { img.clone() })
    }

    pub fn apply(&self, p: &PatternR) -> Result<PatternR> {
        let mut out = Vec::new();
        for s in p.syms() {
            out.extend_from_slice(self.image_of(s)?.syms());
        }
        PatternR::new(out)
    }

    /// Direct check: every fragment image is a factor of some fragment of `psi`.
    pub fn divides_into(&self, phi: &FormulaR, psi: &FormulaR) -> bool {
        self.check_images(phi, |img| psi.fragments().iter().any(|f| img.is_factor_of(f)))
    }

    pub(crate) fn check_images(&self, phi: &FormulaR, accept: impl Fn(&PatternR) -> bool) -> bool {
        phi.variables().iter().all(|v| self.0.contains_key(v))
            && phi
                .fragments()
                .iter()
                .all(|p| self.apply(p).is_ok_and(|img| accept(&img)))
    }
}

impl fmt::Display for SymbolicMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, p)| format!("{v} -> {p}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for ConcreteMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, w)| format!("{v} -> {w}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn apply_concrete(h: &ConcreteMorphism, p: &PatternR) -> Result<Word> {
    h.apply(p)
}

pub fn apply_symbolic(h: &SymbolicMorphism, p: &PatternR) -> Result<PatternR> {
    h.apply(p)
}

/// Symbols of a symbolic target, sorted so that letter order matches
/// [`Sym`] order: letter `2·i + mirrored` for the `i`-th variable.
pub(crate) struct SymbolTable {
    pub vars: Vec<Variable>,
}

impl SymbolTable {
    pub fn new(vars: impl IntoIterator<Item = Variable>) -> SymbolTable {
        let mut vars: Vec<Variable> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        SymbolTable { vars }
    }

    pub fn letter(&self, s: &Sym) -> u32 {
        let i = self.vars.binary_search(&s.var).expect("symbol in table");
        2 * i as u32 + s.mirrored as u32
    }

    pub fn index(&self, v: &Variable) -> u32 {
        self.vars.binary_search(v).expect("variable in table") as u32
    }

    pub fn encode(&self, p: &PatternR) -> Vec<u32> {
        p.syms().iter().map(|s| self.letter(s)).collect()
    }

    pub fn decode(&self, seq: &[u32]) -> PatternR {
        PatternR::new(
            seq.iter()
                .map(|&l| Sym::new(self.vars[(l >> 1) as usize].clone(), l & 1 == 1))
                .collect(),
        )
        .expect("non-erasing image")
    }
}

/// Ranked alphabet of a concrete word, so that letter order matches
/// [`Letter`] order.
pub(crate) struct WordCodec {
    alphabet: Vec<Letter>,
}

impl WordCodec {
    pub fn new(w: &Word) -> WordCodec {
        WordCodec { alphabet: w.alphabet() }
    }

    pub fn encode(&self, w: &Word) -> Vec<u32> {
        w.letters()
            .iter()
            .map(|l| self.alphabet.binary_search(l).expect("letter in alphabet") as u32)
            .collect()
    }

    pub fn decode(&self, seq: &[u32]) -> Word {
        Word::new(seq.iter().map(|&i| self.alphabet[i as usize]).collect())
    }
}

fn outcome_of<T>(raw: Raw, build: impl FnOnce(Vec<Vec<u32>>) -> T) -> Outcome<T> {
    match raw {
        Raw::Found(a) => Outcome::Found(build(a)),
        Raw::Absent => Outcome::Absent,
        Raw::StepLimit => Outcome::Incomplete(Incomplete::StepLimit),
        Raw::ImageBound => Outcome::Incomplete(Incomplete::ImageBound),
    }
}

pub(crate) struct WordSearch<'a> {
    pub anchor: Option<usize>,
    pub common_image: bool,
    pub problem: &'a Compiled,
}

pub(crate) fn occurs_with(
    phi: &FormulaR,
    w: &Word,
    budget: &SearchBudget,
    opts: WordSearch<'_>,
) -> Outcome<ConcreteMorphism> {
    let codec = WordCodec::new(w);
    let target = SeqTarget { seqs: vec![codec.encode(w)], mirror_bit: false };
    let q = Query {
        problem: opts.problem,
        max_image_len: budget.max_image_len,
        max_steps: budget.max_steps,
        anchor: opts.anchor,
        common_image: opts.common_image,
        fixed: Vec::new(),
    };
    let raw = search::solve(&target, &q);
    let out = outcome_of(raw, |a| {
        ConcreteMorphism(
            opts.problem.vars.iter().cloned().zip(a.iter().map(|s| codec.decode(s))).collect(),
        )
    });
    if let Outcome::Found(h) = &out {
        assert!(h.witnesses(phi, w), "occurrence search returned an invalid witness {h} for {phi} in {w}");
    }
    out
}

/// Search for a reversal-respecting occurrence of `phi` in `w`.
///
/// With an image-length budget of at least `|w|`, [`Outcome::Absent`] proves
/// that `w` avoids `phi`.
pub fn occurs(phi: &FormulaR, w: &Word, budget: &SearchBudget) -> Outcome<ConcreteMorphism> {
    let problem = Compiled::new(phi);
    occurs_with(phi, w, budget, WordSearch { anchor: None, common_image: false, problem: &problem })
}

/// Like [`occurs`], but every fragment must map to the same factor.
pub fn occurs_common_image(phi: &FormulaR, w: &Word, budget: &SearchBudget) -> Outcome<ConcreteMorphism> {
    let problem = Compiled::new(phi);
    let out = occurs_with(phi, w, budget, WordSearch { anchor: None, common_image: true, problem: &problem });
    if let Outcome::Found(h) = &out {
        let images: Vec<Word> = phi.fragments().iter().map(|p| h.apply(p).expect("assigned")).collect();
        assert!(images.windows(2).all(|x| x[0] == x[1]));
    }
    out
}

/// Search for a d-reversal-respecting division of `phi` into `psi`.
pub fn divides(phi: &FormulaR, psi: &FormulaR, budget: &SearchBudget) -> Outcome<SymbolicMorphism> {
    if phi.is_empty() {
        return Outcome::Found(SymbolicMorphism::default());
    }
    let table = SymbolTable::new(psi.variables());
    let target = SeqTarget {
        seqs: psi.fragments().iter().map(|p| table.encode(p)).collect(),
        mirror_bit: true,
    };
    let problem = Compiled::new(phi);
    let out = divide_raw(&problem, &target, &table, budget, Vec::new());
    if let Outcome::Found(h) = &out {
        assert!(h.divides_into(phi, psi), "division search returned an invalid morphism {h}");
    }
    out
}

pub(crate) fn divide_raw<T: search::Target>(
    problem: &Compiled,
    target: &T,
    table: &SymbolTable,
    budget: &SearchBudget,
    fixed: Vec<(usize, Vec<u32>)>,
) -> Outcome<SymbolicMorphism> {
    let q = Query {
        problem,
        max_image_len: budget.max_image_len,
        max_steps: budget.max_steps,
        anchor: None,
        common_image: false,
        fixed,
    };
    let raw = search::solve(target, &q);
    outcome_of(raw, |a| {
        SymbolicMorphism(problem.vars.iter().cloned().zip(a.iter().map(|s| table.decode(s))).collect())
    })
}

pub(crate) fn template_target(slots: Vec<search::Slot>) -> TemplateTarget {
    TemplateTarget { slots }
}

/// Mutual division. `Err` when either direction is inconclusive.
pub fn equivalent(phi: &FormulaR, psi: &FormulaR, budget: &SearchBudget) -> std::result::Result<bool, Incomplete> {
    for (a, b) in [(phi, psi), (psi, phi)] {
        match divides(a, b, budget) {
            Outcome::Found(_) => {}
            Outcome::Absent => return Ok(false),
            Outcome::Incomplete(i) => return Err(i),
        }
    }
    Ok(true)
}
