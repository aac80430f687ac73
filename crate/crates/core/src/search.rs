//! Backtracking morphism search over an abstract target.
//!
//! Formulas are compiled to fragments over variable indices; targets are
//! sequences over `u32` letters carrying an involution (`inv`) that models
//! mirror images: identity for concrete words, orientation swap for symbolic
//! targets. The image of a mirrored symbol is the `inv`-mapped reversal of the
//! variable's image, which covers both "respects reversal" and "respects
//! d-reversal".
//!
//! Variables are assigned in a fixed order and their images enumerated by
//! increasing length, then lexicographically. Every pruning rule below only
//! removes assignments that cannot extend to a solution, so the first witness
//! found is the first one in that enumeration order regardless of how
//! candidates were generated.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::{FormulaR, Variable};

pub(crate) type Seq = Vec<u32>;

pub(crate) trait Target {
    fn inv(&self, l: u32) -> u32;
    /// Longest possible factor.
    fn max_len(&self) -> usize;
    fn contains(&self, seq: &[u32]) -> bool;
    /// All `u` with `|u| = len` such that `prefix·u` is a factor.
    fn continuations(&self, prefix: &[u32], len: usize) -> BTreeSet<Seq>;
    /// All `u` with `|u| = len` such that `u·suffix` is a factor.
    fn preceders(&self, suffix: &[u32], len: usize) -> BTreeSet<Seq>;
    /// Suffix of the target of the given length; only word targets anchor.
    fn suffix(&self, _len: usize) -> Option<&[u32]> {
        None
    }
}

/// Explicit sequences: a concrete word (one sequence) or the fragments of a
/// symbolic formula.
pub(crate) struct SeqTarget {
    pub seqs: Vec<Seq>,
    pub mirror_bit: bool,
}

impl Target for SeqTarget {
    fn inv(&self, l: u32) -> u32 {
        if self.mirror_bit {
            l ^ 1
        } else {
            l
        }
    }

    fn max_len(&self) -> usize {
        self.seqs.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn contains(&self, seq: &[u32]) -> bool {
        self.seqs
            .iter()
            .any(|s| s.len() >= seq.len() && s.windows(seq.len()).any(|w| w == seq))
    }

    fn continuations(&self, prefix: &[u32], len: usize) -> BTreeSet<Seq> {
        let k = prefix.len();
        let mut out = BTreeSet::new();
        for s in &self.seqs {
            if s.len() < k + len {
                continue;
            }
            for i in 0..=s.len() - k - len {
                if &s[i..i + k] == prefix {
                    out.insert(s[i + k..i + k + len].to_vec());
                }
            }
        }
        out
    }

    fn preceders(&self, suffix: &[u32], len: usize) -> BTreeSet<Seq> {
        let k = suffix.len();
        let mut out = BTreeSet::new();
        for s in &self.seqs {
            if s.len() < k + len {
                continue;
            }
            for i in 0..=s.len() - k - len {
                if &s[i + len..i + len + k] == suffix {
                    out.insert(s[i..i + len].to_vec());
                }
            }
        }
        out
    }

    fn suffix(&self, len: usize) -> Option<&[u32]> {
        match self.seqs.as_slice() {
            [s] if len <= s.len() => Some(&s[s.len() - len..]),
            _ => None,
        }
    }
}

/// Slot of an implicit template: matches variable `var` in either
/// orientation when `two_way`, else only unmirrored.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Slot {
    pub var: u32,
    pub two_way: bool,
}

impl Slot {
    fn matches(self, l: u32) -> bool {
        l >> 1 == self.var && (self.two_way || l & 1 == 0)
    }
}

/// Implicit fragment set: every realization of a slot sequence.
pub(crate) struct TemplateTarget {
    pub slots: Vec<Slot>,
}

impl TemplateTarget {
    fn window_matches(&self, start: usize, seq: &[u32]) -> bool {
        seq.iter().zip(&self.slots[start..]).all(|(&l, &s)| s.matches(l))
    }

    fn expand_into(&self, slots: &[Slot], out: &mut BTreeSet<Seq>) {
        let mut acc: Vec<Seq> = vec![Vec::with_capacity(slots.len())];
        for s in slots {
            if s.two_way {
                let mut next = Vec::with_capacity(acc.len() * 2);
                for p in acc {
                    let mut q = p.clone();
                    q.push(2 * s.var + 1);
                    let mut p = p;
                    p.push(2 * s.var);
                    next.push(p);
                    next.push(q);
                }
                acc = next;
            } else {
                for p in &mut acc {
                    p.push(2 * s.var);
                }
            }
        }
        out.extend(acc);
    }
}

impl Target for TemplateTarget {
    fn inv(&self, l: u32) -> u32 {
        l ^ 1
    }

    fn max_len(&self) -> usize {
        self.slots.len()
    }

    fn contains(&self, seq: &[u32]) -> bool {
        seq.len() <= self.slots.len()
            && (0..=self.slots.len() - seq.len()).any(|s| self.window_matches(s, seq))
    }

    fn continuations(&self, prefix: &[u32], len: usize) -> BTreeSet<Seq> {
        let k = prefix.len();
        let mut out = BTreeSet::new();
        if self.slots.len() < k + len {
            return out;
        }
        for s in 0..=self.slots.len() - k - len {
            if self.window_matches(s, prefix) {
                self.expand_into(&self.slots[s + k..s + k + len], &mut out);
            }
        }
        out
    }

    fn preceders(&self, suffix: &[u32], len: usize) -> BTreeSet<Seq> {
        let k = suffix.len();
        let mut out = BTreeSet::new();
        if self.slots.len() < k + len {
            return out;
        }
        for s in 0..=self.slots.len() - k - len {
            if self.window_matches(s + len, suffix) {
                self.expand_into(&self.slots[s..s + len], &mut out);
            }
        }
        out
    }
}

/// A formula compiled to variable indices.
pub(crate) struct Compiled {
    pub vars: Vec<Variable>,
    pub frags: Vec<Vec<(usize, bool)>>,
}

impl Compiled {
    pub fn new(phi: &FormulaR) -> Compiled {
        let vars: Vec<Variable> = phi.variables().into_iter().collect();
        let index: BTreeMap<&Variable, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let frags = phi
            .fragments()
            .iter()
            .map(|p| p.syms().iter().map(|s| (index[&s.var], s.mirrored)).collect())
            .collect();
        Compiled { vars, frags }
    }

    pub fn index_of(&self, v: &Variable) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }
}

pub(crate) struct Query<'a> {
    pub problem: &'a Compiled,
    pub max_image_len: usize,
    pub max_steps: u64,
    /// Fragment whose image must be a suffix of the (word) target.
    pub anchor: Option<usize>,
    /// All fragment images must coincide.
    pub common_image: bool,
    pub fixed: Vec<(usize, Seq)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Raw {
    Found(Vec<Seq>),
    Absent,
    StepLimit,
    ImageBound,
}

enum Flow {
    Found,
    Dead,
    Abort,
}

struct Solver<'a, T: Target> {
    target: &'a T,
    frags: &'a [Vec<(usize, bool)>],
    occ: Vec<Vec<(usize, usize)>>,
    order: Vec<usize>,
    bounds: Vec<usize>,
    assign: Vec<Option<Seq>>,
    anchor: Option<usize>,
    common_image: bool,
    steps: u64,
    max_steps: u64,
    max_len: usize,
}

enum Source {
    Suffix(Seq),
    Before(Seq),
    After(Seq),
    AnchoredBefore(Seq),
    Any,
}

impl<T: Target> Solver<'_, T> {
    fn push_image(&self, v: usize, mirrored: bool, out: &mut Seq) {
        let img = self.assign[v].as_ref().expect("assigned");
        if mirrored {
            out.extend(img.iter().rev().map(|&l| self.target.inv(l)));
        } else {
            out.extend_from_slice(img);
        }
    }

    fn assigned(&self, f: usize, pos: usize) -> bool {
        self.assign[self.frags[f][pos].0].is_some()
    }

    fn run(&self, f: usize, pos: usize) -> (usize, usize) {
        let (mut s, mut e) = (pos, pos);
        while s > 0 && self.assigned(f, s - 1) {
            s -= 1;
        }
        while e + 1 < self.frags[f].len() && self.assigned(f, e + 1) {
            e += 1;
        }
        (s, e)
    }

    fn image(&self, f: usize, s: usize, e: usize) -> Seq {
        let mut out = Vec::new();
        for &(v, m) in &self.frags[f][s..=e] {
            self.push_image(v, m, &mut out);
        }
        out
    }

    fn is_suffix(&self, img: &[u32]) -> bool {
        self.target.suffix(img.len()).is_some_and(|s| s == img)
    }

    fn consistent(&self, v: usize) -> bool {
        let mut checked: Vec<(usize, usize)> = Vec::new();
        for &(f, pos) in &self.occ[v] {
            let frag = &self.frags[f];
            // length feasibility of the whole fragment
            let need: usize = frag
                .iter()
                .map(|&(u, _)| self.assign[u].as_ref().map_or(1, Vec::len))
                .sum();
            if need > self.max_len {
                return false;
            }
            let (s, e) = self.run(f, pos);
            if checked.contains(&(f, s)) {
                continue;
            }
            checked.push((f, s));
            let img = self.image(f, s, e);
            let ok = if self.anchor == Some(f) && e + 1 == frag.len() {
                self.is_suffix(&img)
            } else {
                self.target.contains(&img)
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn source(&self, v: usize) -> (Source, bool) {
        let mut best: Option<(usize, Source, bool)> = None;
        for &(f, pos) in &self.occ[v] {
            let frag = &self.frags[f];
            let mirrored = frag[pos].1;
            let last = frag.len() - 1;
            let anchored = self.anchor == Some(f);
            let left = (pos > 0 && self.assigned(f, pos - 1)).then(|| {
                let (s, _) = self.run(f, pos - 1);
                self.image(f, s, pos - 1)
            });
            let right = (pos < last && self.assigned(f, pos + 1)).then(|| {
                let (_, e) = self.run(f, pos + 1);
                (self.image(f, pos + 1, e), e == last)
            });
            if anchored && pos == last {
                return (Source::Suffix(left.unwrap_or_default()), mirrored);
            }
            if anchored {
                if let Some((r, true)) = right {
                    return (Source::AnchoredBefore(r), mirrored);
                }
            }
            if let Some(l) = left {
                if best.as_ref().is_none_or(|b| l.len() > b.0) {
                    best = Some((l.len(), Source::After(l), mirrored));
                }
            }
            if let Some((r, _)) = right {
                if best.as_ref().is_none_or(|b| r.len() > b.0) {
                    best = Some((r.len(), Source::Before(r), mirrored));
                }
            }
        }
        match best {
            Some((_, src, m)) => (src, m),
            None => (Source::Any, self.frags[self.occ[v][0].0][self.occ[v][0].1].1),
        }
    }

    fn candidates(&self, v: usize, len: usize) -> Vec<Seq> {
        let (src, mirrored) = self.source(v);
        let raw: BTreeSet<Seq> = match src {
            Source::Suffix(l) => match self.target.suffix(l.len() + len) {
                Some(s) if s.starts_with(&l) => [s[l.len()..].to_vec()].into(),
                _ => BTreeSet::new(),
            },
            Source::AnchoredBefore(r) => match self.target.suffix(r.len() + len) {
                Some(s) if s.ends_with(&r) => [s[..len].to_vec()].into(),
                _ => BTreeSet::new(),
            },
            Source::After(l) => self.target.continuations(&l, len),
            Source::Before(r) => self.target.preceders(&r, len),
            Source::Any => self.target.continuations(&[], len),
        };
        if mirrored {
            let mut out: Vec<Seq> = raw
                .into_iter()
                .map(|c| c.iter().rev().map(|&l| self.target.inv(l)).collect())
                .collect();
            out.sort();
            out.dedup();
            out
        } else {
            raw.into_iter().collect()
        }
    }

    fn leaf_ok(&self) -> bool {
        if !self.common_image {
            return true;
        }
        let mut first: Option<Seq> = None;
        for f in 0..self.frags.len() {
            let img = self.image(f, 0, self.frags[f].len() - 1);
            match &first {
                None => first = Some(img),
                Some(x) if *x != img => return false,
                _ => {}
            }
        }
        true
    }

    fn go(&mut self, depth: usize) -> Flow {
        if depth == self.order.len() {
            return if self.leaf_ok() { Flow::Found } else { Flow::Dead };
        }
        let v = self.order[depth];
        for len in 1..=self.bounds[v] {
            for c in self.candidates(v, len) {
                self.steps += 1;
                if self.steps > self.max_steps {
                    return Flow::Abort;
                }
                self.assign[v] = Some(c);
                if self.consistent(v) {
                    match self.go(depth + 1) {
                        Flow::Found => return Flow::Found,
                        Flow::Abort => return Flow::Abort,
                        Flow::Dead => {}
                    }
                }
                self.assign[v] = None;
            }
        }
        Flow::Dead
    }
}

/// Per-variable image-length bound implied by the target size: a variable
/// occurring `c` times in a fragment of length `k` has `c·|h(v)| + (k - c) <= max_len`.
fn sound_bounds(problem: &Compiled, max_len: usize) -> Vec<usize> {
    let mut bounds = vec![usize::MAX; problem.vars.len()];
    for frag in &problem.frags {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &(v, _) in frag {
            *counts.entry(v).or_default() += 1;
        }
        for (v, c) in counts {
            let room = max_len.saturating_sub(frag.len() - c);
            bounds[v] = bounds[v].min(room / c);
        }
    }
    bounds
}

/// Variable order: anchored fragment from its end backwards, then by first
/// occurrence in fragments taken longest first.
fn variable_order(problem: &Compiled, anchor: Option<usize>, fixed: &[bool]) -> Vec<usize> {
    let mut order = Vec::new();
    let mut seen = fixed.to_vec();
    if let Some(a) = anchor {
        for &(v, _) in problem.frags[a].iter().rev() {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
    }
    let mut by_len: Vec<usize> = (0..problem.frags.len()).collect();
    by_len.sort_by_key(|&f| std::cmp::Reverse(problem.frags[f].len()));
    for f in by_len {
        for &(v, _) in &problem.frags[f] {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
    }
    order
}

pub(crate) fn solve<T: Target>(target: &T, q: &Query<'_>) -> Raw {
    let problem = q.problem;
    let n = problem.vars.len();
    if problem.frags.is_empty() {
        return Raw::Found(Vec::new());
    }
    let max_len = target.max_len();
    let sound = sound_bounds(problem, max_len);
    let complete = sound.iter().all(|&b| b <= q.max_image_len);
    let bounds: Vec<usize> = sound.iter().map(|&b| b.min(q.max_image_len)).collect();

    let mut occ = vec![Vec::new(); n];
    for (f, frag) in problem.frags.iter().enumerate() {
        for (pos, &(v, _)) in frag.iter().enumerate() {
            occ[v].push((f, pos));
        }
    }
    let mut is_fixed = vec![false; n];
    let mut assign = vec![None; n];
    for (v, img) in &q.fixed {
        is_fixed[*v] = true;
        assign[*v] = Some(img.clone());
    }
    let order = variable_order(problem, q.anchor, &is_fixed);
    let mut solver = Solver {
        target,
        frags: &problem.frags,
        occ,
        order,
        bounds,
        assign,
        anchor: q.anchor,
        common_image: q.common_image,
        steps: 0,
        max_steps: q.max_steps,
        max_len,
    };
    for (v, _) in &q.fixed {
        if !solver.consistent(*v) {
            let raw = if complete { Raw::Absent } else { Raw::ImageBound };
            return raw;
        }
    }
    let flow = solver.go(0);
    match flow {
        Flow::Found => Raw::Found(solver.assign.into_iter().map(Option::unwrap_or_default).collect()),
        Flow::Abort => Raw::StepLimit,
        Flow::Dead if complete => Raw::Absent,
        Flow::Dead => Raw::ImageBound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_continuations_expand_two_way_slots() {
        // X0 y1 X0 with var 0 two-way, var 1 one-way
        let t = TemplateTarget {
            slots: vec![
                Slot { var: 0, two_way: true },
                Slot { var: 1, two_way: false },
                Slot { var: 0, two_way: true },
            ],
        };
        assert!(t.contains(&[1, 2, 0]));
        assert!(!t.contains(&[1, 3]));
        assert_eq!(t.continuations(&[2], 1), [vec![0], vec![1]].into());
        assert_eq!(t.preceders(&[2], 1), [vec![0], vec![1]].into());
        assert_eq!(t.continuations(&[], 3).len(), 4);
    }

    #[test]
    fn seq_target_suffix_only_for_single_sequence() {
        let w = SeqTarget { seqs: vec![vec![1, 2, 3]], mirror_bit: false };
        assert_eq!(w.suffix(2), Some(&[2u32, 3][..]));
        let f = SeqTarget { seqs: vec![vec![1], vec![2]], mirror_bit: true };
        assert_eq!(f.suffix(1), None);
        assert_eq!(f.inv(2), 3);
    }
}
