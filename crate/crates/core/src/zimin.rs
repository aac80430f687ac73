//! Zimin formulas with reversal `Z_{m,n}`.
//!
//! The formula is kept implicit as a slot sequence
//! `T(m,0) = X1..Xm`, `T(m,k) = T(m,k-1) yk T(m,k-1)`, where each `Xi` slot
//! stands for `xi` or `xi~` independently. Explicit fragment enumeration is
//! only offered for small cases.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::{FormulaR, PatternR, Sym, Variable};
use crate::morphism::{self, Outcome, SearchBudget, SymbolTable, SymbolicMorphism};
use crate::search::{Compiled, Slot};

/// Largest `n` accepted by [`ZiminTemplate::new`].
pub const MAX_TEMPLATE_N: usize = 20;
/// Largest fragment count [`enumerate_fragments`] will materialize.
pub const MAX_ENUMERATED_FRAGMENTS: u64 = 65536;
/// `sufficient_length` refuses exponents above this.
const MAX_POWER_EXPONENT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemplateSlot {
    /// `x_i` in either orientation (1-based).
    TwoWay(usize),
    /// `y_j`, unmirrored only (1-based).
    OneWay(usize),
}

impl fmt::Display for TemplateSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateSlot::TwoWay(i) => write!(f, "X{i}"),
            TemplateSlot::OneWay(j) => write!(f, "y{j}"),
        }
    }
}

pub fn two_way_var(i: usize) -> Variable {
    Variable::new(&format!("x{i}")).expect("valid name")
}

pub fn one_way_var(j: usize) -> Variable {
    Variable::new(&format!("y{j}")).expect("valid name")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZiminTemplate {
    m: usize,
    n: usize,
    slots: Vec<TemplateSlot>,
}

impl ZiminTemplate {
    pub fn new(m: usize, n: usize) -> Result<ZiminTemplate> {
        if n > MAX_TEMPLATE_N {
            return Err(Error::TooLarge(format!("template Z_{{{m},{n}}} with n > {MAX_TEMPLATE_N}")));
        }
        let mut slots: Vec<TemplateSlot> = (1..=m).map(TemplateSlot::TwoWay).collect();
        for k in 1..=n {
            let prev = slots.clone();
            slots.push(TemplateSlot::OneWay(k));
            slots.extend(prev);
        }
        Ok(ZiminTemplate { m, n, slots })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> &[TemplateSlot] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// `x1..xm` followed by `y1..yn`.
    pub fn variables(&self) -> Vec<Variable> {
        (1..=self.m).map(two_way_var).chain((1..=self.n).map(one_way_var)).collect()
    }

    pub fn stats(&self) -> ZiminStats {
        stats(self.m, self.n).expect("n within template guard")
    }

    /// Space-separated slots, `X1 y1 X1` for `(1, 1)`.
    pub fn render(&self) -> String {
        self.slots.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }

    fn slot_accepts(&self, slot: TemplateSlot, s: &Sym) -> bool {
        match slot {
            TemplateSlot::TwoWay(i) => s.var == two_way_var(i),
            TemplateSlot::OneWay(j) => !s.mirrored && s.var == one_way_var(j),
        }
    }

    /// Whether `u` is a factor of some fragment of `Z_{m,n}`.
    pub fn is_factor(&self, u: &PatternR) -> bool {
        let k = u.len();
        k <= self.slots.len()
            && self
                .slots
                .windows(k)
                .any(|w| w.iter().zip(u.syms()).all(|(&slot, s)| self.slot_accepts(slot, s)))
    }

    /// All fragments; refuses more than [`MAX_ENUMERATED_FRAGMENTS`].
    pub fn enumerate_fragments(&self) -> Result<FormulaR> {
        let count = self.stats().fragment_count;
        if count > BigUint::from(MAX_ENUMERATED_FRAGMENTS) {
            return Err(Error::TooLarge(format!("Z_{{{},{}}} has {count} fragments", self.m, self.n)));
        }
        if self.slots.is_empty() {
            return Ok(FormulaR::empty());
        }
        let mut acc: Vec<Vec<Sym>> = vec![Vec::new()];
        for slot in &self.slots {
            match *slot {
                TemplateSlot::TwoWay(i) => {
                    let v = two_way_var(i);
                    acc = acc
                        .into_iter()
                        .flat_map(|p| {
                            [false, true].map(|mirrored| {
                                let mut q = p.clone();
                                q.push(Sym::new(v.clone(), mirrored));
                                q
                            })
                        })
                        .collect();
                }
                TemplateSlot::OneWay(j) => {
                    let s = Sym::plain(&one_way_var(j));
                    acc.iter_mut().for_each(|p| p.push(s.clone()));
                }
            }
        }
        Ok(FormulaR::new(acc.into_iter().map(|p| PatternR::new(p).expect("nonempty"))))
    }

    /// Division of `phi` into `Z_{m,n}`. Images are bounded by the template
    /// length, so `Absent` proves that no division exists; only the step
    /// budget of `budget` applies.
    pub fn divides(&self, phi: &FormulaR, budget: &SearchBudget) -> Outcome<SymbolicMorphism> {
        if phi.is_empty() {
            return Outcome::Found(SymbolicMorphism::default());
        }
        let table = SymbolTable::new(self.variables());
        let slots = self
            .slots
            .iter()
            .map(|slot| match *slot {
                TemplateSlot::TwoWay(i) => Slot { var: table.index(&two_way_var(i)), two_way: true },
                TemplateSlot::OneWay(j) => Slot { var: table.index(&one_way_var(j)), two_way: false },
            })
            .collect();
        let target = morphism::template_target(slots);
        let problem = Compiled::new(phi);
        let full = SearchBudget::new(self.slots.len(), budget.max_steps);
        let out = morphism::divide_raw(&problem, &target, &table, &full, Vec::new());
        if let Outcome::Found(h) = &out {
            assert!(
                h.check_images(phi, |p| self.is_factor(p)),
                "template division returned an invalid morphism {h}"
            );
        }
        out
    }
}

impl fmt::Display for ZiminTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn big_number<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

/// Fragment count and common fragment length of `Z_{m,n}`. Numbers that do
/// not fit in 64 bits serialize as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZiminStats {
    #[serde(rename = "fragments", serialize_with = "big_number")]
    pub fragment_count: BigUint,
    #[serde(rename = "length", serialize_with = "big_number")]
    pub fragment_length: BigUint,
}

/// `(2^m)^(2^n)` fragments of length `(m+1)·2^n − 1`.
pub fn stats(m: usize, n: usize) -> Result<ZiminStats> {
    let two_n = BigUint::one() << n;
    let exponent = (&two_n * m)
        .to_u64()
        .filter(|&e| e <= MAX_POWER_EXPONENT * 64)
        .ok_or_else(|| Error::TooLarge(format!("fragment count of Z_{{{m},{n}}}")))?;
    Ok(ZiminStats {
        fragment_count: BigUint::one() << exponent,
        fragment_length: two_n * (m + 1) - 1u32,
    })
}

pub fn enumerate_fragments(m: usize, n: usize) -> Result<FormulaR> {
    ZiminTemplate::new(m, n)?.enumerate_fragments()
}

/// False for foreign variables, mirrored `y`s and oversized `n`.
pub fn is_zimin_factor(u: &PatternR, m: usize, n: usize) -> bool {
    ZiminTemplate::new(m, n).map(|t| t.is_factor(u)).unwrap_or(false)
}

pub fn divides_zimin(phi: &FormulaR, m: usize, n: usize, budget: &SearchBudget) -> Result<Outcome<SymbolicMorphism>> {
    Ok(ZiminTemplate::new(m, n)?.divides(phi, budget))
}

/// Length from the pigeonhole argument after which every word over `k`
/// letters has an occurrence of `Z_{m,n}` with a common fragment image:
/// `N(m,0,k) = m`, `N(m,j,k) = k^l (l+1) + l` with `l = N(m,j-1,k)`.
pub fn sufficient_length(m: usize, n: usize, k: usize) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Precondition("alphabet size must be at least 1".into()));
    }
    let k = BigUint::from(k);
    let mut l = BigUint::from(m);
    for _ in 0..n {
        let e = l
            .to_u32()
            .filter(|&e| u64::from(e) <= MAX_POWER_EXPONENT)
            .ok_or_else(|| Error::TooLarge(format!("k^{l} in sufficient_length")))?;
        l = k.pow(e) * (&l + 1u32) + &l;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn p(s: &str) -> PatternR {
        s.parse().unwrap()
    }

    fn f(s: &str) -> FormulaR {
        s.parse().unwrap()
    }

    fn num(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn stats_examples() {
        assert_eq!(stats(2, 1).unwrap(), ZiminStats { fragment_count: num(16), fragment_length: num(5) });
        assert_eq!(stats(0, 3).unwrap(), ZiminStats { fragment_count: num(1), fragment_length: num(7) });
        assert_eq!(stats(1, 0).unwrap(), ZiminStats { fragment_count: num(2), fragment_length: num(1) });
        assert_eq!(serde_json::to_string(&stats(2, 1).unwrap()).unwrap(), r#"{"fragments":16,"length":5}"#);
        let huge = serde_json::to_value(stats(3, 5).unwrap()).unwrap();
        assert_eq!(huge["fragments"], (BigUint::one() << 96u32).to_string());
    }

    #[test]
    fn template_shape() {
        let t = ZiminTemplate::new(1, 1).unwrap();
        assert_eq!(t.render(), "X1 y1 X1");
        assert_eq!(ZiminTemplate::new(2, 1).unwrap().render(), "X1 X2 y1 X1 X2");
        assert_eq!(ZiminTemplate::new(0, 0).unwrap().render(), "");
        for m in 0..4 {
            for n in 0..5 {
                let t = ZiminTemplate::new(m, n).unwrap();
                assert_eq!(BigUint::from(t.len()), t.stats().fragment_length);
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_fragments(1, 1).unwrap(), f("x1 y1 x1 . x1 y1 x1~ . x1~ y1 x1 . x1~ y1 x1~"));
        assert_eq!(enumerate_fragments(1, 0).unwrap(), f("x1 . x1~"));
        assert_eq!(enumerate_fragments(2, 0).unwrap(), f("x1 x2 . x1 x2~ . x1~ x2 . x1~ x2~"));
        assert_eq!(enumerate_fragments(0, 3).unwrap(), f("y1 y2 y1 y3 y1 y2 y1"));
        assert!(matches!(enumerate_fragments(3, 3), Err(Error::TooLarge(_))));
        assert_eq!(enumerate_fragments(4, 2).unwrap().len(), 65536);
    }

    #[test]
    fn factor_examples() {
        assert!(is_zimin_factor(&p("x1~ y1 x1"), 1, 1));
        assert!(!is_zimin_factor(&p("x1 x1"), 1, 0));
        assert!(is_zimin_factor(&p("y1 x1 y2"), 1, 2));
        assert!(!is_zimin_factor(&p("y1~"), 1, 1));
        assert!(!is_zimin_factor(&p("z"), 1, 1));
        assert!(!is_zimin_factor(&p("x1 y1 x1 y1"), 1, 1));
    }

    fn all_patterns(alphabet: &[Sym], max_len: usize) -> Vec<PatternR> {
        let mut out = Vec::new();
        let mut layer: Vec<Vec<Sym>> = vec![Vec::new()];
        for _ in 0..max_len {
            layer = layer
                .into_iter()
                .flat_map(|p| {
                    alphabet.iter().map(move |s| {
                        let mut q = p.clone();
                        q.push(s.clone());
                        q
                    })
                })
                .collect();
            out.extend(layer.iter().map(|q| PatternR::new(q.clone()).unwrap()));
        }
        out
    }

    #[test]
    fn template_agrees_with_enumeration_small() {
        for (m, n) in [(1, 0), (2, 0), (1, 1), (0, 2)] {
            let t = ZiminTemplate::new(m, n).unwrap();
            let frags = t.enumerate_fragments().unwrap();
            let mut alphabet = Vec::new();
            for v in t.variables() {
                alphabet.push(Sym::new(v.clone(), false));
                alphabet.push(Sym::new(v, true));
            }
            for u in all_patterns(&alphabet, t.len()) {
                let explicit = frags.fragments().iter().any(|fr| u.is_factor_of(fr));
                assert_eq!(t.is_factor(&u), explicit, "{u} in Z_{{{m},{n}}}");
            }
        }
    }

    #[test]
    fn divides_examples() {
        let full = SearchBudget::default();
        let h = divides_zimin(&f("x1 y1 x1~"), 1, 1, &full).unwrap().into_found().unwrap();
        assert_eq!(h, SymbolicMorphism::identity(&f("x1 y1 x1~")));
        assert!(divides_zimin(&f("x x~"), 1, 0, &full).unwrap().is_absent());

        let phi = f("x# y1 x# y2 x# y3 x# y1 x# y2 x#");
        let t = ZiminTemplate::new(1, 3).unwrap();
        let h = t.divides(&phi, &full).into_found().unwrap();
        assert!(h.check_images(&phi, |q| t.is_factor(q)));
        let listed = SymbolicMorphism(
            [("x", "x1"), ("y1", "y1"), ("y2", "y2 x1 y1"), ("y3", "y3")]
                .iter()
                .map(|(a, b)| (Variable::new(a).unwrap(), p(b)))
                .collect(),
        );
        assert!(listed.check_images(&phi, |q| t.is_factor(q)));
    }

    #[test]
    fn template_chain_divisions() {
        let budget = SearchBudget::default();
        for m in 0..=2 {
            for n in 0..=2 {
                let z = ZiminTemplate::new(m, n).unwrap();
                if m + n == 0 || z.stats().fragment_count > num(256) {
                    continue;
                }
                let frags = z.enumerate_fragments().unwrap();
                let up = ZiminTemplate::new(m, n + 1).unwrap();
                assert!(up.divides(&frags, &budget).is_found(), "Z_{m},{n} into Z_{m},{}", n + 1);
                if m >= 1 {
                    let down = ZiminTemplate::new(m - 1, n).unwrap();
                    if m - 1 + n > 0 {
                        let smaller = down.enumerate_fragments().unwrap();
                        assert!(z.divides(&smaller, &budget).is_found());
                    }
                }
            }
        }
    }

    #[test]
    fn sufficient_length_examples() {
        assert_eq!(sufficient_length(1, 0, 2).unwrap(), num(1));
        assert_eq!(sufficient_length(1, 1, 2).unwrap(), num(5));
        assert_eq!(sufficient_length(0, 1, 2).unwrap(), num(1));
        assert_eq!(sufficient_length(0, 2, 2).unwrap(), num(5));
        // 2^5 * 6 + 5
        assert_eq!(sufficient_length(1, 2, 2).unwrap(), num(197));
        assert!(sufficient_length(1, 4, 2).is_err());
        assert!(sufficient_length(1, 1, 0).is_err());
    }

    #[test]
    fn variables_are_distinct() {
        let t = ZiminTemplate::new(3, 2).unwrap();
        let set: BTreeSet<_> = t.variables().into_iter().collect();
        assert_eq!(set.len(), 5);
    }
}
