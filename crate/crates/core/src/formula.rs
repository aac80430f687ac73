//! Patterns and formulas with reversal.
//!
//! Text grammar: fragments are separated by `.`, symbols by whitespace, and a
//! symbol is an identifier optionally followed by `~` for its mirror image
//! (`x y~ x . z`). The empty formula is written `{}`. As a convenience the
//! parser also accepts `x#`, which stands for both `x` and `x~` and expands
//! the fragment into every combination.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: &str) -> Result<Variable> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ok {
            Ok(Variable(name.into()))
        } else {
            Err(Error::InvalidVariable(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Variable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Variable, D::Error> {
        Variable::new(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// A variable or its mirror image.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym {
    pub var: Variable,
    pub mirrored: bool,
}

impl Sym {
    pub fn new(var: Variable, mirrored: bool) -> Sym {
        Sym { var, mirrored }
    }

    pub fn plain(var: &Variable) -> Sym {
        Sym::new(var.clone(), false)
    }

    pub fn mirror(&self) -> Sym {
        Sym::new(self.var.clone(), !self.mirrored)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.var, if self.mirrored { "~" } else { "" })
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A nonempty pattern with reversal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternR(Vec<Sym>);

impl PatternR {
    pub fn new(syms: Vec<Sym>) -> Result<PatternR> {
        if syms.is_empty() {
            Err(Error::EmptyPattern)
        } else {
            Ok(PatternR(syms))
        }
    }

    pub fn syms(&self) -> &[Sym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.0.iter().map(|s| s.var.clone()).collect()
    }

    pub fn has_mirrors(&self) -> bool {
        self.0.iter().any(|s| s.mirrored)
    }

    /// Erase every mirror mark.
    pub fn flatten(&self) -> PatternR {
        PatternR(self.0.iter().map(|s| Sym::new(s.var.clone(), false)).collect())
    }

    /// Reverse the sequence and toggle every mirror mark.
    pub fn d_reverse(&self) -> PatternR {
        PatternR(self.0.iter().rev().map(Sym::mirror).collect())
    }

    /// Plain sequence reversal (no mirror toggling).
    pub fn reversed(&self) -> PatternR {
        PatternR(self.0.iter().rev().cloned().collect())
    }

    /// Contiguous subpattern `[start, end)`; `None` when empty.
    pub fn window(&self, start: usize, end: usize) -> Option<PatternR> {
        (start < end).then(|| PatternR(self.0[start..end].to_vec()))
    }

    pub fn concat(&self, other: &PatternR) -> PatternR {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        PatternR(v)
    }

    pub fn is_factor_of(&self, other: &PatternR) -> bool {
        self.len() <= other.len() && other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    pub fn as_formula(&self) -> FormulaR {
        FormulaR::new([self.clone()])
    }
}

impl fmt::Display for PatternR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PatternR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for PatternR {
    type Err = Error;

    fn from_str(s: &str) -> Result<PatternR> {
        let phi: FormulaR = s.parse()?;
        match phi.fragments() {
            [p] => Ok(p.clone()),
            _ => Err(Error::Parse { pos: 0, msg: "expected a single fragment".into() }),
        }
    }
}

impl Serialize for PatternR {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PatternR {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<PatternR, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Classification of a variable within a formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarClass {
    TwoWay,
    OneWay,
    Absent,
}

/// A finite set of fragments, stored sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FormulaR(Vec<PatternR>);

impl FormulaR {
    pub fn new(fragments: impl IntoIterator<Item = PatternR>) -> FormulaR {
        let set: BTreeSet<PatternR> = fragments.into_iter().collect();
        FormulaR(set.into_iter().collect())
    }

    pub fn empty() -> FormulaR {
        FormulaR(Vec::new())
    }

    pub fn fragments(&self) -> &[PatternR] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.0.iter().flat_map(|p| p.syms().iter().map(|s| s.var.clone())).collect()
    }

    pub fn has_mirrors(&self) -> bool {
        self.0.iter().any(PatternR::has_mirrors)
    }

    pub fn max_fragment_len(&self) -> usize {
        self.0.iter().map(PatternR::len).max().unwrap_or(0)
    }

    pub fn total_len(&self) -> usize {
        self.0.iter().map(PatternR::len).sum()
    }

    pub fn flatten(&self) -> FormulaR {
        FormulaR::new(self.0.iter().map(PatternR::flatten))
    }

    /// Per-variable classification; only variables occurring in the formula
    /// are reported.
    pub fn classify_vars(&self) -> BTreeMap<Variable, VarClass> {
        let mut seen: BTreeMap<Variable, (bool, bool)> = BTreeMap::new();
        for s in self.0.iter().flat_map(|p| p.syms()) {
            let e = seen.entry(s.var.clone()).or_default();
            if s.mirrored {
                e.1 = true;
            } else {
                e.0 = true;
            }
        }
        seen.into_iter()
            .map(|(v, (plain, mirrored))| {
                let class = if plain && mirrored { VarClass::TwoWay } else { VarClass::OneWay };
                (v, class)
            })
            .collect()
    }

    /// Two-way and one-way variable counts.
    pub fn way_counts(&self) -> (usize, usize) {
        let classes = self.classify_vars();
        let two = classes.values().filter(|c| **c == VarClass::TwoWay).count();
        (two, classes.len() - two)
    }

    pub fn two_way_vars(&self) -> BTreeSet<Variable> {
        self.classify_vars()
            .into_iter()
            .filter(|(_, c)| *c == VarClass::TwoWay)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn one_way_vars(&self) -> BTreeSet<Variable> {
        self.classify_vars()
            .into_iter()
            .filter(|(_, c)| *c == VarClass::OneWay)
            .map(|(v, _)| v)
            .collect()
    }

    /// Rewrite so that every one-way variable appears unmirrored, by swapping
    /// the orientation of that variable throughout.
    pub fn normalize(&self) -> FormulaR {
        let flip: BTreeSet<Variable> = {
            let mut plain = BTreeSet::new();
            let mut mirrored = BTreeSet::new();
            for s in self.0.iter().flat_map(|p| p.syms()) {
                if s.mirrored {
                    mirrored.insert(s.var.clone());
                } else {
                    plain.insert(s.var.clone());
                }
            }
            mirrored.difference(&plain).cloned().collect()
        };
        if flip.is_empty() {
            return self.clone();
        }
        self.map_syms(|s| if flip.contains(&s.var) { s.mirror() } else { s.clone() })
    }

    /// All length-`len` factors of all fragments.
    pub fn factors_of(&self, len: usize) -> BTreeSet<PatternR> {
        let mut out = BTreeSet::new();
        if len == 0 {
            return out;
        }
        for p in &self.0 {
            for w in p.syms().windows(len) {
                out.insert(PatternR(w.to_vec()));
            }
        }
        out
    }

    /// Apply a symbol-wise rewrite to every fragment.
    pub fn map_syms(&self, f: impl Fn(&Sym) -> Sym) -> FormulaR {
        FormulaR::new(self.0.iter().map(|p| PatternR(p.syms().iter().map(&f).collect())))
    }

    /// Delete every occurrence (either orientation) of the given variables,
    /// discarding fragments that become empty.
    pub fn delete_vars(&self, vars: &BTreeSet<Variable>) -> FormulaR {
        FormulaR::new(self.0.iter().filter_map(|p| {
            let kept: Vec<Sym> = p.syms().iter().filter(|s| !vars.contains(&s.var)).cloned().collect();
            PatternR::new(kept).ok()
        }))
    }

    /// Rename variables by first occurrence (`x1`, `x2`, ...) across the
    /// canonical fragment order.
    pub fn rename_canonical(&self, prefix: &str) -> FormulaR {
        let mut names: BTreeMap<Variable, Variable> = BTreeMap::new();
        for s in self.0.iter().flat_map(|p| p.syms()) {
            let k = names.len() + 1;
            names
                .entry(s.var.clone())
                .or_insert_with(|| Variable::new(&format!("{prefix}{k}")).expect("valid name"));
        }
        self.map_syms(|s| Sym::new(names[&s.var].clone(), s.mirrored))
    }
}

impl fmt::Display for FormulaR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" . ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FormulaR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl Serialize for FormulaR {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FormulaR {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<FormulaR, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident { pos: usize, name: String, mark: Mark },
    Dot(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mark {
    None,
    Mirror,
    Both,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c == '.' {
            out.push(Token::Dot(pos));
            it.next();
        } else if c.is_ascii_alphabetic() {
            let mut name = String::new();
            while let Some(&(_, c)) = it.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    name.push(c);
                    it.next();
                } else {
                    break;
                }
            }
            let mark = match it.peek() {
                Some(&(_, '~')) => {
                    it.next();
                    Mark::Mirror
                }
                Some(&(_, '#')) => {
                    it.next();
                    Mark::Both
                }
                _ => Mark::None,
            };
            if let Some(&(p, c)) = it.peek() {
                if c == '~' || c == '#' {
                    return Err(Error::Parse { pos: p, msg: format!("unexpected {c:?}") });
                }
            }
            out.push(Token::Ident { pos, name, mark });
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

fn expand(syms: &[(Variable, Mark)]) -> Vec<PatternR> {
    let mut acc: Vec<Vec<Sym>> = vec![Vec::new()];
    for (v, mark) in syms {
        let options: &[bool] = match mark {
            Mark::None => &[false],
            Mark::Mirror => &[true],
            Mark::Both => &[false, true],
        };
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&m| {
                    let mut p = prefix.clone();
                    p.push(Sym::new(v.clone(), m));
                    p
                })
            })
            .collect();
    }
    acc.into_iter().map(PatternR).collect()
}

impl FromStr for FormulaR {
    type Err = Error;

    fn from_str(text: &str) -> Result<FormulaR> {
        let trimmed = text.trim();
        if trimmed == "{}" {
            return Ok(FormulaR::empty());
        }
        if trimmed.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty formula text (write {} for the empty formula)".into() });
        }
        let tokens = tokenize(text)?;
        let mut fragments = Vec::new();
        let mut current: Vec<(Variable, Mark)> = Vec::new();
        let mut fragment_start = 0;
        for tok in tokens.iter().chain(std::iter::once(&Token::Dot(text.len()))) {
            match tok {
                Token::Ident { pos, name, mark } => {
                    let v = Variable::new(name).map_err(|_| Error::Parse {
                        pos: *pos,
                        msg: format!("invalid identifier {name:?}"),
                    })?;
                    current.push((v, *mark));
                }
                Token::Dot(pos) => {
                    if current.is_empty() {
                        return Err(Error::Parse { pos: *pos.max(&fragment_start), msg: "empty fragment".into() });
                    }
                    fragments.extend(expand(&current));
                    current.clear();
                    fragment_start = *pos;
                }
            }
        }
        Ok(FormulaR::new(fragments))
    }
}

/// Parse formula text.
pub fn parse(text: &str) -> Result<FormulaR> {
    text.parse()
}

/// Canonical text form: fragments sorted, `{}` for the empty formula.
pub fn format(phi: &FormulaR) -> String {
    phi.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> FormulaR {
        s.parse().unwrap()
    }

    fn p(s: &str) -> PatternR {
        s.parse().unwrap()
    }

    fn v(s: &str) -> Variable {
        Variable::new(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let phi = f("x y x . y~");
        assert_eq!(phi.len(), 2);
        assert!(phi.fragments().contains(&p("x y x")));
        assert!(phi.fragments().contains(&p("y~")));
        assert_eq!(f("x").fragments(), &[p("x")]);
        assert!(matches!("x .. y".parse::<FormulaR>(), Err(Error::Parse { .. })));
        assert!(matches!("".parse::<FormulaR>(), Err(Error::Parse { .. })));
        assert!(f("{}").is_empty());
        assert!(matches!("x . y .".parse::<FormulaR>(), Err(Error::Parse { .. })));
        assert!(matches!("x ~y".parse::<FormulaR>(), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!("x y~~".parse::<FormulaR>(), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!("1x".parse::<FormulaR>(), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn parse_dots_without_spaces() {
        assert_eq!(f("x y~ x.z"), f("x y~ x . z"));
    }

    #[test]
    fn sharp_expands_both_orientations() {
        let phi = f("x# y x#");
        assert_eq!(phi, f("x y x . x y x~ . x~ y x . x~ y x~"));
        assert_eq!(f("x# y1 x# y2 x# y3 x# y1 x# y2 x#").len(), 64);
    }

    #[test]
    fn format_is_sorted_and_stable() {
        let phi = f("y~ . x y x");
        assert_eq!(format(&phi), "x y x . y~");
        assert_eq!(f(&format(&phi)), phi);
        assert_eq!(format(&FormulaR::empty()), "{}");
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(p("x y~ x").flatten(), p("x y x"));
        assert_eq!(p("x y z").flatten(), p("x y z"));
        assert_eq!(f("x~ y~ . x y").flatten(), f("x y"));
        // exact duplicates only are merged
        assert_eq!(f("x y . x~ y").len(), 2);
    }

    #[test]
    fn d_reverse_examples() {
        assert_eq!(p("x y").d_reverse(), p("y~ x~"));
        assert_eq!(p("x~").d_reverse(), p("x"));
        assert_eq!(p("x y~ z").d_reverse(), p("z~ y x~"));
    }

    #[test]
    fn classify_examples() {
        let c = f("x y x~").classify_vars();
        assert_eq!(c[&v("x")], VarClass::TwoWay);
        assert_eq!(c[&v("y")], VarClass::OneWay);
        let c = f("x y x . y~").classify_vars();
        assert_eq!(c[&v("x")], VarClass::OneWay);
        assert_eq!(c[&v("y")], VarClass::TwoWay);
        let c = f("x x~").classify_vars();
        assert_eq!(c.len(), 1);
        assert_eq!(c[&v("x")], VarClass::TwoWay);
        assert_eq!(f("x x~ y").way_counts(), (1, 1));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(f("x~ y x~").normalize(), f("x y x"));
        assert_eq!(f("x y x~").normalize(), f("x y x~"));
        assert_eq!(f("x x~ y~").normalize(), f("x x~ y"));
    }

    #[test]
    fn factors_examples() {
        let set = |xs: &[&str]| xs.iter().map(|s| p(s)).collect::<BTreeSet<_>>();
        assert_eq!(f("x y x").factors_of(2), set(&["x y", "y x"]));
        assert_eq!(f("x y~ . y z").factors_of(2), set(&["x y~", "y z"]));
        assert!(f("x").factors_of(2).is_empty());
    }

    #[test]
    fn delete_and_rename() {
        let vars: BTreeSet<Variable> = [v("y")].into();
        assert_eq!(f("x y x . y~").delete_vars(&vars), f("x x"));
        assert_eq!(f("b a b . a~").rename_canonical("v"), f("v2 v1 v2 . v1~"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        pub(crate) fn pattern_strategy(vars: usize, max_len: usize) -> impl Strategy<Value = PatternR> {
            let names = ["x", "y", "z", "w"];
            proptest::collection::vec((0..vars, any::<bool>()), 1..=max_len).prop_map(move |syms| {
                PatternR::new(
                    syms.into_iter()
                        .map(|(i, m)| Sym::new(Variable::new(names[i]).unwrap(), m))
                        .collect(),
                )
                .unwrap()
            })
        }

        fn formula_strategy() -> impl Strategy<Value = FormulaR> {
            proptest::collection::vec(pattern_strategy(3, 5), 0..4).prop_map(FormulaR::new)
        }

        proptest! {
            #[test]
            fn flatten_commutes_with_d_reverse(pat in pattern_strategy(4, 8)) {
                prop_assert_eq!(pat.d_reverse().flatten(), pat.flatten().reversed());
                prop_assert_eq!(pat.d_reverse().d_reverse(), pat);
            }

            #[test]
            fn normalize_keeps_shape(phi in formula_strategy()) {
                let n = phi.normalize();
                let lens = |f: &FormulaR| { let mut v: Vec<usize> = f.fragments().iter().map(PatternR::len).collect(); v.sort(); v };
                prop_assert_eq!(n.len(), phi.len());
                prop_assert_eq!(lens(&n), lens(&phi));
                for var in n.one_way_vars() {
                    prop_assert!(n.fragments().iter().flat_map(|p| p.syms()).any(|s| s.var == var && !s.mirrored));
                }
            }

            #[test]
            fn parse_format_roundtrip(phi in formula_strategy()) {
                let text = format(&phi);
                let back: FormulaR = text.parse().unwrap();
                prop_assert_eq!(&back, &phi);
                prop_assert_eq!(format(&back), text);
            }
        }
    }
}
