//! Concrete finite words over small alphabets.
//!
//! Letters are interned integers. Plain letters are Unicode glyphs; letters of
//! a direct-product alphabet are interned pairs and display as `a|1`. Inside a
//! word, pair letters are written in parentheses, e.g. `(a|1)(b|2)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact exponent of a repetition, `|factor| / period`.
pub type Exponent = Ratio<u64>;

const PAIR_BASE: u32 = 0x0011_0000;

#[derive(Default)]
struct PairTable {
    pairs: Vec<(Letter, Letter)>,
    index: HashMap<(Letter, Letter), u32>,
}

fn pair_table() -> &'static RwLock<PairTable> {
    static TABLE: OnceLock<RwLock<PairTable>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

/// A letter: either a single glyph or an interned pair of letters.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(u32);

impl Letter {
    pub fn glyph(c: char) -> Letter {
        Letter(c as u32)
    }

    pub fn pair(left: Letter, right: Letter) -> Letter {
        let key = (left, right);
        if let Some(&id) = pair_table().read().unwrap().index.get(&key) {
            return Letter(PAIR_BASE + id);
        }
        let mut table = pair_table().write().unwrap();
        if let Some(&id) = table.index.get(&key) {
            return Letter(PAIR_BASE + id);
        }
        let id = table.pairs.len() as u32;
        table.pairs.push(key);
        table.index.insert(key, id);
        Letter(PAIR_BASE + id)
    }

    /// Raw interned id. Stable within a process only.
    pub fn id(self) -> u32 {
        self.0
    }

    pub fn as_char(self) -> Option<char> {
        if self.0 < PAIR_BASE {
            char::from_u32(self.0)
        } else {
            None
        }
    }

    pub fn components(self) -> Option<(Letter, Letter)> {
        if self.0 < PAIR_BASE {
            None
        } else {
            Some(pair_table().read().unwrap().pairs[(self.0 - PAIR_BASE) as usize])
        }
    }

    fn fmt_nested(self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.as_char().is_some() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

// Structural order so that sorting never depends on interning order.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        match (self.components(), other.components()) {
            (None, None) => self.0.cmp(&other.0),
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.components() {
            None => write!(f, "{}", self.as_char().unwrap_or('\u{fffd}')),
            Some((a, b)) => {
                a.fmt_nested(f)?;
                f.write_str("|")?;
                b.fmt_nested(f)
            }
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Glyphs used for numbered alphabets: `1..9`, then `a..z`, then `A..Z`.
pub fn numbered_glyph(i: usize) -> char {
    const GLYPHS: &str = "123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    GLYPHS
        .chars()
        .nth(i)
        .unwrap_or_else(|| char::from_u32(0x100 + i as u32).unwrap())
}

/// Glyphs used for oracle alphabets: `a..z`, then numbered glyphs.
pub fn alpha_glyph(i: usize) -> char {
    if i < 26 {
        (b'a' + i as u8) as char
    } else {
        numbered_glyph(i - 26 + 9)
    }
}

/// A finite word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l)
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.0.pop()
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Whether `self` is a factor of `w`.
    pub fn is_factor_of(&self, w: &Word) -> bool {
        is_factor(self, w)
    }

    /// True when every letter is a plain glyph.
    pub fn is_plain(&self) -> bool {
        self.0.iter().all(|l| l.as_char().is_some())
    }

    /// Distinct letters in sorted order.
    pub fn alphabet(&self) -> Vec<Letter> {
        let set: BTreeSet<Letter> = self.0.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Left or right coordinate of a product word; `None` if some letter is
    /// not a pair.
    pub fn project(&self, left: bool) -> Option<Word> {
        self.0
            .iter()
            .map(|l| l.components().map(|(a, b)| if left { a } else { b }))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    /// Maximal exponent over all factors. See [`max_exponent`].
    pub fn max_exponent(&self) -> Result<Exponent> {
        max_exponent(self)
    }

    /// JSON-friendly string list: one entry per letter, pair letters as `a|1`.
    pub fn letter_strings(&self) -> Vec<String> {
        self.0.iter().map(|l| l.to_string()).collect()
    }
}

impl From<&str> for Word {
    /// Plain glyph conversion; use [`str::parse`] to accept pair notation.
    fn from(s: &str) -> Word {
        Word(s.chars().map(Letter::glyph).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            l.fmt_nested(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

struct LetterParser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'a str,
}

impl LetterParser<'_> {
    fn err(&self, msg: &str) -> Error {
        let pos = self.chars.get(self.at).map_or(self.src.len(), |c| c.0);
        Error::Parse { pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|c| c.1)
    }

    // atom := glyph | '(' letter ')'
    fn atom(&mut self) -> Result<Letter> {
        match self.peek() {
            None => Err(self.err("unexpected end of word")),
            Some('(') => {
                self.at += 1;
                let l = self.letter()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.at += 1;
                Ok(l)
            }
            Some(c) if c == ')' || c == '|' => Err(self.err("unexpected delimiter")),
            Some(c) => {
                self.at += 1;
                Ok(Letter::glyph(c))
            }
        }
    }

    // letter := atom ('|' atom)?
    fn letter(&mut self) -> Result<Letter> {
        let left = self.atom()?;
        if self.peek() == Some('|') {
            self.at += 1;
            let right = self.atom()?;
            Ok(Letter::pair(left, right))
        } else {
            Ok(left)
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses plain glyphs and parenthesised pairs, e.g. `ab(a|1)`.
    fn from_str(s: &str) -> Result<Word> {
        let mut p = LetterParser { chars: s.char_indices().collect(), at: 0, src: s };
        let mut letters = Vec::new();
        while p.peek().is_some() {
            letters.push(p.atom()?);
        }
        Ok(Word(letters))
    }
}

/// Parses a single letter in `a` or `a|1` notation.
pub fn parse_letter(s: &str) -> Result<Letter> {
    let mut p = LetterParser { chars: s.char_indices().collect(), at: 0, src: s };
    let l = p.letter()?;
    if p.peek().is_some() {
        return Err(p.err("trailing characters after letter"));
    }
    Ok(l)
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_plain() {
            s.serialize_str(&self.to_string())
        } else {
            self.letter_strings().serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Letters(Vec<String>),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Repr::Letters(ls) => ls
                .iter()
                .map(|l| parse_letter(l))
                .collect::<Result<Vec<_>>>()
                .map(Word)
                .map_err(serde::de::Error::custom),
        }
    }
}

pub fn reverse(w: &Word) -> Word {
    w.reverse()
}

/// True iff `w = x·u·y` for some words `x`, `y`.
pub fn is_factor(u: &Word, w: &Word) -> bool {
    u.is_empty() || (u.len() <= w.len() && w.0.windows(u.len()).any(|x| x == u.0.as_slice()))
}

/// Position-wise pairing of two equal-length words.
pub fn direct_product(v: &Word, w: &Word) -> Result<Word> {
    if v.len() != w.len() {
        return Err(Error::LengthMismatch { left: v.len(), right: w.len() });
    }
    Ok(Word(v.0.iter().zip(&w.0).map(|(&a, &b)| Letter::pair(a, b)).collect()))
}

/// Prefix of length `len` of `period` repeated forever.
pub fn periodic_prefix(period: &Word, len: usize) -> Result<Word> {
    if period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    Ok(Word(period.0.iter().copied().cycle().take(len).collect()))
}

/// Largest `|f| / p` over factors `f` of `w` and periods `p` of `f`.
///
/// For each period `p` a single scan finds the maximal runs of positions with
/// `w[j] = w[j - p]`; a run of length `r` is a factor of length `r + p` with
/// period `p`.
pub fn max_exponent(w: &Word) -> Result<Exponent> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = &w.0;
    let n = s.len();
    let mut best = Exponent::from_integer(1);
    for p in 1..n {
        let mut run = 0usize;
        for j in p..n {
            if s[j] == s[j - p] {
                run += 1;
                let e = Exponent::new((run + p) as u64, p as u64);
                if e > best {
                    best = e;
                }
            } else {
                run = 0;
            }
        }
    }
    Ok(best)
}

/// Exponent of the most repetitive suffix of `s`, used for incremental checks.
pub(crate) fn suffix_exceeds(s: &[Letter], alpha: Exponent) -> bool {
    let n = s.len();
    for p in 1..n {
        let mut run = 0usize;
        while run + p < n && s[n - 1 - run] == s[n - 1 - run - p] {
            run += 1;
        }
        if run == 0 {
            continue;
        }
        // (run + p) / p >= alpha
        if ((run + p) as u64) * alpha.denom() >= alpha.numer() * p as u64 {
            return true;
        }
    }
    false
}

/// Factors `u` of `w` with `|u| <= max_len` whose reversal also occurs in `w`.
pub fn reversible_factors(w: &Word, max_len: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let n = w.len();
    for len in 1..=max_len.min(n) {
        let factors: BTreeSet<&[Letter]> = w.0.windows(len).collect();
        for f in &factors {
            let rev: Vec<Letter> = f.iter().rev().copied().collect();
            if factors.contains(rev.as_slice()) {
                out.insert(Word(f.to_vec()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn naive_max_exponent(w: &Word) -> Exponent {
        let s = w.letters();
        let mut best = Exponent::from_integer(1);
        for i in 0..s.len() {
            for j in i + 1..=s.len() {
                let f = &s[i..j];
                for p in 1..=f.len() {
                    if (p..f.len()).all(|k| f[k] == f[k - p]) {
                        let e = Exponent::new(f.len() as u64, p as u64);
                        if e > best {
                            best = e;
                        }
                        break;
                    }
                }
            }
        }
        best
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(w("abc").reverse(), w("cba"));
        assert_eq!(w("").reverse(), w(""));
        assert_eq!(w("abba").reverse(), w("abba"));
    }

    #[test]
    fn factor_examples() {
        assert!(is_factor(&w("ba"), &w("abab")));
        assert!(is_factor(&w(""), &w("abc")));
        assert!(!is_factor(&w("aa"), &w("ababab")));
    }

    #[test]
    fn direct_product_examples() {
        let p = direct_product(&w("ab"), &w("12")).unwrap();
        assert_eq!(p.to_string(), "(a|1)(b|2)");
        assert_eq!(p.letter_strings(), vec!["a|1", "b|2"]);
        assert!(direct_product(&w(""), &w("")).unwrap().is_empty());
        let q = direct_product(&w("aab"), &w("123")).unwrap();
        assert_eq!(q.max_exponent().unwrap(), Exponent::from_integer(1));
        assert_eq!(w("aab").max_exponent().unwrap(), Exponent::from_integer(2));
        assert_eq!(
            direct_product(&w("ab"), &w("1")),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        );
        assert_eq!(q.project(true).unwrap(), w("aab"));
        assert_eq!(q.project(false).unwrap(), w("123"));
        assert_eq!(w("ab").project(true), None);
    }

    #[test]
    fn product_word_parse_roundtrip() {
        let p = direct_product(&w("ab"), &w("12")).unwrap();
        assert_eq!(w(&p.to_string()), p);
        let nested = direct_product(&p, &w("xy")).unwrap();
        assert_eq!(w(&nested.to_string()), nested);
        assert!("(a|".parse::<Word>().is_err());
    }

    #[test]
    fn periodic_prefix_examples() {
        assert_eq!(periodic_prefix(&w("123"), 7).unwrap(), w("1231231"));
        assert_eq!(periodic_prefix(&w("a"), 3).unwrap(), w("aaa"));
        assert_eq!(periodic_prefix(&w("12"), 5).unwrap(), w("12121"));
        assert_eq!(periodic_prefix(&w(""), 5), Err(Error::EmptyPeriod));
    }

    #[test]
    fn max_exponent_examples() {
        assert_eq!(max_exponent(&w("aa")).unwrap(), Exponent::from_integer(2));
        assert_eq!(max_exponent(&w("aba")).unwrap(), Exponent::new(3, 2));
        assert_eq!(max_exponent(&w("abc")).unwrap(), Exponent::from_integer(1));
        assert_eq!(max_exponent(&w("")), Err(Error::EmptyWord));
    }

    #[test]
    fn reversible_factor_examples() {
        let set = |xs: &[&str]| xs.iter().map(|s| w(s)).collect::<BTreeSet<_>>();
        assert_eq!(reversible_factors(&w("123123"), 2), set(&["1", "2", "3"]));
        assert_eq!(reversible_factors(&w("1212"), 2), set(&["1", "2", "12", "21"]));
        assert_eq!(reversible_factors(&w("a"), 3), set(&["a"]));
    }

    #[test]
    fn suffix_check_matches_full_scan() {
        let word = w("abcacbabcbac");
        for alpha in [Exponent::new(3, 2), Exponent::from_integer(2), Exponent::new(7, 5)] {
            for end in 1..=word.len() {
                let prefix = &word.letters()[..end];
                let full = max_exponent(&Word::new(prefix.to_vec())).unwrap() >= alpha;
                let before = end > 1 && max_exponent(&Word::new(prefix[..end - 1].to_vec())).unwrap() >= alpha;
                if !before {
                    assert_eq!(suffix_exceeds(prefix, alpha), full, "alpha {alpha} end {end}");
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
            proptest::collection::vec(prop_oneof![Just('a'), Just('b'), Just('c')], 0..max)
                .prop_map(|cs| Word::new(cs.into_iter().map(Letter::glyph).collect()))
        }

        proptest! {
            #[test]
            fn reverse_is_involution(x in word_strategy(20)) {
                prop_assert_eq!(x.reverse().reverse(), x);
            }

            #[test]
            fn factor_survives_reversal(u in word_strategy(4), x in word_strategy(16)) {
                if is_factor(&u, &x) {
                    prop_assert!(is_factor(&u.reverse(), &x.reverse()));
                }
            }

            #[test]
            fn max_exponent_matches_naive(x in word_strategy(64)) {
                prop_assume!(!x.is_empty());
                prop_assert_eq!(max_exponent(&x).unwrap(), naive_max_exponent(&x));
            }

            #[test]
            fn periodic_reversible_factors_are_letters(m in 3usize..7, len in 0usize..60, max_len in 1usize..10) {
                let period = Word::new((0..m).map(|i| Letter::glyph(numbered_glyph(i))).collect());
                let prefix = periodic_prefix(&period, len).unwrap();
                prop_assert!(reversible_factors(&prefix, max_len).iter().all(|f| f.len() == 1));
            }
        }
    }
}
