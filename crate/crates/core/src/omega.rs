//! Finite descriptions of infinite witness words.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::FormulaR;
use crate::words::{self, Exponent, Word};

/// Property a generated word was built to satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Constraint {
    /// No factor of exponent `>= exponent`.
    PowerFree {
        #[serde(serialize_with = "ser_exponent", deserialize_with = "de_exponent")]
        exponent: Exponent,
    },
    /// No occurrence of `formula`.
    Avoiding { formula: FormulaR },
}

fn ser_exponent<S: Serializer>(e: &Exponent, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

fn de_exponent<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Exponent, D::Error> {
    let text = String::deserialize(d)?;
    parse_exponent(&text).map_err(serde::de::Error::custom)
}

/// Parse `"3/2"` or `"2"`.
pub fn parse_exponent(text: &str) -> Result<Exponent> {
    let bad = || Error::Parse { pos: 0, msg: format!("bad exponent {text:?}") };
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), "1"),
    };
    let num: u64 = num.parse().map_err(|_| bad())?;
    let den: u64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Exponent::new(num, den))
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::PowerFree { exponent } => write!(f, "{exponent}-power-free"),
            Constraint::Avoiding { formula } => write!(f, "avoiding {formula}"),
        }
    }
}

/// An ω-word given by a period, a direct product, or a stored prefix of a
/// generated word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaWordSpec {
    Periodic {
        period: Word,
    },
    DirectProduct {
        left: Box<OmegaWordSpec>,
        right: Box<OmegaWordSpec>,
    },
    Generated {
        alphabet_size: usize,
        constraint: Constraint,
        prefix: Word,
    },
}

impl OmegaWordSpec {
    pub fn periodic(period: impl Into<Word>) -> OmegaWordSpec {
        OmegaWordSpec::Periodic { period: period.into() }
    }

    pub fn product(left: OmegaWordSpec, right: OmegaWordSpec) -> OmegaWordSpec {
        OmegaWordSpec::DirectProduct { left: Box::new(left), right: Box::new(right) }
    }

    /// The word `(1 2 .. k)^ω` over numbered glyphs.
    pub fn cycle(k: usize) -> OmegaWordSpec {
        let period: String = (0..k).map(words::numbered_glyph).collect();
        OmegaWordSpec::periodic(period.as_str())
    }

    /// Longest prefix available, `None` when unbounded.
    pub fn available_len(&self) -> Option<usize> {
        match self {
            OmegaWordSpec::Periodic { .. } => None,
            OmegaWordSpec::DirectProduct { left, right } => match (left.available_len(), right.available_len()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
            OmegaWordSpec::Generated { prefix, .. } => Some(prefix.len()),
        }
    }

    pub fn materialize(&self, len: usize) -> Result<Word> {
        match self {
            OmegaWordSpec::Periodic { period } => {
                words::periodic_prefix(period, len).map_err(|e| Error::Materialize(e.to_string()))
            }
            OmegaWordSpec::DirectProduct { left, right } => {
                words::direct_product(&left.materialize(len)?, &right.materialize(len)?)
            }
            OmegaWordSpec::Generated { prefix, .. } => {
                if prefix.len() < len {
                    Err(Error::Materialize(format!("stored prefix has length {} < {len}", prefix.len())))
                } else {
                    Ok(prefix.slice(0, len))
                }
            }
        }
    }
}

impl fmt::Display for OmegaWordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaWordSpec::Periodic { period } => write!(f, "({period})^ω"),
            OmegaWordSpec::DirectProduct { left, right } => write!(f, "{left} ⊕ {right}"),
            OmegaWordSpec::Generated { alphabet_size, constraint, prefix } => {
                write!(f, "[{constraint} over {alphabet_size} letters, {} stored]", prefix.len())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_and_product() {
        assert_eq!(OmegaWordSpec::cycle(3).materialize(7).unwrap(), Word::from("1231231"));
        let gen = OmegaWordSpec::Generated {
            alphabet_size: 3,
            constraint: Constraint::PowerFree { exponent: Exponent::from_integer(2) },
            prefix: Word::from("abcab"),
        };
        let prod = OmegaWordSpec::product(gen.clone(), OmegaWordSpec::cycle(3));
        assert_eq!(prod.materialize(4).unwrap().to_string(), "(a|1)(b|2)(c|3)(a|1)");
        assert_eq!(prod.available_len(), Some(5));
        assert!(matches!(prod.materialize(6), Err(Error::Materialize(_))));
        assert!(matches!(OmegaWordSpec::periodic("").materialize(3), Err(Error::Materialize(_))));
    }

    #[test]
    fn json_shape() {
        let spec = OmegaWordSpec::product(
            OmegaWordSpec::Generated {
                alphabet_size: 4,
                constraint: Constraint::PowerFree { exponent: Exponent::new(3, 2) },
                prefix: Word::from("abca"),
            },
            OmegaWordSpec::cycle(3),
        );
        let json = serde_json::to_value(&spec).unwrap();
        assert_eq!(json["kind"], "direct_product");
        assert_eq!(json["left"]["constraint"]["exponent"], "3/2");
        assert_eq!(json["right"]["period"], "123");
        let back: OmegaWordSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(parse_exponent("3/2").unwrap(), Exponent::new(3, 2));
        assert_eq!(parse_exponent("2").unwrap(), Exponent::from_integer(2));
        assert!(parse_exponent("1/0").is_err());
        assert!(parse_exponent("x").is_err());
    }
}
