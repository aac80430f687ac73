//! Verdicts with certificates.
//!
//! [`decide`] normalizes the formula and counts its two-way (`m`) and
//! one-way (`n`) variables. Division into `Z_{m,n}` proves unavoidability for
//! every `m, n`. Without it the formula is avoidable when `m = 0` (Zimin) or
//! `n <= 2`; otherwise only a firing lemma proves avoidability, and the
//! verdict is `unknown`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::classic::{self, ReductionChain};
use crate::error::Result;
use crate::formula::{FormulaR, PatternR};
use crate::lemmas::{self, CorollaryName, LemmaName, WitnessConfig};
use crate::morphism::{Incomplete, Outcome, SearchBudget, SymbolicMorphism};
use crate::omega::OmegaWordSpec;
use crate::oracle::{self, OracleBudget};
use crate::words::Word;
use crate::zimin::ZiminTemplate;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Unavoidable,
    Avoidable,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Unavoidable => "unavoidable",
            Status::Avoidable => "avoidable",
            Status::Unknown => "unknown",
        })
    }
}

/// Finite avoiding word found by the oracle. Never a proof on its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub word: Word,
    pub alphabet_size: usize,
    pub length: usize,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Division into `Z_{m,n}`.
    ZiminDivision { m: usize, n: usize, morphism: SymbolicMorphism },
    /// No two-way variables and no division into `Z_n`.
    ZiminContrapositive { n: usize },
    /// At most two one-way variables and no division into `Z_{m,n}`.
    Theorem9Contrapositive { m: usize, n: usize },
    /// A factor of a fragment is avoidable by a counting argument.
    Corollary { name: CorollaryName, factor: PatternR },
    Lemma { name: LemmaName, note: String, witness: OmegaWordSpec },
    /// An avoiding word was searched for but proves nothing.
    EvidenceOnly { word: Option<Word>, alphabet_size: usize, length: usize },
    Inconclusive { reason: String },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ZiminDivision { .. } => "zimin_division",
            Certificate::ZiminContrapositive { .. } => "zimin_contrapositive",
            Certificate::Theorem9Contrapositive { .. } => "theorem9_contrapositive",
            Certificate::Corollary { .. } => "corollary",
            Certificate::Lemma { .. } => "lemma",
            Certificate::EvidenceOnly { .. } => "evidence_only",
            Certificate::Inconclusive { .. } => "inconclusive",
        }
    }

    /// Re-check the parts of the certificate that can be checked finitely:
    /// divisions and corollary factors exactly, lemma witnesses by the
    /// bounded prefix check. Contrapositive markers and evidence pass.
    pub fn check(&self, phi: &FormulaR, cfg: &WitnessConfig) -> bool {
        let phi = phi.normalize();
        match self {
            Certificate::ZiminDivision { m, n, morphism } => match ZiminTemplate::new(*m, *n) {
                Ok(t) => morphism.check_images(&phi, |p| t.is_factor(p)),
                Err(_) => false,
            },
            Certificate::Corollary { name, factor } => {
                let present = phi.fragments().iter().any(|f| factor.is_factor_of(f));
                present
                    && match name {
                        CorollaryName::DoubledLetters => lemmas::check_doubled_pattern(factor),
                        CorollaryName::LengthBound => lemmas::check_length_bound(factor),
                    }
            }
            Certificate::Lemma { witness, .. } => {
                oracle::verify_witness_prefix(witness, &phi, cfg.prefix_len, cfg.image_bound, cfg.verify_steps)
                    .is_ok_and(|r| r.is_ok())
            }
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EvidenceConfig {
    pub enabled: bool,
    pub max_alphabet: usize,
    pub length: usize,
    pub budget: OracleBudget,
}

impl Default for EvidenceConfig {
    fn default() -> Self {
        EvidenceConfig { enabled: true, max_alphabet: 5, length: 50, budget: OracleBudget::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecideConfig {
    pub budget: SearchBudget,
    pub witness: WitnessConfig,
    pub evidence: EvidenceConfig,
    /// Run the bounded prefix check on lemma witnesses before accepting them.
    pub verify_witnesses: bool,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            budget: SearchBudget::default(),
            witness: WitnessConfig::default(),
            evidence: EvidenceConfig::default(),
            verify_witnesses: true,
        }
    }
}

impl DecideConfig {
    pub fn new() -> DecideConfig {
        DecideConfig::default()
    }

    /// No evidence search and no witness verification.
    pub fn fast() -> DecideConfig {
        DecideConfig {
            evidence: EvidenceConfig { enabled: false, ..EvidenceConfig::default() },
            verify_witnesses: false,
            ..DecideConfig::default()
        }
    }
}

fn formula_text<S: Serializer>(phi: &FormulaR, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&phi.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub schema_version: &'static str,
    #[serde(serialize_with = "formula_text")]
    pub formula: FormulaR,
    pub m: usize,
    pub n: usize,
    pub status: Status,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
}

impl Verdict {
    /// JSON with keys sorted.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serializes")
    }
}

fn evidence(phi: &FormulaR, cfg: &EvidenceConfig) -> Option<Evidence> {
    if !cfg.enabled {
        return None;
    }
    (2..=cfg.max_alphabet).find_map(|k| {
        let r = oracle::search_avoiding_word(phi, k, cfg.length, &cfg.budget).ok()?;
        let nodes = r.nodes;
        r.into_word().map(|word| Evidence { word, alphabet_size: k, length: cfg.length, nodes })
    })
}

fn battery(phi: &FormulaR, cfg: &DecideConfig) -> Option<Certificate> {
    let cert = lemmas::battery(phi, &cfg.budget, &cfg.witness)?;
    if cfg.verify_witnesses && !cert.check(phi, &cfg.witness) {
        return None;
    }
    Some(cert)
}

/// Classify `phi`.
pub fn decide(phi: &FormulaR, cfg: &DecideConfig) -> Verdict {
    let phi = phi.normalize();
    let (m, n) = phi.way_counts();
    let verdict = |status, certificate, evidence| Verdict {
        schema_version: SCHEMA_VERSION,
        formula: phi.clone(),
        m,
        n,
        status,
        certificate,
        evidence,
    };

    let division = ZiminTemplate::new(m, n).map(|t| t.divides(&phi, &cfg.budget));
    let blocked = match division {
        Ok(Outcome::Found(morphism)) => {
            return verdict(Status::Unavoidable, Certificate::ZiminDivision { m, n, morphism }, None);
        }
        Ok(Outcome::Absent) => None,
        Ok(Outcome::Incomplete(Incomplete::StepLimit)) => {
            Some(format!("division into Z_{{{m},{n}}} hit the step limit of {}", cfg.budget.max_steps))
        }
        Ok(Outcome::Incomplete(Incomplete::ImageBound)) => Some(format!("division into Z_{{{m},{n}}} was bounded")),
        Err(e) => Some(e.to_string()),
    };

    if blocked.is_none() && m == 0 {
        return verdict(Status::Avoidable, Certificate::ZiminContrapositive { n }, None);
    }
    if let Some(cert) = battery(&phi, cfg) {
        return verdict(Status::Avoidable, cert, None);
    }
    let found = evidence(&phi, &cfg.evidence);
    match blocked {
        None if n <= 2 => verdict(Status::Avoidable, Certificate::Theorem9Contrapositive { m, n }, found),
        None => {
            let cert = Certificate::EvidenceOnly {
                word: found.as_ref().map(|e| e.word.clone()),
                alphabet_size: found.as_ref().map_or(cfg.evidence.max_alphabet, |e| e.alphabet_size),
                length: cfg.evidence.length,
            };
            verdict(Status::Unknown, cert, found)
        }
        Some(reason) => verdict(Status::Unknown, Certificate::Inconclusive { reason }, found),
    }
}

/// Bookkeeping for the conjecture that deleting all two-way variables from
/// an unavoidable formula leaves an unavoidable formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    #[serde(serialize_with = "formula_text")]
    pub formula: FormulaR,
    /// Status of the formula itself, when decided.
    pub status: Option<Status>,
    #[serde(serialize_with = "formula_text")]
    pub residual: FormulaR,
    pub residual_unavoidable: bool,
    pub reduction: Option<ReductionChain>,
    /// False only for a counterexample: unavoidable formula, avoidable residual.
    pub consistent: bool,
}

pub fn conjecture2_probe(phi: &FormulaR, cfg: &DecideConfig) -> Result<ProbeReport> {
    let phi = phi.normalize();
    let residual = phi.delete_vars(&phi.two_way_vars());
    let classic = classic::decide_classic(&residual, &cfg.budget)?;
    let status = match decide(&phi, cfg).status {
        Status::Unknown => None,
        s => Some(s),
    };
    Ok(ProbeReport {
        consistent: status != Some(Status::Unavoidable) || classic.unavoidable,
        formula: phi,
        status,
        residual,
        residual_unavoidable: classic.unavoidable,
        reduction: classic.reduction,
    })
}
