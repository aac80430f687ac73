//! Avoidability of patterns and formulas with reversal.

pub mod classic;
pub mod corpus;
pub mod decide;
pub mod error;
pub mod formula;
pub mod lemmas;
pub mod morphism;
pub mod omega;
pub mod oracle;
mod search;
pub mod words;
pub mod zimin;

pub use decide::{conjecture2_probe, decide, Certificate, DecideConfig, Status, Verdict};
pub use error::{Error, Result};
pub use formula::{FormulaR, PatternR, Sym, VarClass, Variable};
pub use morphism::{ConcreteMorphism, Incomplete, Outcome, SearchBudget, SymbolicMorphism};
pub use omega::OmegaWordSpec;
pub use words::{Exponent, Letter, Word};
pub use zimin::ZiminTemplate;
