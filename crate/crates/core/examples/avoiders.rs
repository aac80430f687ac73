//! Backtracking for long words that avoid a formula, and exhaustive checks
//! that short words cannot.

use revzimin::oracle::{self, OracleBudget};
use revzimin::FormulaR;

fn main() -> revzimin::Result<()> {
    for (text, k) in [("x x", 2), ("x x", 3), ("x x~", 2), ("x y x y", 2), ("x y x", 4)] {
        let phi: FormulaR = text.parse()?;
        let r = oracle::search_avoiding_word(&phi, k, 40, &OracleBudget::default())?;
        println!("{phi:<10} k={k}: {}", serde_json::to_string(&r).unwrap());
    }
    let phi: FormulaR = "x y x".parse()?;
    for len in 4..=6 {
        println!("all binary words of length {len} meet {phi}: {}", oracle::all_words_encounter(&phi, 2, len)?);
    }
    Ok(())
}
