//! Reversal-free theory: adjacency graphs, free sets and reduction to the
//! empty formula.

use revzimin::classic::{self, zimin_word};
use revzimin::{FormulaR, SearchBudget};

fn main() -> revzimin::Result<()> {
    let budget = SearchBudget::default();
    let phi: FormulaR = "x y x z x y x".parse()?;
    let g = classic::adjacency_graph(&phi)?;
    println!("{phi}");
    for c in g.nontrivial_components() {
        println!("  component {}", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
    }
    for set in classic::free_sets(&phi)? {
        let names: Vec<&str> = set.iter().map(|v| v.name()).collect();
        println!("  free {{{}}} -> {}", names.join(", "), classic::delete(&phi, &set)?);
    }
    if let Some(chain) = classic::is_reducible(&phi)? {
        println!("  {chain}");
    }

    for text in ["x x", "x y x y", "x y . y x", "x y z y x"] {
        let f: FormulaR = text.parse()?;
        let v = classic::decide_classic(&f, &budget)?;
        let tag = if v.unavoidable { "unavoidable" } else { "avoidable" };
        println!("{f:<14} {tag:<12} n = {}", v.n);
    }

    for n in 1..=5 {
        let z = zimin_word(n);
        println!("Z_{n} = {z} (length {})", z.total_len());
    }
    Ok(())
}
