//! A division is a morphism mapping every fragment of one formula onto a
//! factor of a fragment of the other.

use revzimin::morphism::{self, Outcome};
use revzimin::{FormulaR, SearchBudget};

fn main() -> revzimin::Result<()> {
    let phi: FormulaR = "x y x . y~".parse()?;
    let psi: FormulaR = "x y z x y z . z~ y~ z~".parse()?;
    let budget = SearchBudget::default();

    match morphism::divides(&phi, &psi, &budget) {
        Outcome::Found(h) => {
            println!("{phi} divides {psi} via {h}");
            for p in phi.fragments() {
                println!("  {p} -> {}", h.apply(p)?);
            }
            assert!(h.divides_into(&phi, &psi));
        }
        other => println!("no division: {}", other.status()),
    }

    // Divisibility is not symmetric.
    println!("converse: {}", morphism::divides(&psi, &phi, &budget).status());

    let eq = morphism::equivalent(&"x y x~".parse()?, &"y x y~".parse()?, &budget);
    println!("x y x~ ~ y x y~: {eq:?}");
    Ok(())
}
