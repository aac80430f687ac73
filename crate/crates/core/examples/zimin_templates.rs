//! The formulas Z_{m,n}: templates, sizes and pigeonhole lengths.

use revzimin::zimin::{self, ZiminTemplate};
use revzimin::{FormulaR, SearchBudget};

fn main() -> revzimin::Result<()> {
    println!("{:>2} {:>2} {:>8} {:>10}", "m", "n", "length", "fragments");
    for m in 0..=3 {
        for n in 0..=3 {
            if m + n == 0 {
                continue;
            }
            let s = zimin::stats(m, n)?;
            println!("{m:>2} {n:>2} {:>8} {:>10}", s.fragment_length, s.fragment_count);
        }
    }

    let t = ZiminTemplate::new(1, 1)?;
    println!("\nZ_{{1,1}} template {}", t.render());
    println!("{}", t.enumerate_fragments()?);

    for (m, n, k) in [(1, 0, 2), (0, 2, 2), (1, 1, 2), (2, 1, 3), (1, 2, 2)] {
        println!("every word of length {} over {k} letters meets Z_{{{m},{n}}}", zimin::sufficient_length(m, n, k)?);
    }

    let budget = SearchBudget::default();
    let phi: FormulaR = "x y x~".parse()?;
    match zimin::divides_zimin(&phi, 1, 1, &budget)?.into_found() {
        Some(h) => println!("\n{phi} divides Z_{{1,1}} via {h}"),
        None => println!("\n{phi} does not divide Z_{{1,1}}"),
    }
    Ok(())
}
