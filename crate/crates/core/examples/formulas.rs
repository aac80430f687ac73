//! Parsing formulas with reversal and the operations on them.

use revzimin::{FormulaR, VarClass};

fn main() -> revzimin::Result<()> {
    let phi: FormulaR = "x y~ x . y z~ y".parse()?;
    println!("formula     {phi}");
    println!("flattened   {}", phi.flatten());
    println!("normalized  {}", phi.normalize());
    let (m, n) = phi.way_counts();
    println!("two-way {m}, one-way {n}");
    for (v, class) in phi.classify_vars() {
        let kind = match class {
            VarClass::TwoWay => "two-way",
            VarClass::OneWay => "one-way",
            VarClass::Absent => continue,
        };
        println!("  {v}: {kind}");
    }

    // `x#` stands for both orientations: every fragment is written out twice
    let both: FormulaR = "x# y x#".parse()?;
    println!("{both}");

    for p in phi.fragments() {
        println!("fragment {p}: d-reversal {}", p.d_reverse());
    }
    println!("factors of length 2: {:?}", phi.factors_of(2).iter().map(ToString::to_string).collect::<Vec<_>>());

    match "x .. y".parse::<FormulaR>() {
        Ok(f) => println!("unexpected {f}"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
