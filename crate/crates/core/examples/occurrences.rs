use revzimin::morphism::{self, Outcome};
use revzimin::{FormulaR, SearchBudget, Word};

fn show(label: &str, o: Outcome<revzimin::ConcreteMorphism>) {
    match o {
        Outcome::Found(h) => println!("  {label}: {h}"),
        other => println!("  {label}: {}", other.status()),
    }
}

fn main() -> revzimin::Result<()> {
    let budget = SearchBudget::default();
    let cases = [
        ("x x~", "abba"),
        ("x y x", "abcab"),
        ("x y . y~ x", "abcbad"),
        ("x y x~", "abcabc"),
        ("x . x~", "abcba"),
    ];
    for (f, w) in cases {
        let phi: FormulaR = f.parse()?;
        let w: Word = w.parse()?;
        println!("{phi} in {w}");
        show("occurs", morphism::occurs(&phi, &w, &budget));
        // every fragment must have the same image
        show("common image", morphism::occurs_common_image(&phi, &w, &budget));
    }
    Ok(())
}
