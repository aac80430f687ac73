//! Classify formulas and print the verdicts as JSON.

use revzimin::{decide, DecideConfig, FormulaR};

fn main() -> revzimin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs: Vec<String> = if args.is_empty() {
        ["x y x~", "x x~", "x y~ . y z . x z", "y x y . x~", "x y1 x y2 x~", "x y z y~ x"]
            .map(String::from)
            .to_vec()
    } else {
        args
    };
    let cfg = DecideConfig::new();
    for text in inputs {
        let phi: FormulaR = text.parse()?;
        let v = decide(&phi, &cfg);
        println!("{:<22} {:<12} {}", phi.to_string(), v.status.to_string(), v.certificate.kind());
        println!("{}", serde_json::to_string(&v.to_json()).unwrap());
    }
    Ok(())
}
