//! Avoidability by explicit infinite words, checked on long prefixes.

use revzimin::lemmas::{self, WitnessConfig};
use revzimin::oracle;
use revzimin::{FormulaR, SearchBudget};

fn main() -> revzimin::Result<()> {
    let cfg = WitnessConfig::default();
    let budget = SearchBudget::default();
    for text in ["x y~ . y z . x z", "x x~", "y x y . x~", "x y x . y~ z y~", "x y z y~ x~"] {
        let phi: FormulaR = text.parse()?;
        let Some(cert) = lemmas::battery(&phi, &budget, &cfg) else {
            println!("{phi}: nothing fires");
            continue;
        };
        print!("{phi}: {}", cert.kind());
        match lemmas::build_witness(&cert) {
            Ok(spec) => {
                let r = oracle::verify_witness_prefix(&spec, &phi, cfg.prefix_len, cfg.image_bound, cfg.verify_steps)?;
                println!(" witness {spec}, prefix check {}", if r.is_ok() { "ok" } else { "FAILED" });
            }
            Err(_) => println!(" (no witness word)"),
        }
    }
    Ok(())
}
