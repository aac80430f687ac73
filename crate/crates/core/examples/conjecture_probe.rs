//! Deleting every two-way variable leaves a reversal-free formula. When the
//! original formula is unavoidable the remainder should be too.

use revzimin::{conjecture2_probe, DecideConfig, FormulaR};

fn main() -> revzimin::Result<()> {
    let cfg = DecideConfig::fast();
    for text in ["x# y1 x# y2 x# y3 x# y1 x# y2 x#", "x y x~", "x y z x~ z y~", "x y x . y~ z y"] {
        let phi: FormulaR = text.parse()?;
        let r = conjecture2_probe(&phi, &cfg)?;
        println!("{text}  ({} fragments)", phi.len());
        let status = r.status.map_or("?".to_string(), |s| s.to_string());
        println!("  status {status}, residual {} unavoidable={}", r.residual, r.residual_unavoidable);
        if let Some(chain) = &r.reduction {
            println!("  {chain}");
        }
        println!("  consistent: {}", r.consistent);
    }
    Ok(())
}
