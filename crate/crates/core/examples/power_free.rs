use revzimin::omega::parse_exponent;
use revzimin::oracle::{self, OracleBudget};

fn main() -> revzimin::Result<()> {
    // (letters, every exponent strictly below)
    for (q, alpha) in [(2, "5/2"), (3, "2"), (3, "9/5"), (4, "3/2"), (5, "4/3")] {
        let alpha = parse_exponent(alpha)?;
        let r = oracle::generate_power_free(q, alpha, 120, &OracleBudget::nodes(2_000_000))?;
        match r.word() {
            Some(w) => println!("q={q} <{alpha}: {} nodes, max exponent {}\n  {w}", r.nodes, w.max_exponent()?),
            None => println!("q={q} <{alpha}: {:?} after {} nodes", r.outcome, r.nodes),
        }
    }
    Ok(())
}
