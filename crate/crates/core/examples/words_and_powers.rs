//! Words, reversal and the largest repetition exponent.

use revzimin::words::{self, Word};
use revzimin::OmegaWordSpec;

fn main() -> revzimin::Result<()> {
    for text in ["abaab", "abcacb", "aabaabaa", "abcabca"] {
        let w: Word = text.parse()?;
        println!("{w:<10} reversed {:<10} max exponent {}", w.reverse(), w.max_exponent()?);
    }

    // factors u with u~ also a factor
    let w: Word = "abcbaab".parse()?;
    let rev: Vec<String> = words::reversible_factors(&w, 3).iter().map(ToString::to_string).collect();
    println!("reversible factors of {w} up to length 3: {}", rev.join(" "));

    let left: Word = "abcabcabcabc".parse()?;
    let right = words::periodic_prefix(&"12".parse()?, left.len())?;
    let prod = words::direct_product(&left, &right)?;
    println!("{left} x {right} = {prod}");
    println!("left projection {}", prod.project(true).unwrap());

    let spec = OmegaWordSpec::product(OmegaWordSpec::cycle(3), OmegaWordSpec::cycle(2));
    println!("{spec}: {}", spec.materialize(8)?);
    Ok(())
}
