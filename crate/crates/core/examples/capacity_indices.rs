//! Power and interaction indices of a three-player capacity.

use latint::classical::{coalition, Capacity};
use latint::value::{format_rational, rat};
use latint::{CoefficientScheme, Result};

fn main() -> Result<()> {
    // values by bitmask; players 0 and 1 are complementary
    let values = [0, 1, 1, 6, 2, 2, 3, 10].iter().map(|&v| rat(v, 10)).collect();
    let mu = Capacity::new(3, values)?;
    let flags = mu.validate();
    println!("monotone: {}, normalized: {}", flags.is_monotone, flags.is_normalized);
    for i in 0..3 {
        println!(
            "player {i}: Shapley {}, Banzhaf {}",
            format_rational(&mu.shapley_value(i)?),
            format_rational(&mu.banzhaf_value(i)?)
        );
    }
    let shapley = CoefficientScheme::shapley();
    println!("I({{0,1}}) = {}", format_rational(&mu.interaction_index(coalition(&[0, 1]), &shapley)?));
    println!("I({{0,2}}) = {}", format_rational(&mu.interaction_index(coalition(&[0, 2]), &shapley)?));
    let all = mu.all_interactions(&shapley);
    let m = mu.mobius();
    for s in 1..8usize {
        println!("S={s:03b}  m={:>5}  I={:>6}", format_rational(&m[s]), format_rational(&all[s]));
    }
    Ok(())
}
