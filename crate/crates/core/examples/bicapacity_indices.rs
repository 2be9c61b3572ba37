//! Bi-capacity indices on two players, by differences and from Möbius
//! masses, next to the general engine on `3^2`.

use latint::classical::{ternary_target, BiCapacity, Sign};
use latint::value::{format_rational, rat};
use latint::{importance, interaction_direct, CoefficientScheme, Result};

fn main() -> Result<()> {
    let table = [
        ((0b00, 0b11), -10),
        ((0b00, 0b01), -6),
        ((0b00, 0b10), -5),
        ((0b10, 0b01), -1),
        ((0b01, 0b10), 2),
        ((0b10, 0b00), 4),
        ((0b01, 0b00), 3),
        ((0b11, 0b00), 10),
    ];
    let bi = BiCapacity::from_fn(2, |a, b| {
        table.iter().find(|(k, _)| *k == (a, b)).map_or(rat(0, 1), |&(_, v)| rat(v, 10))
    })?;
    println!("monotone: {}", bi.validate().is_monotone);
    let shapley = CoefficientScheme::shapley();
    let v = bi.to_lattice_function()?;
    for i in 0..2 {
        let pos = bi.importance(i, Sign::Positive, &shapley)?;
        let neg = bi.importance(i, Sign::Negative, &shapley)?;
        let general = importance(&v, &ternary_target(2, 1 << i, 0), &shapley)?;
        println!("player {i}: positive {} (general {}), negative {}", format_rational(&pos), format_rational(&general), format_rational(&neg));
    }
    let m = bi.mobius();
    for (s, t, name) in [(0b11, 0, "I_{12,∅}"), (0, 0b11, "I_{∅,12}"), (0b01, 0b10, "I_{1,2}"), (0b10, 0b01, "I_{2,1}")] {
        let by_differences = bi.interaction(s, t, &shapley)?;
        let general = interaction_direct(&v, &ternary_target(2, s, t), &shapley)?;
        let corner_b = 0b11 & !(s | t);
        let via_mobius = bi.corner_interaction_mobius(&m, s, corner_b, &shapley)?;
        println!(
            "{name:<9} {:>6}  general {:>6}  Möbius {:>6}",
            format_rational(&by_differences),
            format_rational(&general),
            format_rational(&via_mobius)
        );
    }
    Ok(())
}
