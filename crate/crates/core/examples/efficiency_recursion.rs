//! Efficiency on chain products, the recursion between interaction
//! orders, and the diamond where efficiency breaks.

use std::sync::Arc;

use latint::interaction::ltilde_targets;
use latint::value::{format_rational, rat};
use latint::{efficiency_check, importance, recursion_check, CoefficientScheme, FiniteLattice, LatticeFunction, ProductLattice, Result, Valuation};

fn main() -> Result<()> {
    let shapley = CoefficientScheme::shapley();
    let domain = Arc::new(ProductLattice::from_lattices(vec![
        FiniteLattice::chain_of("a", 4)?,
        FiniteLattice::chain_of("b", 3)?,
    ])?);
    let v = LatticeFunction::from_fn(Arc::clone(&domain), |x| rat((x.0[0] * x.0[0] * (x.0[1] + 1)) as i64, 7))?;
    let eff = efficiency_check(&v, &shapley)?;
    println!("chains 4x3: sum of importances {} vs v(top)-v(bottom) {}", format_rational(&eff.lhs), format_rational(&eff.rhs));
    let mut holds = 0;
    let targets = ltilde_targets(&domain)?;
    for x in &targets {
        if recursion_check(&v, x, &shapley)?.pass {
            holds += 1;
        }
    }
    println!("recursion holds at {holds} of {} targets", targets.len());

    let diamond = Arc::new(ProductLattice::from_lattices(vec![FiniteLattice::diamond("d")])?);
    let top = diamond.top();
    let indicator = LatticeFunction::from_fn(Arc::clone(&diamond), |x| rat(i64::from(*x == top), 1))?;
    let total: latint::Rational = diamond
        .join_irreducibles()
        .into_iter()
        .map(|i| importance(&indicator, &diamond.irreducible_point(i), &shapley))
        .sum::<Result<_>>()?;
    let span = indicator.value(&top) - indicator.value(&diamond.bottom());
    println!("diamond, v = [x = top]: importances sum to {}, v(top)-v(bottom) = {}", format_rational(&total), format_rational(&span));
    Ok(())
}
