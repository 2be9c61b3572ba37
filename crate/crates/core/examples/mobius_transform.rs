//! Möbius and zeta transforms on a product of a diamond and a chain, plus
//! the bitmask fast path for set functions.

use std::sync::Arc;

use latint::value::{format_rational, rat};
use latint::{fast_boolean_mobius, mobius, zeta, FiniteLattice, LatticeFunction, ProductLattice, Result};

fn main() -> Result<()> {
    let domain = Arc::new(ProductLattice::from_lattices(vec![
        FiniteLattice::diamond("d"),
        FiniteLattice::chain_of("c", 3)?,
    ])?);
    // g counts the elements below x, so its Möbius transform is 1 everywhere
    let g = LatticeFunction::from_fn(Arc::clone(&domain), |x| {
        let below = domain.elements().unwrap().filter(|y| domain.leq(y, x).unwrap()).count();
        rat(below as i64, 1)
    })?;
    let m = mobius(&g);
    for (x, value) in m.iter() {
        println!("m({}) = {}", domain.display(&x), format_rational(value));
    }
    assert_eq!(zeta(&m), g);
    println!("zeta(mobius(g)) == g");

    // v(S) = |S|^2 on three players, stored by bitmask
    let mut set_fn: Vec<f64> = (0u32..8).map(|s| f64::from(s.count_ones().pow(2))).collect();
    fast_boolean_mobius(&mut set_fn)?;
    println!("Möbius of |S|^2 on 2^3: {set_fn:?}");
    Ok(())
}
