//! Derivatives on a product lattice, the Boolean case through Möbius
//! masses, and the zero shortcut.

use std::sync::Arc;

use latint::value::{format_rational, rat};
use latint::{derivative, derivative_via_mobius, is_boolean_derivative, mobius, LatticeFunction, ProductLattice, Result};

fn main() -> Result<()> {
    let domain = Arc::new(ProductLattice::ternary(2)?);
    // v(x) = x0 * x1 + x0 on levels 0, 1, 2
    let f = LatticeFunction::from_fn(Arc::clone(&domain), |x| rat((x.0[0] * x.0[1] + x.0[0]) as i64, 1))?;
    let m = mobius(&f);
    let y = domain.parse_labels(&["1", "0"])?;
    for x in domain.elements()? {
        let d = derivative(&f, &y, &x)?;
        let boolean = is_boolean_derivative(&domain, &y, &x)?;
        let note = if boolean {
            format!("interval sum {}", format_rational(&derivative_via_mobius(&m, &y, &x)?))
        } else {
            "not Boolean".to_string()
        };
        println!("Δ_({}) f({}) = {:>3}   {note}", domain.display(&y), domain.display(&x), format_rational(&d));
    }
    Ok(())
}
