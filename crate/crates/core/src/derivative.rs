//! Discrete derivatives of lattice functions.
//!
//! `Δ_y f(x)` iterates single derivatives `Δ_i f(x) = f(x ∨ i) - f(x)` over
//! the minimal decomposition of `y`. The iteration is evaluated as the
//! signed subset sum `Σ_{S ⊆ η*(y)} (-1)^{|η*(y)|-|S|} f(x ∨ ⋁S)`.

use crate::error::{Error, Result};
use crate::product::{Irreducible, ProductElement, ProductLattice};
use crate::transforms::{LatticeFunction, Valuation};
use crate::value::Scalar;

const MAX_DECOMPOSITION: usize = 30;

fn below(domain: &ProductLattice, i: Irreducible, x: &ProductElement) -> bool {
    domain.lattice(i.attribute).leq(i.element, x.0[i.attribute])
}

/// `Δ_i f(x)` for a join-irreducible `i` of the product.
pub fn derivative_single<T: Scalar>(f: &impl Valuation<T>, i: &ProductElement, x: &ProductElement) -> Result<T> {
    let domain = f.domain();
    domain.validate(i)?;
    domain.validate(x)?;
    let irr = domain.as_irreducible(i).ok_or(Error::NotJoinIrreducible)?;
    if below(domain, irr, x) {
        return Ok(T::zero());
    }
    let joined = domain.join_unchecked(x, i);
    Ok(f.value(&joined) - f.value(x))
}

/// `Δ_y f(x)`. Exactly zero, without evaluating `f`, when a member of
/// `η*(y)` lies below `x`.
pub fn derivative<T: Scalar>(f: &impl Valuation<T>, y: &ProductElement, x: &ProductElement) -> Result<T> {
    let domain = f.domain();
    domain.validate(y)?;
    domain.validate(x)?;
    let members = domain.minimal_decomposition(y)?;
    derivative_over(f, &members, x)
}

pub(crate) fn derivative_over<T: Scalar>(
    f: &impl Valuation<T>,
    members: &[Irreducible],
    x: &ProductElement,
) -> Result<T> {
    let domain = f.domain();
    if members.iter().any(|&i| below(domain, i, x)) {
        return Ok(T::zero());
    }
    let d = members.len();
    if d > MAX_DECOMPOSITION {
        return Err(Error::Size {
            what: "iterated derivative",
            requested: 1u128 << d,
            limit: 1u128 << MAX_DECOMPOSITION,
        });
    }
    let mut total = T::zero();
    for mask in 0u64..1 << d {
        let mut point = x.clone();
        for (b, i) in members.iter().enumerate() {
            if mask >> b & 1 == 1 {
                let l = domain.lattice(i.attribute);
                point.0[i.attribute] = l.join(point.0[i.attribute], i.element);
            }
        }
        let value = f.value(&point);
        if (d - mask.count_ones() as usize).is_multiple_of(2) {
            total += value;
        } else {
            total -= value;
        }
    }
    Ok(total)
}

/// Whether `η(x ∨ y)` is the disjoint union of `η(x)` and `η*(y)`, the
/// condition under which `[x, x ∨ y]` is a cube on `η*(y)`.
pub fn is_boolean_derivative(domain: &ProductLattice, y: &ProductElement, x: &ProductElement) -> Result<bool> {
    domain.validate(y)?;
    domain.validate(x)?;
    for (k, l) in domain.lattices().enumerate() {
        let (xk, yk) = (x.0[k], y.0[k]);
        let star = l.minimal_decomposition(yk)?;
        let eta_x = l.normal_decomposition(xk);
        if star.iter().any(|j| eta_x.binary_search(j).is_ok()) {
            return Ok(false);
        }
        let mut union: Vec<_> = eta_x.iter().chain(star).copied().collect();
        union.sort_unstable();
        if l.normal_decomposition(l.join(xk, yk)) != union.as_slice() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Δ_y f(x) = Σ_{z ∈ [y, x ∨ y]} m(z)` for Boolean derivatives, `m` the
/// Möbius transform of `f`.
pub fn derivative_via_mobius<T: Scalar>(m: &LatticeFunction<T>, y: &ProductElement, x: &ProductElement) -> Result<T> {
    let domain = m.domain_arc();
    if !is_boolean_derivative(domain, y, x)? {
        return Err(Error::NotBoolean);
    }
    let top = domain.join_unchecked(x, y);
    let mut total = T::zero();
    for z in domain.interval(y, &top)? {
        total += m.get(&z);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::FiniteLattice;
    use crate::transforms::mobius;
    use crate::value::{int, Rational};
    use std::sync::Arc;

    fn sample(p: &Arc<ProductLattice>) -> LatticeFunction<Rational> {
        LatticeFunction::from_fn(Arc::clone(p), |x| {
            let s: usize = x.coords().iter().enumerate().map(|(k, &c)| (k + 2) * (c + 1) * (c + 3)).sum();
            int((s * s % 23) as i64)
        })
        .unwrap()
    }

    #[test]
    fn single_derivative_on_capacities() {
        let p = Arc::new(ProductLattice::boolean(3).unwrap());
        let f = sample(&p);
        let i = p.parse_labels(&["0", "1", "0"]).unwrap();
        let a = p.parse_labels(&["1", "0", "0"]).unwrap();
        let with = p.parse_labels(&["1", "1", "0"]).unwrap();
        assert_eq!(derivative_single(&f, &i, &a).unwrap(), f.get(&with) - f.get(&a));
        assert_eq!(derivative_single(&f, &i, &with).unwrap(), int(0));
        assert!(matches!(derivative_single(&f, &with, &a), Err(Error::NotJoinIrreducible)));
    }

    #[test]
    fn single_derivative_on_bicapacities() {
        // Δ_(i,i^c) v(A,B) = v(A ∪ i, B) - v(A,B); here i = 1 at neutral.
        let p = Arc::new(ProductLattice::ternary(2).unwrap());
        let f = sample(&p);
        let i = p.parse_labels(&["1", "-1"]).unwrap();
        let x = p.parse_labels(&["0", "0"]).unwrap();
        let up = p.parse_labels(&["1", "0"]).unwrap();
        assert_eq!(derivative_single(&f, &i, &x).unwrap(), f.get(&up) - f.get(&x));
        // Δ_(∅,i^c) v(A,B) = v(A, B \ i) - v(A,B)
        let j = p.parse_labels(&["0", "-1"]).unwrap();
        let x = p.parse_labels(&["-1", "1"]).unwrap();
        let up = p.parse_labels(&["0", "1"]).unwrap();
        assert_eq!(derivative_single(&f, &j, &x).unwrap(), f.get(&up) - f.get(&x));
    }

    #[test]
    fn second_derivative_on_square() {
        let p = Arc::new(ProductLattice::boolean(2).unwrap());
        let f = sample(&p);
        let v = |a: &str, b: &str| f.get(&p.parse_labels(&[a, b]).unwrap()).clone();
        let d = derivative(&f, &p.top(), &p.bottom()).unwrap();
        assert_eq!(d, v("1", "1") - v("1", "0") - v("0", "1") + v("0", "0"));
    }

    #[test]
    fn zero_when_member_below_point() {
        let p = Arc::new(ProductLattice::ternary(2).unwrap());
        let f = sample(&p);
        let y = p.parse_labels(&["1", "0"]).unwrap();
        let x = p.parse_labels(&["-1", "1"]).unwrap();
        assert_eq!(derivative(&f, &y, &x).unwrap(), int(0));
        assert!(!is_boolean_derivative(&p, &y, &x).unwrap());
    }

    #[test]
    fn comparable_pair_gives_negated_single() {
        // on a 3-chain with i = 0 <= j = 1: Δ_{i∨j} := Δ_i Δ_j = -Δ_i
        let p = Arc::new(ProductLattice::ternary(1).unwrap());
        let f = sample(&p);
        let x = p.bottom();
        let i = p.parse_labels(&["0"]).unwrap();
        let j = p.parse_labels(&["1"]).unwrap();
        let dj = |at: &ProductElement| derivative_single(&f, &j, at).unwrap();
        let iterated = dj(&p.join(&x, &i).unwrap()) - dj(&x);
        assert_eq!(iterated, -derivative_single(&f, &i, &x).unwrap());
    }

    #[test]
    fn boolean_detection() {
        let p = Arc::new(ProductLattice::ternary(2).unwrap());
        let x = p.bottom();
        let atom = p.parse_labels(&["0", "-1"]).unwrap();
        assert!(is_boolean_derivative(&p, &atom, &x).unwrap());
        // two steps up one chain: the interval [-1, 1] is a 3-chain
        let two = p.parse_labels(&["1", "-1"]).unwrap();
        assert!(!is_boolean_derivative(&p, &two, &x).unwrap());
        let d = Arc::new(ProductLattice::from_lattices(vec![FiniteLattice::diamond("d")]).unwrap());
        assert!(is_boolean_derivative(&d, &d.top(), &d.bottom()).unwrap());
    }

    #[test]
    fn mobius_route_at_bottom_is_spike() {
        let p = Arc::new(ProductLattice::ternary(2).unwrap());
        let f = sample(&p);
        let m = mobius(&f);
        for y in p.elements().unwrap() {
            if is_boolean_derivative(&p, &y, &p.bottom()).unwrap() {
                assert_eq!(derivative_via_mobius(&m, &y, &p.bottom()).unwrap(), m.get(&y).clone());
                assert_eq!(derivative(&f, &y, &p.bottom()).unwrap(), m.get(&y).clone());
            }
        }
        let two = p.parse_labels(&["1", "-1"]).unwrap();
        assert!(matches!(derivative_via_mobius(&m, &two, &p.bottom()), Err(Error::NotBoolean)));
    }
}
