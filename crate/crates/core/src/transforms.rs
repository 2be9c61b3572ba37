//! Functions on product lattices and their Möbius / zeta transforms.
//!
//! The zeta transform of a product is the tensor product of the attribute
//! zeta transforms, so both directions run one attribute axis at a time. On
//! each axis the Möbius direction uses only the nonzero values of the
//! attribute's Möbius function (two per element on a chain).

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::product::{ProductElement, ProductLattice};
use crate::value::{Rational, Scalar};

pub const DEFAULT_BOOLEAN_LIMIT: usize = 24;

/// Anything that assigns a value to every element of a product lattice.
pub trait Valuation<T> {
    fn domain(&self) -> &ProductLattice;
    fn value(&self, x: &ProductElement) -> T;
}

/// Dense function over a materialized product, indexed by
/// [`ProductLattice::index_of`].
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction<T> {
    domain: Arc<ProductLattice>,
    values: Vec<T>,
}

impl<T: Scalar> LatticeFunction<T> {
    pub fn new(domain: Arc<ProductLattice>, values: Vec<T>) -> Result<Self> {
        let size = domain.enumerable_size()?;
        if values.len() != size {
            return Err(Error::ValueCount { expected: size, found: values.len() });
        }
        Ok(LatticeFunction { domain, values })
    }

    pub fn from_fn(domain: Arc<ProductLattice>, f: impl Fn(&ProductElement) -> T) -> Result<Self> {
        let values = domain.elements()?.map(|x| f(&x)).collect();
        Ok(LatticeFunction { domain, values })
    }

    /// Materializes any valuation over its own domain.
    pub fn from_valuation(v: &impl Valuation<T>) -> Result<Self> {
        let domain = Arc::new(v.domain().clone());
        Self::from_fn(domain, |x| v.value(x))
    }

    pub fn domain_arc(&self) -> &Arc<ProductLattice> {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn get(&self, x: &ProductElement) -> &T {
        &self.values[self.domain.index_of(x)]
    }

    pub fn set(&mut self, x: &ProductElement, value: T) {
        let i = self.domain.index_of(x);
        self.values[i] = value;
    }

    /// Pairs each element with its value, in index order.
    pub fn iter(&self) -> impl Iterator<Item = (ProductElement, &T)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (self.domain.element_at(i), v))
    }
}

impl<T: Scalar> Valuation<T> for LatticeFunction<T> {
    fn domain(&self) -> &ProductLattice {
        &self.domain
    }

    fn value(&self, x: &ProductElement) -> T {
        self.get(x).clone()
    }
}

/// Function stored only where it differs from a default, usable on products
/// too large to enumerate.
#[derive(Debug, Clone)]
pub struct SparseFunction<T> {
    domain: Arc<ProductLattice>,
    default: T,
    entries: HashMap<ProductElement, T>,
}

impl<T: Scalar> SparseFunction<T> {
    pub fn new(domain: Arc<ProductLattice>, default: T) -> Self {
        SparseFunction { domain, default, entries: HashMap::new() }
    }

    pub fn insert(&mut self, x: ProductElement, value: T) -> Result<Option<T>> {
        self.domain.validate(&x)?;
        Ok(self.entries.insert(x, value))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<T: Scalar> Valuation<T> for SparseFunction<T> {
    fn domain(&self) -> &ProductLattice {
        &self.domain
    }

    fn value(&self, x: &ProductElement) -> T {
        self.entries.get(x).cloned().unwrap_or_else(|| self.default.clone())
    }
}

/// Valuation backed by a closure.
pub struct FnValuation<F> {
    domain: Arc<ProductLattice>,
    f: F,
}

impl<F> FnValuation<F> {
    pub fn new(domain: Arc<ProductLattice>, f: F) -> Self {
        FnValuation { domain, f }
    }
}

impl<T, F: Fn(&ProductElement) -> T> Valuation<T> for FnValuation<F> {
    fn domain(&self) -> &ProductLattice {
        &self.domain
    }

    fn value(&self, x: &ProductElement) -> T {
        (self.f)(x)
    }
}

/// For each rank position on one axis, the rank positions strictly below it.
fn strict_lower_ranks(domain: &ProductLattice, k: usize) -> Vec<Vec<usize>> {
    let l = domain.lattice(k);
    let ext = l.linear_extension();
    (0..l.len())
        .map(|r| (0..r).filter(|&s| l.lt(ext[s], ext[r])).collect())
        .collect()
}

/// Nonzero `μ(s, r)` for `s < r` in rank positions, from
/// `μ(s, r) = -Σ_{s<=z<r} μ(s, z)`.
fn mobius_function_ranks(domain: &ProductLattice, k: usize) -> Vec<Vec<(usize, i64)>> {
    let below = strict_lower_ranks(domain, k);
    let len = below.len();
    let mut mu = vec![vec![0i64; len]; len];
    for r in 0..len {
        mu[r][r] = 1;
        for &s in below[r].iter().rev() {
            // z ranges over [s, r): positions between s and r in the order
            let total: i64 = std::iter::once(s)
                .chain(below[r].iter().copied().filter(|&z| z > s && below[z].contains(&s)))
                .map(|z| mu[s][z])
                .sum();
            mu[s][r] = -total;
        }
    }
    (0..len)
        .map(|r| below[r].iter().filter(|&&s| mu[s][r] != 0).map(|&s| (s, mu[s][r])).collect())
        .collect()
}

fn for_each_axis_fiber<T: Scalar, A>(
    domain: &ProductLattice,
    values: &mut [T],
    table: impl Fn(usize) -> A,
    mut apply: impl FnMut(&mut [T], usize, usize, &A),
) {
    let sizes: Vec<usize> = domain.lattices().map(|l| l.len()).collect();
    for k in 0..domain.n() {
        let axis = table(k);
        let stride: usize = sizes[k + 1..].iter().product();
        let block = stride * sizes[k];
        for outer in (0..values.len()).step_by(block) {
            for inner in 0..stride {
                apply(values, outer + inner, stride, &axis);
            }
        }
    }
}

/// The unique `m` with `g(x) = Σ_{y<=x} m(y)`.
pub fn mobius<T: Scalar>(g: &LatticeFunction<T>) -> LatticeFunction<T> {
    let mut values = g.values.clone();
    let table = |k| mobius_function_ranks(&g.domain, k);
    for_each_axis_fiber(&g.domain, &mut values, table, |v, base, stride, mu: &Vec<Vec<(usize, i64)>>| {
        // descending, so every term still reads an untransformed value
        for (r, terms) in mu.iter().enumerate().rev() {
            if let [(s, -1)] = terms.as_slice() {
                let x = v[base + s * stride].clone();
                v[base + r * stride] -= x;
                continue;
            }
            let mut acc = T::zero();
            for &(s, c) in terms {
                let x = &v[base + s * stride];
                match c {
                    1 => acc += x,
                    -1 => acc -= x,
                    _ => acc += T::from_rational(&Rational::from_integer(c.into())) * x.clone(),
                }
            }
            v[base + r * stride] += acc;
        }
    });
    LatticeFunction { domain: Arc::clone(&g.domain), values }
}

/// `g(x) = Σ_{y<=x} m(y)`.
pub fn zeta<T: Scalar>(m: &LatticeFunction<T>) -> LatticeFunction<T> {
    let mut values = m.values.clone();
    let domain = &m.domain;
    let table = |k| (domain.lattice(k).flags().is_linear, strict_lower_ranks(domain, k));
    for_each_axis_fiber(domain, &mut values, table, |v, base, stride, (linear, below): &(bool, Vec<Vec<usize>>)| {
        if *linear {
            // running sum along the chain
            for r in 1..below.len() {
                let prev = v[base + (r - 1) * stride].clone();
                v[base + r * stride] += prev;
            }
            return;
        }
        for (r, lower) in below.iter().enumerate().rev() {
            let mut acc = T::zero();
            for &s in lower {
                acc += &v[base + s * stride];
            }
            v[base + r * stride] += acc;
        }
    });
    LatticeFunction { domain: Arc::clone(&m.domain), values }
}

fn check_boolean_len(len: usize, limit: usize) -> Result<()> {
    if !len.is_power_of_two() {
        return Err(Error::Size { what: "Boolean transform (length must be 2^n)", requested: len as u128, limit: 0 });
    }
    let n = len.trailing_zeros() as usize;
    if n > limit {
        return Err(Error::Size { what: "Boolean transform", requested: len as u128, limit: 1u128 << limit });
    }
    Ok(())
}

fn boolean_pass<T: Scalar>(values: &mut [T], subtract: bool) {
    let len = values.len();
    let mut half = 1;
    while half < len {
        let op = |chunk: &mut [T]| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                if subtract {
                    *b -= a;
                } else {
                    *b += a;
                }
            }
        };
        if len >= 1 << 14 {
            values.par_chunks_mut(2 * half).for_each(op);
        } else {
            values.chunks_mut(2 * half).for_each(op);
        }
        half *= 2;
    }
}

/// In-place Möbius transform of a set function stored by bitmask
/// (`values[S]`, bit `i` = element `i`). Sizes above `2^24` are rejected.
pub fn fast_boolean_mobius<T: Scalar>(values: &mut [T]) -> Result<()> {
    fast_boolean_mobius_with_limit(values, DEFAULT_BOOLEAN_LIMIT)
}

pub fn fast_boolean_mobius_with_limit<T: Scalar>(values: &mut [T], limit: usize) -> Result<()> {
    check_boolean_len(values.len(), limit)?;
    boolean_pass(values, true);
    Ok(())
}

/// In-place inverse of [`fast_boolean_mobius`].
pub fn fast_boolean_zeta<T: Scalar>(values: &mut [T]) -> Result<()> {
    check_boolean_len(values.len(), DEFAULT_BOOLEAN_LIMIT)?;
    boolean_pass(values, false);
    Ok(())
}
