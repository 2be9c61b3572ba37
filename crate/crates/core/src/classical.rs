//! Capacities on `2^n` and bi-capacities on `3^n`.
//!
//! Players are numbered `0..n` and coalitions are bitmasks, bit `i` for
//! player `i`. A bi-capacity stores `v(A, B)` at the base-3 index whose
//! digit `i` is `2` when `i ∈ A`, `0` when `i ∈ B` and `1` otherwise, which
//! is the level of player `i` on the chain `-1 < 0 < 1` shifted by one.

use std::sync::Arc;

use rayon::prelude::*;

use crate::coeff::CoefficientScheme;
use crate::error::{Error, Result};
use crate::product::{ProductElement, ProductLattice};
use crate::transforms::{fast_boolean_mobius, LatticeFunction, DEFAULT_BOOLEAN_LIMIT};
use crate::value::{Rational, Scalar};

pub const MAX_BICAPACITY_PLAYERS: usize = 15;

fn coeffs<T: Scalar>(values: impl IntoIterator<Item = Rational>) -> Vec<T> {
    values.into_iter().map(|r| T::from_rational(&r)).collect()
}

fn check_player(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

fn check_mask(mask: u32, n: usize) -> Result<()> {
    if n < 32 && mask >> n != 0 {
        return Err(Error::IndexOutOfRange { index: 31 - mask.leading_zeros() as usize, n });
    }
    Ok(())
}

/// Iterates the submasks of `mask`, `mask` itself first, `0` last.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Bitmask from a list of player indices.
pub fn coalition(players: &[usize]) -> u32 {
    players.iter().fold(0, |m, &i| m | 1 << i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub lower: String,
    pub upper: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityFlags {
    pub is_game: bool,
    pub is_normalized: bool,
    pub is_monotone: bool,
    /// First pair `A ⊂ B` found with `v(A) > v(B)`.
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiCapacityFlags {
    /// `v(N,∅) = 1`, `v(∅,∅) = 0`, `v(∅,N) = -1`.
    pub boundary: bool,
    pub is_monotone: bool,
    pub violation: Option<Violation>,
}

fn set_string(mask: u32, n: usize) -> String {
    let items: Vec<String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Set function on `2^n`, dense by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> Capacity<T> {
    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        if n == 0 || n > DEFAULT_BOOLEAN_LIMIT {
            return Err(Error::Size { what: "capacity players", requested: n as u128, limit: DEFAULT_BOOLEAN_LIMIT as u128 });
        }
        if values.len() != 1 << n {
            return Err(Error::ValueCount { expected: 1 << n, found: values.len() });
        }
        Ok(Capacity { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> T) -> Result<Self> {
        if n == 0 || n > DEFAULT_BOOLEAN_LIMIT {
            return Err(Error::Size { what: "capacity players", requested: n as u128, limit: DEFAULT_BOOLEAN_LIMIT as u128 });
        }
        Ok(Capacity { n, values: (0..1u32 << n).map(f).collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn value(&self, mask: u32) -> &T {
        &self.values[mask as usize]
    }

    /// `Δ_S v(T) = Σ_{L ⊆ S} (-1)^{|S|-|L|} v(T ∪ L)`, for `S ∩ T = ∅`.
    pub fn derivative(&self, s: u32, t: u32) -> T {
        let size = s.count_ones();
        let mut total = T::zero();
        for l in submasks(s) {
            let v = self.values[(t | l) as usize].clone();
            if (size - l.count_ones()).is_multiple_of(2) {
                total += v;
            } else {
                total -= v;
            }
        }
        total
    }

    /// `φ(i) = Σ_{S ⊆ N∖i} α¹_s [v(S ∪ i) - v(S)]`.
    pub fn power_index(&self, i: usize, scheme: &CoefficientScheme) -> Result<T> {
        check_player(i, self.n)?;
        let alpha: Vec<T> = coeffs((0..self.n).map(|s| scheme.alpha1(s, self.n)));
        let rest = self.full() & !(1 << i);
        let mut total = T::zero();
        for s in submasks(rest) {
            let d = self.values[(s | 1 << i) as usize].clone() - self.values[s as usize].clone();
            total += alpha[s.count_ones() as usize].clone() * d;
        }
        Ok(total)
    }

    pub fn shapley_value(&self, i: usize) -> Result<T> {
        self.power_index(i, &CoefficientScheme::shapley())
    }

    pub fn banzhaf_value(&self, i: usize) -> Result<T> {
        self.power_index(i, &CoefficientScheme::banzhaf())
    }

    /// `I(S) = Σ_{T ⊆ N∖S} α^s_t Δ_S v(T)`.
    pub fn interaction_index(&self, s: u32, scheme: &CoefficientScheme) -> Result<T> {
        check_mask(s, self.n)?;
        if s == 0 {
            return Err(Error::EmptyCoalition);
        }
        let j = s.count_ones() as usize;
        let alpha: Vec<T> = coeffs((0..=self.n - j).map(|t| scheme.alpha(j, t, self.n)));
        let mut total = T::zero();
        for t in submasks(self.full() & !s) {
            total += alpha[t.count_ones() as usize].clone() * self.derivative(s, t);
        }
        Ok(total)
    }

    /// Möbius transform by bitmask.
    pub fn mobius(&self) -> Vec<T> {
        let mut m = self.values.clone();
        fast_boolean_mobius(&mut m).expect("capacity size is within the Boolean limit");
        m
    }

    /// `I(S)` for every coalition, indexed by bitmask (entry `0` is zero).
    ///
    /// Uses `I(S) = Σ_{T ⊇ S} β^s_t m(T)`: the Möbius masses of supersets are
    /// accumulated per superset size with a ranked superset-sum transform.
    pub fn all_interactions(&self, scheme: &CoefficientScheme) -> Vec<T> {
        let n = self.n;
        let len = 1usize << n;
        let m = self.mobius();
        // ranked[S][c] = Σ_{T ⊇ S, |T| = c} m(T)
        let width = n + 1;
        let mut ranked = vec![T::zero(); len * width];
        for (t, mt) in m.into_iter().enumerate() {
            ranked[t * width + t.count_ones() as usize] = mt;
        }
        for b in 0..n {
            let half = (1usize << b) * width;
            ranked.par_chunks_mut(2 * half).for_each(|block| {
                let (lo, hi) = block.split_at_mut(half);
                for (x, y) in lo.iter_mut().zip(hi.iter()) {
                    *x += y;
                }
            });
        }
        let beta: Vec<Vec<T>> = (0..=n).map(|j| coeffs((0..=n).map(|c| scheme.beta(j, c, n)))).collect();
        let mut out = vec![T::zero(); len];
        out.par_iter_mut().enumerate().skip(1).for_each(|(s, slot)| {
            let j = s.count_ones() as usize;
            let row = &ranked[s * width..(s + 1) * width];
            let mut total = T::zero();
            for c in j..=n {
                total += beta[j][c].clone() * row[c].clone();
            }
            *slot = total;
        });
        out
    }

    /// `v^{N∖K}`: the players outside `K`, renumbered in increasing order.
    pub fn restricted(&self, k: u32) -> Result<Capacity<T>> {
        check_mask(k, self.n)?;
        let keep: Vec<usize> = (0..self.n).filter(|i| k >> i & 1 == 0).collect();
        if keep.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        Capacity::from_fn(keep.len(), |s| {
            let full = keep.iter().enumerate().filter(|(b, _)| s >> b & 1 == 1).fold(0, |m, (_, &i)| m | 1 << i);
            self.values[full as usize].clone()
        })
    }

    /// `v_[S]`: the players outside `S` renumbered in increasing order, then
    /// `[S]` as the last player.
    pub fn reduced(&self, s: u32) -> Result<Capacity<T>> {
        check_mask(s, self.n)?;
        if s == 0 {
            return Err(Error::EmptyCoalition);
        }
        let keep: Vec<usize> = (0..self.n).filter(|i| s >> i & 1 == 0).collect();
        let merged = keep.len();
        Capacity::from_fn(merged + 1, |t| {
            let mut full = keep.iter().enumerate().filter(|(b, _)| t >> b & 1 == 1).fold(0, |m, (_, &i)| m | 1 << i);
            if t >> merged & 1 == 1 {
                full |= s;
            }
            self.values[full as usize].clone()
        })
    }

    pub fn validate(&self) -> CapacityFlags {
        let mut violation = None;
        'outer: for a in 0..self.values.len() {
            for i in 0..self.n {
                let b = a | 1 << i;
                if b != a && self.values[a] > self.values[b] {
                    violation = Some(Violation { lower: set_string(a as u32, self.n), upper: set_string(b as u32, self.n) });
                    break 'outer;
                }
            }
        }
        let one = T::from_rational(&Rational::from_integer(1.into()));
        CapacityFlags {
            is_game: self.values[0] == T::zero(),
            is_normalized: self.values[self.full() as usize] == one,
            is_monotone: violation.is_none(),
            violation,
        }
    }

    /// The same function on [`ProductLattice::boolean`].
    pub fn to_lattice_function(&self) -> Result<LatticeFunction<T>> {
        let domain = Arc::new(ProductLattice::boolean(self.n)?);
        LatticeFunction::from_fn(domain, |x| self.values[boolean_mask(x) as usize].clone())
    }

    /// Reads a function on a product of two-element chains.
    pub fn from_lattice_function(f: &LatticeFunction<T>) -> Result<Self> {
        let domain = f.domain_arc();
        if let Some(l) = domain.lattices().find(|l| l.len() != 2) {
            return Err(Error::NotLinear(format!("{} is not a two-element chain", l.name())));
        }
        Capacity::from_fn(domain.n(), |mask| {
            let x = ProductElement((0..domain.n()).map(|k| {
                let l = domain.lattice(k);
                if mask >> k & 1 == 1 { l.top() } else { l.bottom() }
            }).collect());
            f.get(&x).clone()
        })
    }
}

fn boolean_mask(x: &ProductElement) -> u32 {
    x.coords().iter().enumerate().filter(|(_, &c)| c == 1).fold(0, |m, (k, _)| m | 1 << k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// Function on `Q(N) = {(A, B) : A ∩ B = ∅}`, dense by base-3 index.
#[derive(Debug, Clone, PartialEq)]
pub struct BiCapacity<T> {
    n: usize,
    values: Vec<T>,
    pow3: Vec<usize>,
}

fn powers_of_three(n: usize) -> Vec<usize> {
    (0..=n).map(|k| 3usize.pow(k as u32)).collect()
}

impl<T: Scalar> BiCapacity<T> {
    fn check_n(n: usize) -> Result<()> {
        if n == 0 || n > MAX_BICAPACITY_PLAYERS {
            return Err(Error::Size { what: "bi-capacity players", requested: n as u128, limit: MAX_BICAPACITY_PLAYERS as u128 });
        }
        Ok(())
    }

    pub fn new(n: usize, values: Vec<T>) -> Result<Self> {
        Self::check_n(n)?;
        let pow3 = powers_of_three(n);
        if values.len() != pow3[n] {
            return Err(Error::ValueCount { expected: pow3[n], found: values.len() });
        }
        Ok(BiCapacity { n, values, pow3 })
    }

    /// Builds `v` from `f(A, B)`.
    pub fn from_fn(n: usize, f: impl Fn(u32, u32) -> T) -> Result<Self> {
        Self::check_n(n)?;
        let pow3 = powers_of_three(n);
        let values = (0..pow3[n])
            .map(|idx| {
                let (a, b) = decode(idx, n);
                f(a, b)
            })
            .collect();
        Ok(BiCapacity { n, values, pow3 })
    }

    /// `v(A, B) := μ(A)`.
    pub fn from_capacity(mu: &Capacity<T>) -> Result<Self> {
        Self::from_fn(mu.n(), |a, _| mu.value(a).clone())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn index(&self, a: u32, b: u32) -> Result<usize> {
        check_mask(a | b, self.n)?;
        if a & b != 0 {
            return Err(Error::NotDisjoint);
        }
        Ok(self.index_unchecked(a, b))
    }

    fn index_unchecked(&self, a: u32, b: u32) -> usize {
        (0..self.n)
            .map(|i| {
                let digit = if a >> i & 1 == 1 { 2 } else if b >> i & 1 == 1 { 0 } else { 1 };
                digit * self.pow3[i]
            })
            .sum()
    }

    pub fn value(&self, a: u32, b: u32) -> Result<&T> {
        Ok(&self.values[self.index(a, b)?])
    }

    fn at(&self, a: u32, b: u32) -> T {
        self.values[self.index_unchecked(a, b)].clone()
    }

    /// `Δ_{S,T} v(A, B) = Σ_{L ⊆ S, M ⊆ T} (-1)^{|S∖L| + |T∖M|} v(A ∪ L, B ∖ M)`.
    pub fn derivative(&self, s: u32, t: u32, a: u32, b: u32) -> T {
        let size = s.count_ones() + t.count_ones();
        let mut total = T::zero();
        for l in submasks(s) {
            for m in submasks(t) {
                let v = self.at(a | l, b & !m);
                if (size - l.count_ones() - m.count_ones()).is_multiple_of(2) {
                    total += v;
                } else {
                    total -= v;
                }
            }
        }
        total
    }

    /// `I(i, ∅)` or `I(∅, i)`: the average contribution of `i` acting as a
    /// positive or as a negative element.
    pub fn importance(&self, i: usize, sign: Sign, scheme: &CoefficientScheme) -> Result<T> {
        check_player(i, self.n)?;
        let alpha: Vec<T> = coeffs((0..self.n).map(|s| scheme.alpha1(s, self.n)));
        let full = self.full();
        let bit = 1u32 << i;
        let mut total = T::zero();
        for s in submasks(full & !bit) {
            let d = match sign {
                Sign::Positive => {
                    let b = full & !(s | bit);
                    self.at(s | bit, b) - self.at(s, b)
                }
                Sign::Negative => {
                    let b = full & !s;
                    self.at(s, b & !bit) - self.at(s, b)
                }
            };
            total += alpha[s.count_ones() as usize].clone() * d;
        }
        Ok(total)
    }

    /// `I_{S,T} = Σ_{K ⊆ N∖(S∪T)} α^{s+t}_k Δ_{S,T} v(K, N∖(K∪S))`.
    pub fn interaction(&self, s: u32, t: u32, scheme: &CoefficientScheme) -> Result<T> {
        check_mask(s | t, self.n)?;
        if s & t != 0 {
            return Err(Error::NotDisjoint);
        }
        if s | t == 0 {
            return Err(Error::EmptyCoalition);
        }
        let n = self.n;
        let j = (s | t).count_ones() as usize;
        let alpha: Vec<T> = coeffs((0..=n - j).map(|k| scheme.alpha(j, k, n)));
        let full = self.full();
        let mut total = T::zero();
        for k in submasks(full & !(s | t)) {
            let d = self.derivative(s, t, k, full & !(k | s));
            total += alpha[k.count_ones() as usize].clone() * d;
        }
        Ok(total)
    }

    /// Möbius transform by base-3 index: successive differences along every
    /// player's three levels.
    pub fn mobius(&self) -> Vec<T> {
        let mut m = self.values.clone();
        for i in 0..self.n {
            let stride = self.pow3[i];
            for idx in 0..m.len() {
                let digit = idx / stride % 3;
                // descending levels so each difference uses the original lower value
                if digit == 0 {
                    let (lo, mid, hi) = (idx, idx + stride, idx + 2 * stride);
                    let top = m[hi].clone() - m[mid].clone();
                    let middle = m[mid].clone() - m[lo].clone();
                    m[hi] = top;
                    m[mid] = middle;
                }
            }
        }
        m
    }

    /// `I(A, B)` for the corner `(A, B)` from the Möbius masses `m`:
    /// `Σ_{(A',B') ∈ [(A,B), (A∪B, ∅)]} β m(A', B')`, with
    /// `β = 1/(|B| - |B'| + 1)` for the Shapley scheme. It equals
    /// [`BiCapacity::interaction`] at `(A, N∖(A∪B))`.
    pub fn corner_interaction_mobius(&self, m: &[T], a: u32, b: u32, scheme: &CoefficientScheme) -> Result<T> {
        check_mask(a | b, self.n)?;
        if a & b != 0 {
            return Err(Error::NotDisjoint);
        }
        if b == self.full() {
            return Err(Error::EmptyTarget);
        }
        let n = self.n;
        let j = n - b.count_ones() as usize;
        let beta: Vec<T> = coeffs((0..=n).map(|c| scheme.beta(j, c, n)));
        let mut total = T::zero();
        // each member of B stays in B, turns neutral, or joins A
        for up in submasks(b) {
            for stay in submasks(b & !up) {
                let c = n - stay.count_ones() as usize;
                total += beta[c].clone() * m[self.index_unchecked(a | up, stay)].clone();
            }
        }
        Ok(total)
    }

    pub fn validate(&self) -> BiCapacityFlags {
        let full = self.full();
        let one = T::from_rational(&Rational::from_integer(1.into()));
        let boundary = self.at(full, 0) == one && self.at(0, 0) == T::zero() && self.at(0, full) == -one;
        let label = |a: u32, b: u32| format!("({},{})", set_string(a, self.n), set_string(b, self.n));
        let mut violation = None;
        'outer: for idx in 0..self.values.len() {
            let (a, b) = decode(idx, self.n);
            for i in 0..self.n {
                let bit = 1 << i;
                // one step up the order: B → neutral or neutral → A
                let up = if b & bit != 0 {
                    Some((a, b & !bit))
                } else if a & bit == 0 {
                    Some((a | bit, b))
                } else {
                    None
                };
                if let Some((a2, b2)) = up {
                    if self.at(a, b) > self.at(a2, b2) {
                        violation = Some(Violation { lower: label(a, b), upper: label(a2, b2) });
                        break 'outer;
                    }
                }
            }
        }
        BiCapacityFlags { boundary, is_monotone: violation.is_none(), violation }
    }

    /// The same function on [`ProductLattice::ternary`].
    pub fn to_lattice_function(&self) -> Result<LatticeFunction<T>> {
        let domain = Arc::new(ProductLattice::ternary(self.n)?);
        LatticeFunction::from_fn(domain, |x| {
            let idx: usize = x.coords().iter().enumerate().map(|(i, &c)| c * self.pow3[i]).sum();
            self.values[idx].clone()
        })
    }

    /// Reads a function on a product of three-element chains.
    pub fn from_lattice_function(f: &LatticeFunction<T>) -> Result<Self> {
        let domain = f.domain_arc();
        if let Some(l) = domain.lattices().find(|l| l.len() != 3 || !l.flags().is_linear) {
            return Err(Error::NotLinear(format!("{} is not a three-element chain", l.name())));
        }
        let n = domain.n();
        Self::check_n(n)?;
        let pow3 = powers_of_three(n);
        let values = (0..pow3[n])
            .map(|idx| {
                let x = ProductElement((0..n).map(|i| domain.lattice(i).linear_extension()[idx / pow3[i] % 3]).collect());
                f.get(&x).clone()
            })
            .collect();
        Ok(BiCapacity { n, values, pow3 })
    }
}

/// `(A, B)` of a base-3 index.
fn decode(mut idx: usize, n: usize) -> (u32, u32) {
    let (mut a, mut b) = (0u32, 0u32);
    for i in 0..n {
        match idx % 3 {
            0 => b |= 1 << i,
            2 => a |= 1 << i,
            _ => {}
        }
        idx /= 3;
    }
    (a, b)
}

/// The element of `3^n` at which the general index equals `I_{S,T}`:
/// `S` at `1`, `T` at `0`, everything else at `-1`.
pub fn ternary_target(n: usize, s: u32, t: u32) -> ProductElement {
    ProductElement(
        (0..n)
            .map(|i| if s >> i & 1 == 1 { 2 } else if t >> i & 1 == 1 { 1 } else { 0 })
            .collect(),
    )
}

/// The element of `2^n` for coalition `S`.
pub fn boolean_target(n: usize, s: u32) -> ProductElement {
    ProductElement((0..n).map(|i| (s >> i & 1) as usize).collect())
}
