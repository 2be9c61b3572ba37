//! Naive reference implementations.
//!
//! Everything here is rebuilt from cover pairs alone: order by reachability,
//! joins by scanning for least upper bounds, decompositions by trying every
//! subset of join-irreducibles, coefficients from closed forms. Nothing calls
//! back into the crate's order, transform or index code.

#![allow(dead_code)]

use latint::product::ProductElement;
use latint::transforms::{LatticeFunction, Valuation};
use latint::value::{factorial, Rational};
use latint::ProductLattice;
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub const MAX_ORACLE_ELEMENTS: usize = 4096;

/// One attribute's order rebuilt from its covers.
pub struct NaiveAxis {
    pub size: usize,
    /// `leq[a][b]` iff `a <= b`.
    pub leq: Vec<Vec<bool>>,
}

impl NaiveAxis {
    pub fn new(size: usize, covers: &[(usize, usize)]) -> Self {
        let mut leq = vec![vec![false; size]; size];
        for a in 0..size {
            // depth-first reachability along covers
            let mut stack = vec![a];
            while let Some(u) = stack.pop() {
                if leq[a][u] {
                    continue;
                }
                leq[a][u] = true;
                for &(lo, hi) in covers {
                    if lo == u {
                        stack.push(hi);
                    }
                }
            }
        }
        NaiveAxis { size, leq }
    }

    pub fn bottom(&self) -> usize {
        (0..self.size).find(|&a| (0..self.size).all(|b| self.leq[a][b])).unwrap()
    }

    pub fn top(&self) -> usize {
        (0..self.size).find(|&a| (0..self.size).all(|b| self.leq[b][a])).unwrap()
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        let uppers: Vec<usize> = (0..self.size).filter(|&u| self.leq[a][u] && self.leq[b][u]).collect();
        *uppers.iter().find(|&&u| uppers.iter().all(|&w| self.leq[u][w])).unwrap()
    }

    fn strictly_below(&self, a: usize) -> Vec<usize> {
        (0..self.size).filter(|&b| b != a && self.leq[b][a]).collect()
    }

    /// Lower covers of `a`.
    pub fn lower_covers(&self, a: usize) -> Vec<usize> {
        let below = self.strictly_below(a);
        below
            .iter()
            .copied()
            .filter(|&b| !below.iter().any(|&c| c != b && self.leq[b][c]))
            .collect()
    }

    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.size).filter(|&a| self.lower_covers(a).len() == 1).collect()
    }

    /// The unique smallest set of join-irreducibles joining to `a`, if any.
    pub fn minimal_decomposition(&self, a: usize) -> Option<Vec<usize>> {
        let ji: Vec<usize> = self.join_irreducibles().into_iter().filter(|&j| self.leq[j][a]).collect();
        let bottom = self.bottom();
        let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
        for mask in 0u32..1 << ji.len() {
            let set: Vec<usize> = (0..ji.len()).filter(|b| mask >> b & 1 == 1).map(|b| ji[b]).collect();
            let joined = set.iter().fold(bottom, |acc, &j| self.join(acc, j));
            if joined != a {
                continue;
            }
            match &mut best {
                Some((size, sets)) if set.len() == *size => sets.push(set),
                Some((size, _)) if set.len() > *size => {}
                _ => best = Some((set.len(), vec![set])),
            }
        }
        match best {
            Some((_, sets)) if sets.len() == 1 => Some(sets.into_iter().next().unwrap()),
            _ => None,
        }
    }
}

pub fn axes(p: &ProductLattice) -> Vec<NaiveAxis> {
    p.lattices().map(|l| NaiveAxis::new(l.len(), l.covers())).collect()
}

fn all_elements(axes: &[NaiveAxis]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for ax in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..ax.size).map(move |e| {
                    let mut p = prefix.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    out
}

fn product_leq(axes: &[NaiveAxis], x: &[usize], y: &[usize]) -> bool {
    axes.iter().zip(x.iter().zip(y)).all(|(ax, (&a, &b))| ax.leq[a][b])
}

/// Möbius transform by solving `g(x) = Σ_{y<=x} m(y)` with forward
/// substitution, elements taken in increasing size of their downsets.
pub fn oracle_mobius(g: &LatticeFunction<Rational>) -> LatticeFunction<Rational> {
    let p = g.domain_arc();
    let axes = axes(p);
    let elems = all_elements(&axes);
    assert!(elems.len() <= MAX_ORACLE_ELEMENTS, "oracle size limit");
    let down: Vec<Vec<usize>> = elems
        .iter()
        .map(|x| (0..elems.len()).filter(|&j| product_leq(&axes, &elems[j], x)).collect())
        .collect();
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by_key(|&i| down[i].len());
    let mut m: Vec<Option<Rational>> = vec![None; elems.len()];
    for &i in &order {
        let x = ProductElement(elems[i].clone());
        let mut rest = g.get(&x).clone();
        for &j in &down[i] {
            if j != i {
                rest -= m[j].as_ref().expect("strictly lower elements come first");
            }
        }
        m[i] = Some(rest);
    }
    let mut out = g.clone();
    for (i, e) in elems.iter().enumerate() {
        out.set(&ProductElement(e.clone()), m[i].clone().unwrap());
    }
    out
}

/// `(attribute, element)` pairs of the minimal decomposition of `y`.
pub fn oracle_decomposition(axes: &[NaiveAxis], y: &[usize]) -> Option<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (k, ax) in axes.iter().enumerate() {
        if y[k] == ax.bottom() {
            continue;
        }
        for j in ax.minimal_decomposition(y[k])? {
            out.push((k, j));
        }
    }
    Some(out)
}

fn derivative_rec(
    f: &impl Valuation<Rational>,
    axes: &[NaiveAxis],
    members: &[(usize, usize)],
    x: &[usize],
) -> Rational {
    match members.split_last() {
        None => f.value(&ProductElement(x.to_vec())),
        Some((&(k, i), rest)) => {
            let mut up = x.to_vec();
            up[k] = axes[k].join(up[k], i);
            derivative_rec(f, axes, rest, &up) - derivative_rec(f, axes, rest, x)
        }
    }
}

/// `Δ_y f(x)` by the nested definition `Δ_{S∪i} = Δ_i Δ_S`.
pub fn oracle_derivative(f: &impl Valuation<Rational>, y: &ProductElement, x: &ProductElement) -> Option<Rational> {
    let axes = axes(f.domain());
    let members = oracle_decomposition(&axes, &y.0)?;
    Some(derivative_rec(f, &axes, &members, &x.0))
}

/// Closed-form `α^j_k(n)`.
pub fn oracle_alpha(scheme: &str, j: usize, k: usize, n: usize) -> Rational {
    match scheme {
        "shapley" => Rational::new(factorial(n - j - k) * factorial(k), factorial(n - j + 1)),
        "banzhaf" => Rational::new(BigInt::one(), BigInt::one() << (n - j)),
        other => panic!("no closed form for {other}"),
    }
}

/// `I(x)` by scanning every element for the admissible completions.
pub fn oracle_interaction(v: &impl Valuation<Rational>, x: &ProductElement, scheme: &str) -> Option<Rational> {
    let p = v.domain();
    let axes = axes(p);
    let n = axes.len();
    let support: Vec<usize> = (0..n).filter(|&k| x.0[k] != axes[k].bottom()).collect();
    if support.is_empty() {
        return None;
    }
    let mut under = vec![None; n];
    for &k in &support {
        let members = axes[k].minimal_decomposition(x.0[k])?;
        let preds: Vec<Vec<usize>> = members.iter().map(|&i| axes[k].lower_covers(i)).collect();
        if preds.iter().any(|pc| *pc != preds[0]) {
            return None;
        }
        under[k] = Some(preds[0][0]);
    }
    let members = oracle_decomposition(&axes, &x.0)?;
    let j = support.len();
    let mut total = Rational::zero();
    for y in all_elements(&axes) {
        let admissible = (0..n).all(|k| match under[k] {
            Some(u) => y[k] == u,
            None => y[k] == axes[k].bottom() || y[k] == axes[k].top(),
        });
        if !admissible {
            continue;
        }
        let h = (0..n).filter(|&k| y[k] == axes[k].top()).count();
        total += oracle_alpha(scheme, j, h, n) * derivative_rec(v, &axes, &members, &y);
    }
    Some(total)
}

impl NaiveAxis {
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let lowers: Vec<usize> = (0..self.size).filter(|&l| self.leq[l][a] && self.leq[l][b]).collect();
        *lowers.iter().find(|&&l| lowers.iter().all(|&w| self.leq[w][l])).unwrap()
    }
}
