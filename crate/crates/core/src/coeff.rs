//! Coefficient families for importance and interaction indices.
//!
//! A scheme is fixed by its single-element family `α¹_k(n)`; the coalition
//! coefficients follow as `α^j_k(n) = α¹_k(n - j + 1)` and the Möbius-side
//! weights as `β^j_c = Σ_{l=0}^{n-c} C(n-c, l) α^j_{c-j+l}(n)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::value::{binomial, factorial, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Shapley,
    Banzhaf,
    Custom,
}

type AlphaFn = dyn Fn(usize, usize) -> Rational + Send + Sync;

#[derive(Clone)]
pub struct CoefficientScheme {
    kind: SchemeKind,
    name: String,
    alpha1: Arc<AlphaFn>,
}

impl fmt::Debug for CoefficientScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientScheme").field("name", &self.name).finish()
    }
}

impl CoefficientScheme {
    /// `α¹_k(n) = (n-1-k)! k! / n!`.
    pub fn shapley() -> Self {
        CoefficientScheme {
            kind: SchemeKind::Shapley,
            name: "shapley".into(),
            alpha1: Arc::new(|k, n| {
                if n == 0 || k >= n {
                    return Rational::zero();
                }
                Rational::new(factorial(n - 1 - k) * factorial(k), factorial(n))
            }),
        }
    }

    /// `α¹_k(n) = 1 / 2^(n-1)`.
    pub fn banzhaf() -> Self {
        CoefficientScheme {
            kind: SchemeKind::Banzhaf,
            name: "banzhaf".into(),
            alpha1: Arc::new(|k, n| {
                if n == 0 || k >= n {
                    return Rational::zero();
                }
                Rational::new(BigInt::one(), BigInt::one() << (n - 1))
            }),
        }
    }

    /// A user-supplied `α¹_k(n)`; called with `k < n` only.
    pub fn custom(name: &str, alpha1: impl Fn(usize, usize) -> Rational + Send + Sync + 'static) -> Self {
        CoefficientScheme { kind: SchemeKind::Custom, name: name.into(), alpha1: Arc::new(alpha1) }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "shapley" => Some(Self::shapley()),
            "banzhaf" => Some(Self::banzhaf()),
            _ => None,
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `α¹_k(n)`; zero outside `0 <= k < n`.
    pub fn alpha1(&self, k: usize, n: usize) -> Rational {
        if n == 0 || k >= n {
            Rational::zero()
        } else {
            (self.alpha1)(k, n)
        }
    }

    /// `α^j_k(n) = α¹_k(n - j + 1)`, for `1 <= j <= n`, `0 <= k <= n - j`.
    pub fn alpha(&self, j: usize, k: usize, n: usize) -> Rational {
        if j == 0 || j > n || k > n - j {
            return Rational::zero();
        }
        self.alpha1(k, n - j + 1)
    }

    /// `β^j_c(n)` for `j <= c <= n`.
    pub fn beta(&self, j: usize, c: usize, n: usize) -> Rational {
        if c < j || c > n {
            return Rational::zero();
        }
        (0..=n - c)
            .map(|l| Rational::from_integer(binomial(n - c, l)) * self.alpha(j, c - j + l, n))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// `[β^j_j(n), ..., β^j_n(n)]`.
    pub fn beta_vector(&self, j: usize, n: usize) -> Vec<Rational> {
        beta_from_alpha(&self.alpha_vector(j, n), j, n)
    }

    /// `[α^j_0(n), ..., α^j_{n-j}(n)]`.
    pub fn alpha_vector(&self, j: usize, n: usize) -> Vec<Rational> {
        if j == 0 || j > n {
            return Vec::new();
        }
        (0..=n - j).map(|k| self.alpha(j, k, n)).collect()
    }
}

/// Forward evaluation of the β/α relation: `alpha[k]` is `α^j_k(n)`, the
/// result's entry `c - j` is `β^j_c(n)`.
pub fn beta_from_alpha(alpha: &[Rational], j: usize, n: usize) -> Vec<Rational> {
    (j..=n)
        .map(|c| {
            (0..=n - c)
                .map(|l| Rational::from_integer(binomial(n - c, l)) * &alpha[c - j + l])
                .fold(Rational::zero(), |acc, t| acc + t)
        })
        .collect()
}

/// Solves the unit upper-triangular β/α system for `α^j_0..α^j_{n-j}`
/// given `β^j_j..β^j_n`.
pub fn alpha_from_beta(beta: &[Rational], j: usize, n: usize) -> Vec<Rational> {
    let size = n + 1 - j;
    assert_eq!(beta.len(), size, "beta vector must have n - j + 1 entries");
    let mut alpha = vec![Rational::zero(); size];
    // row c involves α_{c-j} .. α_{n-j}; the diagonal entry is C(n-c, 0) = 1
    for c in (j..=n).rev() {
        let mut rest = Rational::zero();
        for l in 1..=n - c {
            rest += Rational::from_integer(binomial(n - c, l)) * &alpha[c - j + l];
        }
        alpha[c - j] = &beta[c - j] - rest;
    }
    alpha
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    #[test]
    fn shapley_single_coefficients() {
        let s = CoefficientScheme::shapley();
        assert_eq!(s.alpha1(0, 1), rat(1, 1));
        assert_eq!(s.alpha1(0, 3), rat(1, 3));
        assert_eq!(s.alpha1(1, 3), rat(1, 6));
        assert_eq!(s.alpha1(2, 3), rat(1, 3));
        assert_eq!(s.alpha1(3, 3), rat(0, 1));
    }

    #[test]
    fn shapley_beta_is_reciprocal() {
        let s = CoefficientScheme::shapley();
        for n in 1..=8 {
            for c in 1..=n {
                assert_eq!(s.beta(1, c, n), rat(1, c as i64));
            }
        }
    }

    #[test]
    fn banzhaf_beta_small_case() {
        let b = CoefficientScheme::banzhaf();
        assert_eq!(b.beta(1, 3, 3), rat(1, 4));
        assert_eq!(b.beta(1, 1, 3), rat(1, 1));
        assert_eq!(b.alpha(2, 0, 3), rat(1, 2));
    }

    #[test]
    fn round_trip_through_triangular_system() {
        for scheme in [CoefficientScheme::shapley(), CoefficientScheme::banzhaf()] {
            for n in 1..=7 {
                for j in 1..=n {
                    let alpha = scheme.alpha_vector(j, n);
                    let beta = beta_from_alpha(&alpha, j, n);
                    assert_eq!(alpha_from_beta(&beta, j, n), alpha);
                }
            }
        }
    }

    #[test]
    fn custom_scheme_and_names() {
        let c = CoefficientScheme::custom("flat", |_, _| rat(1, 10));
        assert_eq!(c.kind(), SchemeKind::Custom);
        assert_eq!(c.alpha(2, 1, 4), rat(1, 10));
        assert_eq!(c.alpha(5, 0, 4), rat(0, 1));
        assert!(CoefficientScheme::from_name("shapley").is_some());
        assert!(CoefficientScheme::from_name("owen").is_none());
    }
}
