//! Derivatives, Möbius transforms and importance/interaction indices for
//! real-valued functions on products of finite lattices.
//!
//! Capacities (`2^n`) and bi-capacities (`3^n`) are the two classical
//! special cases; [`classical`] computes them directly on bitmasks and the
//! general engine ([`interaction`]) reproduces them on product lattices.

pub mod classical;
pub mod cli;
pub mod coeff;
pub mod derivative;
pub mod error;
pub mod interaction;
pub mod io;
pub mod lattice;
pub mod product;
pub mod transforms;
pub mod value;

pub use coeff::{alpha_from_beta, beta_from_alpha, CoefficientScheme, SchemeKind};
pub use derivative::{derivative, derivative_single, derivative_via_mobius, is_boolean_derivative};
pub use error::{Error, Result};
pub use interaction::{
    efficiency_check, importance, interaction_direct, interaction_mobius, recursion_check, reduced_function,
    restricted_function, CheckOutcome, InteractionReport, Method,
};
pub use lattice::{ElemId, FiniteLattice, StructureFlags};
pub use product::{Attribute, Irreducible, ProductElement, ProductLattice};
pub use transforms::{fast_boolean_mobius, fast_boolean_zeta, mobius, zeta, LatticeFunction, SparseFunction, Valuation};
pub use value::{Rational, Scalar};
