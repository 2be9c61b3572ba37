#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;
use std::sync::Arc;

use latint::classical::Capacity;
use latint::transforms::LatticeFunction;
use latint::value::{rat, Rational};
use latint::{FiniteLattice, ProductLattice};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-30..=30), rng.gen_range(1..=7))
}

pub fn random_function(p: &Arc<ProductLattice>, rng: &mut impl Rng) -> LatticeFunction<Rational> {
    let size = p.enumerable_size().unwrap();
    LatticeFunction::new(Arc::clone(p), (0..size).map(|_| random_rational(rng)).collect()).unwrap()
}

pub fn random_capacity(n: usize, rng: &mut impl Rng) -> Capacity<Rational> {
    let values: Vec<Rational> = (0..1usize << n).map(|_| random_rational(rng)).collect();
    Capacity::new(n, values).unwrap()
}

pub fn chains(lengths: &[usize]) -> Arc<ProductLattice> {
    let lattices = lengths
        .iter()
        .enumerate()
        .map(|(k, &m)| FiniteLattice::chain_of(&format!("c{k}"), m).unwrap())
        .collect();
    Arc::new(ProductLattice::from_lattices(lattices).unwrap())
}

pub fn boolean(n: usize) -> Arc<ProductLattice> {
    Arc::new(ProductLattice::boolean(n).unwrap())
}

pub fn ternary(n: usize) -> Arc<ProductLattice> {
    Arc::new(ProductLattice::ternary(n).unwrap())
}

/// Diamond (`2^2`) times a three-element chain.
pub fn diamond_chain() -> Arc<ProductLattice> {
    Arc::new(
        ProductLattice::from_lattices(vec![FiniteLattice::diamond("d"), FiniteLattice::chain_of("c", 3).unwrap()])
            .unwrap(),
    )
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}
