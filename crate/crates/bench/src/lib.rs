//! Benchmark fixtures. The benchmarks themselves live in `benches/`.

use tlkp_core::instances::{instance_rng, random_instance, small_rationals};
use tlkp_core::{ChainParams, Rational, SquareMatrix};

/// A reproducible spin-1/2 instance with `q = 2`.
pub fn fixture(n: usize, m: usize) -> (ChainParams<Rational>, Vec<Rational>, Vec<Rational>) {
    let p = ChainParams::spin_half(n, m, Rational::from_integer(2.into())).expect("valid chain");
    let (u, v) = random_instance(&p, &mut instance_rng(1, (10 * n + m) as u64)).expect("instance exists");
    (p, u, v)
}

/// A dense matrix of small rationals.
pub fn rational_matrix(dim: usize) -> SquareMatrix<Rational> {
    let mut rng = instance_rng(2, dim as u64);
    let entries: Vec<Rational> = small_rationals(&mut rng, dim * dim);
    SquareMatrix::from_fn(dim, |i, j| entries[i * dim + j].clone())
}
