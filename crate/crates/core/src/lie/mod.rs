//! Finite-dimensional simple Lie algebras from Cartan data.

mod algebra;
mod cartan;
mod roots;

pub use algebra::{FormNormalization, SimpleLieAlgebra};
pub use cartan::{CartanMatrix, MAX_RANK};
pub use roots::RootSystem;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{canonicalize, Rational, SparseRow};
use crate::par;

/// [[x,y],z] + [[y,z],x] + [[z,x],y] for basis elements.
pub fn jacobiator(g: &SimpleLieAlgebra, x: usize, y: usize, z: usize) -> SparseRow {
    let one = |i: usize| vec![(i, Rational::ONE)];
    let mut acc = Vec::new();
    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
        acc.extend(g.bracket_vec(g.bracket(a, b), &one(c)));
    }
    canonicalize(acc)
}

/// Basis triples violating the Jacobi identity. Exhaustive over unordered
/// triples when `samples` is `None`, otherwise `samples` seeded random triples.
pub fn jacobi_violations(g: &SimpleLieAlgebra, samples: Option<(usize, u64)>) -> Vec<(usize, usize, usize)> {
    let n = g.dim();
    match samples {
        None => par::map_indices(n, |x| {
            let mut bad = Vec::new();
            for y in x..n {
                for z in y..n {
                    if !jacobiator(g, x, y, z).is_empty() {
                        bad.push((x, y, z));
                    }
                }
            }
            bad
        })
        .into_iter()
        .flatten()
        .collect(),
        Some((count, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<(usize, usize, usize)> =
                (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            par::map_slice(&triples, |&(x, y, z)| (!jacobiator(g, x, y, z).is_empty()).then_some((x, y, z)))
                .into_iter()
                .flatten()
                .collect()
        }
    }
}

/// Basis triples with κ([x,y],z) ≠ κ(x,[y,z]).
pub fn killing_invariance_violations(g: &SimpleLieAlgebra) -> Vec<(usize, usize, usize)> {
    let n = g.dim();
    let norm = FormNormalization::Killing;
    par::map_indices(n, |x| {
        let mut bad = Vec::new();
        for y in 0..n {
            for z in 0..n {
                let lhs = g.form_on(g.bracket(x, y), &[(z, Rational::ONE)], norm);
                let rhs = g.form_on(&[(x, Rational::ONE)], g.bracket(y, z), norm);
                if lhs != rhs {
                    bad.push((x, y, z));
                }
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect()
}
