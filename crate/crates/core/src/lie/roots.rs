use std::collections::HashMap;

use super::CartanMatrix;
use crate::error::{Error, Result};
use crate::linalg::Rational;

/// Highest root height is the Coxeter number minus one, at most 29 (E₈) for
/// the supported ranks.
const MAX_HEIGHT: i64 = 29;

/// Root system Φ of a finite-type Cartan matrix, in simple-root coordinates.
///
/// Roots are numbered `0..2P`: positive roots first, sorted by height and then
/// lexicographically descending (so the simple roots α₁, …, α_r come first),
/// followed by their negatives in the same order.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan: CartanMatrix,
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    positive: usize,
    /// `(α_i, α_j)` on simple roots.
    gram: Vec<Vec<Rational>>,
}

impl RootSystem {
    /// Enumerates Φ⁺ height by height via root strings:
    /// β + α_i ∈ Φ iff p − ⟨β, α_i∨⟩ > 0 where p is the length of the
    /// α_i-string below β.
    pub fn from_cartan(cartan: &CartanMatrix) -> Result<Self> {
        let r = cartan.rank();
        let simple: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut positive: Vec<Vec<i64>> = simple.clone();
        let mut known: HashMap<Vec<i64>, ()> = simple.iter().map(|s| (s.clone(), ())).collect();
        let mut layer = simple;
        let mut height = 1;
        while !layer.is_empty() {
            if height > MAX_HEIGHT {
                return Err(Error::InvalidCartan(format!(
                    "root closure exceeds height {MAX_HEIGHT}; not of finite type"
                )));
            }
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &layer {
                for i in 0..r {
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if known.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..r).map(|j| beta[j] * cartan.entry(i, j)).sum();
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !known.contains_key(&up) {
                            known.insert(up.clone(), ());
                            next.push(up);
                        }
                    }
                }
            }
            next.sort_by(|a, b| b.cmp(a));
            positive.extend(next.iter().cloned());
            layer = next;
            height += 1;
        }
        let pcount = positive.len();
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
        let index = roots.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let lengths = cartan.symmetrizer()?;
        let half = Rational::new(1, 2);
        let gram = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| &(&Rational::from_int(cartan.entry(i, j)) * &lengths[i]) * &half)
                    .collect()
            })
            .collect();
        Ok(RootSystem { cartan: cartan.clone(), roots, index, positive: pcount, gram })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn num_positive(&self) -> usize {
        self.positive
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.positive]
    }

    pub fn root(&self, id: usize) -> &[i64] {
        &self.roots[id]
    }

    pub fn is_positive(&self, id: usize) -> bool {
        id < self.positive
    }

    pub fn negate(&self, id: usize) -> usize {
        if id < self.positive {
            id + self.positive
        } else {
            id - self.positive
        }
    }

    pub fn find(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Id of `a + b` if it is a root.
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.find(&s)
    }

    pub fn height(&self, id: usize) -> i64 {
        self.roots[id].iter().sum()
    }

    pub fn highest_root(&self) -> usize {
        self.positive - 1
    }

    /// The invariant inner product on the root lattice.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Rational {
        let r = self.rank();
        let mut acc = Rational::ZERO;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                if b[j] != 0 {
                    acc += &(&self.gram[i][j] * &Rational::from_int(a[i] * b[j]));
                }
            }
        }
        acc
    }

    /// ⟨β, α_i∨⟩.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| beta[j] * self.cartan.entry(i, j)).sum()
    }

    /// Simple reflection s_i(β) = β − ⟨β, α_i∨⟩ α_i.
    pub fn reflect(&self, beta: &[i64], i: usize) -> Vec<i64> {
        let mut out = beta.to_vec();
        out[i] -= self.pairing(beta, i);
        out
    }

    /// max{k : b − k·a ∈ Φ}.
    pub fn string_below(&self, a: usize, b: usize) -> i64 {
        let mut k = 0;
        let mut cur = self.roots[b].clone();
        loop {
            for (c, x) in cur.iter_mut().zip(&self.roots[a]) {
                *c -= x;
            }
            if self.find(&cur).is_some() {
                k += 1;
            } else {
                return k;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(t: &str) -> RootSystem {
        RootSystem::from_cartan(&CartanMatrix::from_type(t).unwrap()).unwrap()
    }

    #[test]
    fn root_counts() {
        let expected = [
            ("A1", 1), ("A2", 3), ("A8", 36), ("B2", 4), ("B4", 16), ("C3", 9), ("D4", 12),
            ("D6", 30), ("E6", 36), ("E7", 63), ("E8", 120), ("F4", 24), ("G2", 6),
        ];
        for (t, n) in expected {
            assert_eq!(rs(t).num_positive(), n, "{t}");
        }
    }

    #[test]
    fn a2_roots() {
        let a2 = rs("A2");
        assert_eq!(a2.positive_roots(), &[vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn closed_under_reflections() {
        for t in ["A3", "B3", "C3", "G2", "F4", "D4"] {
            let r = rs(t);
            for id in 0..r.num_roots() {
                for i in 0..r.rank() {
                    assert!(r.find(&r.reflect(r.root(id), i)).is_some(), "{t}");
                }
            }
        }
    }

    #[test]
    fn highest_root_unique() {
        for t in ["A4", "B3", "G2", "E6", "F4"] {
            let r = rs(t);
            let h = r.highest_root();
            let top = r.height(h);
            assert_eq!((0..r.num_positive()).filter(|&i| r.height(i) == top).count(), 1, "{t}");
        }
        assert_eq!(rs("E8").height(rs("E8").highest_root()), 29);
    }

    #[test]
    fn affine_matrix_rejected() {
        // affine A1^(1)
        let m = CartanMatrix::new("affine", vec![vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(RootSystem::from_cartan(&m).is_err());
    }
}
