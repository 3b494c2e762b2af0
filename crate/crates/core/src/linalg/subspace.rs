use super::echelon::EchelonBuilder;
use super::sparse::{get, sub_scaled, SparseRow};
use super::Rational;
use crate::error::{Error, Result};

/// A finite-dimensional subspace of ℚ^n held as its unique reduced row echelon
/// basis, so two subspaces are equal iff their bases are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseRow>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(|i| vec![(i, Rational::ONE)]).collect() }
    }

    /// Span of arbitrary sparse vectors.
    pub fn from_vectors<I>(ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = SparseRow>,
    {
        let mut b = EchelonBuilder::new(ambient);
        for v in vectors {
            if let Some((c, _)) = v.last() {
                if *c >= ambient {
                    return Err(Error::DimensionMismatch { expected: ambient, found: c + 1 });
                }
            }
            b.insert(super::sparse::canonicalize(v));
        }
        Ok(Subspace { ambient, basis: b.into_rref() })
    }

    /// Wraps a basis already known to be in reduced echelon form.
    pub(crate) fn from_canonical(ambient: usize, basis: Vec<SparseRow>) -> Self {
        debug_assert!(is_rref(&basis));
        Subspace { ambient, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[SparseRow] {
        &self.basis
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis.iter().map(|v| v[0].0)
    }

    fn residual(&self, v: &[(usize, Rational)]) -> SparseRow {
        let mut r = super::sparse::canonicalize(v.to_vec());
        for b in &self.basis {
            let f = get(&r, b[0].0);
            if !f.is_zero() {
                r = sub_scaled(&r, &f, b);
            }
        }
        r
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> Result<bool> {
        if let Some((c, _)) = v.iter().max_by_key(|(c, _)| *c) {
            if *c >= self.ambient {
                return Err(Error::DimensionMismatch { expected: self.ambient, found: c + 1 });
            }
        }
        Ok(self.residual(v).is_empty())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(other.basis.iter().all(|v| self.residual(v).is_empty()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Subspace::from_vectors(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    /// Dimension of the intersection, from dim(A) + dim(B) − dim(A + B).
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.sum(other)?.dim())
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self == other)
    }

    /// Image under the coordinate projection onto `coords` (which become the
    /// coordinates `0..coords.len()` of the result).
    pub fn project(&self, coords: &[usize]) -> Subspace {
        let mut position = vec![usize::MAX; self.ambient];
        for (i, &c) in coords.iter().enumerate() {
            position[c] = i;
        }
        let vectors = self.basis.iter().map(|v| {
            v.iter()
                .filter(|(c, _)| position[*c] != usize::MAX)
                .map(|(c, x)| (position[*c], x.clone()))
                .collect::<SparseRow>()
        });
        Subspace::from_vectors(coords.len(), vectors).expect("projected coordinates in range")
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }
}

fn is_rref(basis: &[SparseRow]) -> bool {
    let leads: Vec<usize> = basis.iter().map(|v| v.first().map_or(usize::MAX, |x| x.0)).collect();
    leads.windows(2).all(|w| w[0] < w[1])
        && basis.iter().all(|v| v.first().is_some_and(|(_, x)| x.is_one()))
        && basis.iter().enumerate().all(|(i, v)| {
            leads.iter().enumerate().all(|(j, &l)| i == j || get(v, l).is_zero())
        })
}
