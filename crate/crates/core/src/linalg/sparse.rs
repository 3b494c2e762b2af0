use std::collections::BTreeMap;

use super::Rational;
use crate::error::{Error, Result};

/// A sparse vector: `(column, value)` pairs sorted by column, no zeros stored.
pub type SparseRow = Vec<(usize, Rational)>;

/// Sort by column, merge duplicates and drop zeros.
pub fn canonicalize(mut row: SparseRow) -> SparseRow {
    row.sort_by_key(|(c, _)| *c);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += &v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// `a - factor * b` for canonical rows.
pub fn sub_scaled(a: &[(usize, Rational)], factor: &Rational, b: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ca, va) = &a[i];
        let (cb, vb) = &b[j];
        if ca < cb {
            out.push((*ca, va.clone()));
            i += 1;
        } else if cb < ca {
            out.push((*cb, -(factor * vb)));
            j += 1;
        } else {
            let v = va - &(factor * vb);
            if !v.is_zero() {
                out.push((*ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(c, v)| (*c, -(factor * v))));
    out
}

pub fn scale(row: &mut SparseRow, factor: &Rational) {
    for (_, v) in row.iter_mut() {
        *v *= factor;
    }
}

/// Value at `col`, or zero.
pub fn get(row: &[(usize, Rational)], col: usize) -> Rational {
    match row.binary_search_by_key(&col, |(c, _)| *c) {
        Ok(i) => row[i].1.clone(),
        Err(_) => Rational::ZERO,
    }
}

pub fn dot_dense(row: &[(usize, Rational)], v: &[Rational]) -> Rational {
    row.iter().map(|(c, x)| x * &v[*c]).sum()
}

/// A sparse matrix over ℚ with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::ONE);
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect();
        Self::from_dense(&dense)
    }

    pub fn from_rows(cols: usize, rows: &[SparseRow]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r {
                if *j >= cols {
                    return Err(Error::DimensionMismatch { expected: cols, found: *j + 1 });
                }
                m.set(i, *j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries.get(&(r, c)).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.entries.iter().map(|((r, c), v)| (*r, *c, v))
    }

    pub fn to_rows(&self) -> Vec<SparseRow> {
        let mut out = vec![Vec::new(); self.rows];
        for ((r, c), v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out
    }

    pub fn mul_dense(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rational::ZERO; self.rows];
        for ((r, c), x) in &self.entries {
            out[*r] += &(x * &v[*c]);
        }
        out
    }

    pub fn mul_sparse(&self, v: &[(usize, Rational)]) -> Vec<Rational> {
        let mut dense = vec![Rational::ZERO; self.cols];
        for (c, x) in v {
            dense[*c] = x.clone();
        }
        self.mul_dense(&dense)
    }
}
