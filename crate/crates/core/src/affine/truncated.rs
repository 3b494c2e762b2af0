use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::OnceLock;

use super::{AffineVirasoro, BasisIndex, Element, Selector, TruncationWindow};
use crate::error::{Error, Result};
use crate::linalg::{canonicalize, kernel_of_rows, Rational, SparseRow, Subspace};
use crate::par;

/// 𝔏(g) (or a selected piece of it) on a window, with an indexed basis and a
/// precomputed bracket table.
#[derive(Debug)]
pub struct TruncatedAlgebra {
    alg: AffineVirasoro,
    window: TruncationWindow,
    selector: Selector,
    basis: Vec<BasisIndex>,
    index: HashMap<BasisIndex, usize>,
    ranges: BTreeMap<i64, Range<usize>>,
    table: Vec<SparseRow>,
    adjoint_columns: OnceLock<Vec<Vec<Vec<(usize, Rational)>>>>,
}

impl TruncatedAlgebra {
    pub fn new(alg: AffineVirasoro, window: TruncationWindow, selector: Selector) -> Self {
        let basis = alg.basis(window, selector);
        let index: HashMap<BasisIndex, usize> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut ranges: BTreeMap<i64, Range<usize>> = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            ranges.entry(b.degree()).and_modify(|r| r.end = i + 1).or_insert(i..i + 1);
        }
        let n = basis.len();
        let rows: Vec<Vec<SparseRow>> = par::map_indices(n, |i| {
            (0..n)
                .map(|j| {
                    let e = alg.raw_bracket(&basis[i], &basis[j]);
                    let row: SparseRow = e
                        .terms()
                        .filter_map(|(k, c)| index.get(k).map(|&k| (k, c.clone())))
                        .collect();
                    canonicalize(row)
                })
                .collect()
        });
        let table = rows.into_iter().flatten().collect();
        TruncatedAlgebra {
            alg,
            window,
            selector,
            basis,
            index,
            ranges,
            table,
            adjoint_columns: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &AffineVirasoro {
        &self.alg
    }

    pub fn window(&self) -> TruncationWindow {
        self.window
    }

    pub fn selector(&self) -> Selector {
        self.selector
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisIndex] {
        &self.basis
    }

    pub fn basis_index(&self, i: usize) -> BasisIndex {
        self.basis[i]
    }

    pub fn index_of(&self, b: &BasisIndex) -> Option<usize> {
        self.index.get(b).copied()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree()
    }

    pub fn in_window(&self, degree: i64) -> bool {
        if self.selector == Selector::SimpleG {
            degree == 0
        } else {
            self.window.contains(degree)
        }
    }

    /// Basis indices of the given degree (empty outside the window).
    pub fn degree_range(&self, degree: i64) -> Range<usize> {
        self.ranges.get(&degree).cloned().unwrap_or(0..0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranges.keys().copied()
    }

    /// Root-lattice weight of a basis element; d_m and K_i have weight 0.
    pub fn weight(&self, i: usize) -> &[i64] {
        static ZERO: [i64; 8] = [0; 8];
        match self.basis[i] {
            BasisIndex::Loop { g, .. } => self.alg.g().weight(g),
            _ => &ZERO[..self.alg.g().rank()],
        }
    }

    /// `[x_i, x_j]`, projected to the window and selector.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.basis.len() + j]
    }

    pub fn bracket_vec(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseRow {
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                out.extend(self.bracket(*i, *j).iter().map(|(k, c)| (*k, c * &ab)));
            }
        }
        canonicalize(out)
    }

    /// For each `a` and output `t`, the pairs `(s, c)` with `[x_a, x_s]` having
    /// coefficient `c` on `x_t`.
    pub fn adjoint_columns(&self) -> &Vec<Vec<Vec<(usize, Rational)>>> {
        self.adjoint_columns.get_or_init(|| {
            let n = self.dim();
            par::map_indices(n, |a| {
                let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
                for s in 0..n {
                    for (t, c) in self.bracket(a, s) {
                        cols[*t].push((s, c.clone()));
                    }
                }
                cols
            })
        })
    }

    pub fn label(&self, i: usize) -> String {
        self.alg.label(&self.basis[i])
    }

    pub fn to_element(&self, row: &[(usize, Rational)]) -> Element {
        Element::from_terms(row.iter().map(|(i, c)| (self.basis[*i], c.clone())))
    }

    pub fn to_row(&self, e: &Element) -> Result<SparseRow> {
        let mut row = Vec::with_capacity(e.len());
        for (b, c) in e.terms() {
            let i = self.index_of(b).ok_or_else(|| Error::OutOfWindow(self.alg.label(b)))?;
            row.push((i, c.clone()));
        }
        Ok(canonicalize(row))
    }

    /// Degree-0 elements v with `[v, x] = 0` for every basis element x of the
    /// window.
    ///
    /// Extreme-degree elements become spuriously central once brackets fall
    /// off the window, so only degree 0 is examined.
    pub fn center_degree0(&self) -> DegreeZeroCenter {
        let coords: Vec<usize> = self.degree_range(0).collect();
        let n = self.dim();
        let mut rows: BTreeMap<(usize, usize), SparseRow> = BTreeMap::new();
        for (col, &v) in coords.iter().enumerate() {
            for x in 0..n {
                for (t, c) in self.bracket(v, x) {
                    rows.entry((x, *t)).or_default().push((col, c.clone()));
                }
            }
        }
        let space = kernel_of_rows(coords.len(), rows.into_values().map(canonicalize));
        DegreeZeroCenter { coordinates: coords.iter().map(|&i| self.basis[i]).collect(), space }
    }
}

/// The degree-0 part of the center, in coordinates given by the degree-0
/// basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeZeroCenter {
    pub coordinates: Vec<BasisIndex>,
    pub space: Subspace,
}

impl DegreeZeroCenter {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Canonical basis vectors as elements of 𝔏(g).
    pub fn basis_elements(&self) -> Vec<Element> {
        self.space
            .basis()
            .iter()
            .map(|v| Element::from_terms(v.iter().map(|(i, c)| (self.coordinates[*i], c.clone()))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc(t: &str, n: i64, s: Selector) -> TruncatedAlgebra {
        AffineVirasoro::from_type(t).unwrap().truncate(TruncationWindow::new(n).unwrap(), s)
    }

    #[test]
    fn full_center_is_k1_k2() {
        let c = trunc("A1", 3, Selector::Full).center_degree0();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.basis_elements(), vec![Element::basis(BasisIndex::K1), Element::basis(BasisIndex::K2)]);
    }

    #[test]
    fn centerless_selectors() {
        assert_eq!(trunc("A1", 3, Selector::SimpleG).center_degree0().dim(), 0);
        assert_eq!(trunc("A1", 3, Selector::Quotient).center_degree0().dim(), 0);
        assert_eq!(trunc("A1", 3, Selector::Vir).center_degree0().dim(), 1);
        assert_eq!(trunc("A1", 3, Selector::GTilde).center_degree0().dim(), 1);
    }

    #[test]
    fn ranges_match_degrees() {
        let t = trunc("A2", 2, Selector::Full);
        for d in t.degrees() {
            for i in t.degree_range(d) {
                assert_eq!(t.degree(i), d);
            }
        }
        assert_eq!(t.degree_range(0).len(), 11);
        assert!(t.degree_range(5).is_empty());
    }

    #[test]
    fn adjoint_columns_transpose_table() {
        let t = trunc("A1", 2, Selector::Full);
        let cols = t.adjoint_columns();
        for a in 0..t.dim() {
            for s in 0..t.dim() {
                for (u, c) in t.bracket(a, s) {
                    assert!(cols[a][*u].contains(&(s, c.clone())));
                }
            }
        }
    }
}
