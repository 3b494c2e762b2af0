//! Elimination kernels: a batch Gauss–Jordan reducer for explicit matrices and
//! a streaming echelon builder for large constraint systems.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Mutex;

use super::sparse::{get, scale, sub_scaled, SparseMatrix, SparseRow};
use super::{Rational, Subspace};
use crate::par;

/// Reduced row echelon form of `m`, with its rank.
///
/// Pivot choice within a column: the candidate entry of smallest
/// [`Rational::bit_size`], ties to the lowest row. The reduced form is unique,
/// so the rule only affects intermediate coefficient growth.
pub fn rref(m: &SparseMatrix) -> (usize, SparseMatrix) {
    let mut rows = m.to_rows();
    let mut rank = 0;
    for col in 0..m.cols() {
        let pivot = (rank..rows.len())
            .filter_map(|i| {
                let v = get(&rows[i], col);
                (!v.is_zero()).then(|| (v.bit_size(), i))
            })
            .min();
        let Some((_, p)) = pivot else { continue };
        rows.swap(rank, p);
        let inv = get(&rows[rank], col).recip();
        scale(&mut rows[rank], &inv);
        let prow = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank {
                continue;
            }
            let f = get(row, col);
            if !f.is_zero() {
                *row = sub_scaled(row, &f, &prow);
            }
        }
        rank += 1;
    }
    let reduced = SparseMatrix::from_rows(m.cols(), &rows).expect("columns preserved");
    (rank, reduced)
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut b = EchelonBuilder::new(m.cols());
    for row in m.to_rows() {
        b.insert(row);
    }
    b.rank()
}

/// Canonical basis of the null space of `m`.
pub fn kernel_basis(m: &SparseMatrix) -> Subspace {
    kernel_of_rows(m.cols(), m.to_rows())
}

/// Incrementally maintained row echelon form.
///
/// Each stored row has leading coefficient 1 at a distinct column. Rows are
/// only reduced on their leading entry while streaming; [`Self::into_rref`]
/// finishes the back-substitution.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    ncols: usize,
    pivots: HashMap<usize, SparseRow>,
}

impl EchelonBuilder {
    pub fn new(ncols: usize) -> Self {
        EchelonBuilder { ncols, pivots: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds a canonical row; returns whether the rank grew.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        loop {
            let Some((c, lead)) = row.first().cloned() else { return false };
            debug_assert!(c < self.ncols);
            match self.pivots.get(&c) {
                Some(p) => row = sub_scaled(&row, &lead, p),
                None => {
                    if !lead.is_one() {
                        scale(&mut row, &lead.recip());
                    }
                    self.pivots.insert(c, row);
                    return true;
                }
            }
        }
    }

    /// Reduced rows sorted by pivot column.
    pub fn into_rref(self) -> Vec<SparseRow> {
        let mut cols: Vec<usize> = self.pivots.keys().copied().collect();
        cols.sort_unstable();
        let mut pivots = self.pivots;
        let mut done: HashMap<usize, SparseRow> = HashMap::with_capacity(cols.len());
        for &c in cols.iter().rev() {
            let mut row = pivots.remove(&c).expect("pivot present");
            let targets: Vec<(usize, Rational)> =
                row[1..].iter().filter(|(j, _)| done.contains_key(j)).cloned().collect();
            for (j, _) in targets {
                let f = get(&row, j);
                if !f.is_zero() {
                    row = sub_scaled(&row, &f, &done[&j]);
                }
            }
            done.insert(c, row);
        }
        cols.into_iter().map(|c| done.remove(&c).expect("reduced")).collect()
    }
}

/// Null space of the rows (in `ncols` unknowns), as a canonical subspace.
///
/// Columns are eliminated from the last to the first; the resulting free
/// variables then give a null-space basis that is already in reduced echelon
/// form with respect to the natural column order.
pub fn kernel_of_rows<I: IntoIterator<Item = SparseRow>>(ncols: usize, rows: I) -> Subspace {
    let mut sink = ReversedSink::new(ncols);
    for row in rows {
        sink.push(row);
    }
    let basis = sink.kernel();
    Subspace::from_canonical(ncols, basis)
}

/// Streaming elimination in reversed column order with duplicate filtering.
struct ReversedSink {
    ncols: usize,
    builder: EchelonBuilder,
    seen: Option<HashSet<SparseRow>>,
}

impl ReversedSink {
    fn new(ncols: usize) -> Self {
        ReversedSink { ncols, builder: EchelonBuilder::new(ncols), seen: Some(HashSet::new()) }
    }

    fn without_dedupe(ncols: usize) -> Self {
        ReversedSink { ncols, builder: EchelonBuilder::new(ncols), seen: None }
    }

    fn push(&mut self, row: SparseRow) {
        if row.is_empty() {
            return;
        }
        let n = self.ncols;
        let mut rev: SparseRow = row.into_iter().map(|(c, v)| (n - 1 - c, v)).collect();
        rev.reverse();
        let lead = rev[0].1.clone();
        if !lead.is_one() {
            scale(&mut rev, &lead.recip());
        }
        let fresh = match &mut self.seen {
            Some(seen) => seen.insert(rev.clone()),
            None => true,
        };
        if fresh {
            self.builder.insert(rev);
        }
    }

    fn kernel(self) -> Vec<SparseRow> {
        let n = self.ncols;
        let reduced = self.builder.into_rref();
        let mut is_pivot = vec![false; n];
        for r in &reduced {
            is_pivot[r[0].0] = true;
        }
        // entries of the free column f' collected from every reduced row
        let mut by_free: HashMap<usize, Vec<(usize, Rational)>> = HashMap::new();
        for r in &reduced {
            let p = r[0].0;
            for (f, v) in &r[1..] {
                by_free.entry(*f).or_default().push((n - 1 - p, -v));
            }
        }
        let mut basis = Vec::with_capacity(n - reduced.len());
        for fr in (0..n).rev() {
            if is_pivot[fr] {
                continue;
            }
            let mut v: SparseRow = vec![(n - 1 - fr, Rational::ONE)];
            if let Some(extra) = by_free.remove(&fr) {
                v.extend(extra);
            }
            v.sort_by_key(|(c, _)| *c);
            basis.push(v);
        }
        basis
    }
}

/// Null space of a system whose unknowns split into independent classes.
///
/// `classes[k]` lists the (global) unknowns of class `k`; `generate(k, sink)`
/// must push rows, in global coordinates, that only involve unknowns of class
/// `k`. Classes are eliminated independently (in parallel when enabled) and the
/// union of their null spaces is returned in canonical form.
pub fn kernel_by_classes<G>(ncols: usize, classes: &[Vec<usize>], generate: G) -> Subspace
where
    G: Fn(usize, &mut dyn FnMut(SparseRow)) + Sync,
{
    let parts: Vec<Vec<SparseRow>> = par::map_indices(classes.len(), |k| {
        let cols = &classes[k];
        let local: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut sink = ReversedSink::new(cols.len());
        generate(k, &mut |row: SparseRow| {
            let mapped: SparseRow = row
                .into_iter()
                .map(|(c, v)| (*local.get(&c).expect("row leaves its class"), v))
                .collect();
            sink.push(mapped);
        });
        sink.kernel()
            .into_iter()
            .map(|v| v.into_iter().map(|(c, x)| (cols[c], x)).collect::<SparseRow>())
            .collect()
    });
    let mut covered = vec![false; ncols];
    for cols in classes {
        for &c in cols {
            debug_assert!(!covered[c], "unknown {c} appears in two classes");
            covered[c] = true;
        }
    }
    let mut basis: Vec<SparseRow> = parts.into_iter().flatten().collect();
    basis.extend((0..ncols).filter(|&c| !covered[c]).map(|c| vec![(c, Rational::ONE)]));
    basis.sort_by_key(|v| v[0].0);
    Subspace::from_canonical(ncols, basis)
}

/// Streaming null-space solver for systems whose unknowns split into classes
/// given by a key per unknown. Rows may be pushed concurrently; each row must
/// only involve unknowns of one class. Only the echelon pivots are kept.
pub struct ClassedKernel {
    ncols: usize,
    classes: Vec<Vec<usize>>,
    locate: Vec<(usize, usize)>,
    sinks: Vec<Mutex<ReversedSink>>,
}

impl ClassedKernel {
    pub fn new<K: Ord>(col_keys: &[K]) -> Self {
        let mut class_of: BTreeMap<&K, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut locate = Vec::with_capacity(col_keys.len());
        for (c, k) in col_keys.iter().enumerate() {
            let id = *class_of.entry(k).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            locate.push((id, classes[id].len()));
            classes[id].push(c);
        }
        let sinks = classes.iter().map(|c| Mutex::new(ReversedSink::without_dedupe(c.len()))).collect();
        ClassedKernel { ncols: col_keys.len(), classes, locate, sinks }
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Adds rows in global coordinates, grouped so each class lock is taken
    /// once per batch.
    pub fn push_batch(&self, rows: Vec<SparseRow>) {
        let mut by_class: BTreeMap<usize, Vec<SparseRow>> = BTreeMap::new();
        for row in rows {
            let Some((c, _)) = row.first() else { continue };
            let id = self.locate[*c].0;
            let local: SparseRow = row
                .into_iter()
                .map(|(c, v)| {
                    let (k, i) = self.locate[c];
                    assert_eq!(k, id, "row mixes unknown classes");
                    (i, v)
                })
                .collect();
            by_class.entry(id).or_default().push(local);
        }
        for (id, rows) in by_class {
            let mut sink = self.sinks[id].lock().expect("sink lock");
            for row in rows {
                sink.push(row);
            }
        }
    }

    pub fn finish(self) -> Subspace {
        let classes = self.classes;
        let sinks: Vec<ReversedSink> = self.sinks.into_iter().map(|m| m.into_inner().expect("sink lock")).collect();
        let sinks: Vec<Mutex<Option<ReversedSink>>> = sinks.into_iter().map(|s| Mutex::new(Some(s))).collect();
        let parts: Vec<Vec<SparseRow>> = par::map_indices(classes.len(), |k| {
            let sink = sinks[k].lock().expect("sink lock").take().expect("sink present");
            let cols = &classes[k];
            sink.kernel().into_iter().map(|v| v.into_iter().map(|(c, x)| (cols[c], x)).collect()).collect()
        });
        let mut basis: Vec<SparseRow> = parts.into_iter().flatten().collect();
        basis.sort_by_key(|v| v[0].0);
        Subspace::from_canonical(self.ncols, basis)
    }
}

/// Null space of `rows` split by a class key per unknown (see
/// [`ClassedKernel`]).
pub fn kernel_by_keys<K: Ord>(col_keys: &[K], rows: Vec<SparseRow>) -> Subspace {
    let k = ClassedKernel::new(col_keys);
    k.push_batch(rows);
    k.finish()
}
