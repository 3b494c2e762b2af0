//! Degree-homogeneous biderivations of truncated affine-Virasoro algebras.
//!
//! A biderivation of degree `n` is a bilinear `F` with
//! `F(L_p, L_q) ⊆ L_{p+q+n}` satisfying
//!
//! ```text
//! F([x,y],z) = [x,F(y,z)] − [y,F(x,z)]
//! F(x,[y,z]) = [y,F(x,z)] − [z,F(x,y)]
//! ```
//!
//! Each identity is imposed on the basis triples for which every bracket and
//! every value of `F` it mentions stays in the window. Symmetric and skew maps
//! are stored structurally (one unknown block per unordered pair), so the two
//! identities are equivalent and only the first is generated.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::affine::{AffineVirasoro, BasisIndex, Selector, TruncatedAlgebra, TruncationWindow};
use crate::error::{Error, Result};
use crate::finite::{self, FiniteLie, FiniteModule};
use crate::lie::SimpleLieAlgebra;
use crate::linalg::{canonicalize, ClassedKernel, EchelonBuilder, Rational, SparseRow, Subspace};
use crate::par;

pub use crate::finite::Symmetry;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiderivationProblem {
    pub selector: Selector,
    pub window: TruncationWindow,
    pub degree: i64,
    pub symmetry: Symmetry,
    pub margin: i64,
}

impl BiderivationProblem {
    /// Problem with the default interior margin `⌊(N − |n|)/3⌋`.
    pub fn new(selector: Selector, window: TruncationWindow, degree: i64, symmetry: Symmetry) -> Result<Self> {
        let margin = (window.n() - degree.abs()).max(0) / 3;
        Self::with_margin(selector, window, degree, symmetry, margin)
    }

    pub fn with_margin(
        selector: Selector,
        window: TruncationWindow,
        degree: i64,
        symmetry: Symmetry,
        margin: i64,
    ) -> Result<Self> {
        let too_small = if selector == Selector::SimpleG { degree != 0 } else { degree.abs() >= window.n() };
        if too_small {
            return Err(Error::WindowTooSmall { window: window.n(), degree });
        }
        if margin < 0 || margin > window.n() {
            return Err(Error::InvalidArgument(format!("interior margin {margin} outside [0, {}]", window.n())));
        }
        Ok(BiderivationProblem { selector, window, degree, symmetry, margin })
    }
}

/// Unknowns of a degree-`n` bilinear map: for each stored pair `(a, b)` with
/// `deg a + deg b + n` in the window, one column per basis element of that
/// degree. Symmetric maps store `a ≤ b`, skew maps `a < b`.
#[derive(Clone, Debug)]
pub struct BilinearLayout {
    degree: i64,
    symmetry: Symmetry,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
    offsets: Vec<usize>,
    target_start: Vec<usize>,
    len: usize,
}

impl BilinearLayout {
    pub fn new(t: &TruncatedAlgebra, degree: i64, symmetry: Symmetry) -> Self {
        let mut pairs = Vec::new();
        let mut offsets = Vec::new();
        let mut target_start = Vec::new();
        let mut len = 0;
        for a in 0..t.dim() {
            let first = match symmetry {
                Symmetry::None => 0,
                Symmetry::Symmetric => a,
                Symmetry::Skew => a + 1,
            };
            for b in first..t.dim() {
                let out = t.degree_range(t.degree(a) + t.degree(b) + degree);
                if out.is_empty() {
                    continue;
                }
                pairs.push((a, b));
                offsets.push(len);
                target_start.push(out.start);
                len += out.len();
            }
        }
        let pair_index = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        BilinearLayout { degree, symmetry, pairs, pair_index, offsets, target_start, len }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Stored pair and sign for `F(a, b)`; `None` if `F(a, b)` is forced to
    /// vanish (skew diagonal) or falls outside the window.
    pub fn slot(&self, a: usize, b: usize) -> Option<(usize, bool)> {
        let (key, negate) = match self.symmetry {
            Symmetry::None => ((a, b), false),
            Symmetry::Symmetric => ((a.min(b), a.max(b)), false),
            Symmetry::Skew if a == b => return None,
            Symmetry::Skew => ((a.min(b), a.max(b)), a > b),
        };
        self.pair_index.get(&key).map(|&p| (p, negate))
    }

    /// Column of the coefficient of `x_u` in `F(a, b)`, with sign.
    pub fn column(&self, a: usize, b: usize, u: usize) -> Option<(usize, bool)> {
        let (p, neg) = self.slot(a, b)?;
        let start = self.target_start[p];
        let width = self.width(p);
        (u >= start && u < start + width).then(|| (self.offsets[p] + u - start, neg))
    }

    fn width(&self, p: usize) -> usize {
        self.offsets.get(p + 1).copied().unwrap_or(self.len) - self.offsets[p]
    }

    /// `(a, b, u)` for a column.
    pub fn unknown(&self, col: usize) -> (usize, usize, usize) {
        let p = self.offsets.partition_point(|&o| o <= col) - 1;
        let (a, b) = self.pairs[p];
        (a, b, self.target_start[p] + col - self.offsets[p])
    }

    /// Columns whose two arguments both have degree in `[−m, m]`.
    pub fn interior_columns(&self, t: &TruncatedAlgebra, m: i64) -> Vec<usize> {
        let mut out = Vec::new();
        for (p, &(a, b)) in self.pairs.iter().enumerate() {
            if t.degree(a).abs() <= m && t.degree(b).abs() <= m {
                out.extend(self.offsets[p]..self.offsets[p] + self.width(p));
            }
        }
        out
    }
}

/// A degree-`n` bilinear map on a truncation, as the values `F(x_a, x_b)`
/// (in basis coordinates of the truncation) of the nonzero pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedBilinearMap {
    pub degree: i64,
    values: BTreeMap<(usize, usize), SparseRow>,
}

impl GradedBilinearMap {
    pub fn zero(degree: i64) -> Self {
        GradedBilinearMap { degree, values: BTreeMap::new() }
    }

    /// The map with values `f(a, b)` on basis pairs.
    pub fn from_fn<F>(t: &TruncatedAlgebra, degree: i64, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> SparseRow,
    {
        let mut values = BTreeMap::new();
        for a in 0..t.dim() {
            for b in 0..t.dim() {
                let v = canonicalize(f(a, b));
                if !v.is_empty() {
                    values.insert((a, b), v);
                }
            }
        }
        GradedBilinearMap { degree, values }
    }

    /// The inner biderivation `F_λ(x, y) = λ[x, y]`.
    pub fn inner(t: &TruncatedAlgebra, lambda: &Rational) -> Self {
        Self::from_fn(t, 0, |a, b| t.bracket(a, b).iter().map(|(k, c)| (*k, c * lambda)).collect())
    }

    pub fn from_vector(layout: &BilinearLayout, v: &[(usize, Rational)]) -> Self {
        let mut values: BTreeMap<(usize, usize), SparseRow> = BTreeMap::new();
        for (col, x) in v {
            let (a, b, u) = layout.unknown(*col);
            values.entry((a, b)).or_default().push((u, x.clone()));
            match layout.symmetry {
                Symmetry::Symmetric if a != b => values.entry((b, a)).or_default().push((u, x.clone())),
                Symmetry::Skew => values.entry((b, a)).or_default().push((u, -x)),
                _ => {}
            }
        }
        let values = values.into_iter().map(|(k, v)| (k, canonicalize(v))).filter(|(_, v)| !v.is_empty()).collect();
        GradedBilinearMap { degree: layout.degree, values }
    }

    /// Flattened coordinates in `layout`, or `None` if the map does not fit
    /// (wrong degree, symmetry, or values outside the stored blocks).
    pub fn to_vector(&self, layout: &BilinearLayout) -> Option<SparseRow> {
        if self.values.is_empty() {
            return Some(Vec::new());
        }
        if layout.degree != self.degree {
            return None;
        }
        let mut out = Vec::new();
        for (&(a, b), v) in &self.values {
            let stored = match layout.symmetry {
                Symmetry::None => true,
                _ => a <= b,
            };
            if !stored {
                let mirror = self.get(b, a);
                let expect: SparseRow = match layout.symmetry {
                    Symmetry::Skew => mirror.iter().map(|(k, c)| (*k, -c)).collect(),
                    _ => mirror.to_vec(),
                };
                if expect != *v {
                    return None;
                }
                continue;
            }
            for (u, x) in v {
                let (col, _) = layout.column(a, b, *u)?;
                out.push((col, x.clone()));
            }
        }
        Some(canonicalize(out))
    }

    pub fn get(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        self.values.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn set(&mut self, a: usize, b: usize, v: SparseRow) {
        let v = canonicalize(v);
        if v.is_empty() {
            self.values.remove(&(a, b));
        } else {
            self.values.insert((a, b), v);
        }
    }

    /// Nonzero values grouped by the degree signature `(deg a, deg b)`.
    pub fn blocks(&self, t: &TruncatedAlgebra) -> BTreeMap<(i64, i64), Vec<((usize, usize), &SparseRow)>> {
        let mut out: BTreeMap<(i64, i64), Vec<_>> = BTreeMap::new();
        for (&(a, b), v) in &self.values {
            out.entry((t.degree(a), t.degree(b))).or_default().push(((a, b), v));
        }
        out
    }

    /// `F(x, y)` extended bilinearly to sparse vectors.
    pub fn apply(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseRow {
        let mut out = Vec::new();
        for (a, c) in x {
            for (b, d) in y {
                let cd = c * d;
                out.extend(self.get(*a, *b).iter().map(|(k, v)| (*k, v * &cd)));
            }
        }
        canonicalize(out)
    }
}

/// Which of the two defining identities failed, on which basis triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityWitness {
    pub identity: u8,
    pub triple: [String; 3],
}

/// First violation of either biderivation identity on a window-safe triple.
pub fn biderivation_witness(t: &TruncatedAlgebra, f: &GradedBilinearMap) -> Option<IdentityWitness> {
    let n = f.degree;
    let ok = |d: i64| t.in_window(d);
    let one = |i: usize| vec![(i, Rational::ONE)];
    let dim = t.dim();
    let found = par::map_indices(dim, |x| {
        let p = t.degree(x);
        for y in 0..dim {
            let q = t.degree(y);
            for z in 0..dim {
                let r = t.degree(z);
                if ok(p + q) && ok(q + r + n) && ok(p + r + n) && ok(p + q + r + n) {
                    let lhs = f.apply(t.bracket(x, y), &one(z));
                    let mut rhs = t.bracket_vec(&one(x), f.get(y, z));
                    rhs.extend(t.bracket_vec(&one(y), f.get(x, z)).into_iter().map(|(k, c)| (k, -c)));
                    if canonicalize(rhs) != lhs {
                        return Some((1u8, x, y, z));
                    }
                }
                if ok(q + r) && ok(p + r + n) && ok(p + q + n) && ok(p + q + r + n) {
                    let lhs = f.apply(&one(x), t.bracket(y, z));
                    let mut rhs = t.bracket_vec(&one(y), f.get(x, z));
                    rhs.extend(t.bracket_vec(&one(z), f.get(x, y)).into_iter().map(|(k, c)| (k, -c)));
                    if canonicalize(rhs) != lhs {
                        return Some((2u8, x, y, z));
                    }
                }
            }
        }
        None
    });
    found
        .into_iter()
        .flatten()
        .next()
        .map(|(identity, x, y, z)| IdentityWitness { identity, triple: [t.label(x), t.label(y), t.label(z)] })
}

pub fn is_biderivation(t: &TruncatedAlgebra, f: &GradedBilinearMap) -> bool {
    biderivation_witness(t, f).is_none()
}

/// `F(a, z) = F(z, a) = 0` for every basis element `a` and central `z`
/// (`K₁`, `K₂`) present in the truncation. With `margin = Some(m)` only
/// arguments `a` of degree in `[−m, m]` are examined.
pub fn center_annihilation_check(t: &TruncatedAlgebra, f: &GradedBilinearMap, margin: Option<i64>) -> bool {
    let central: Vec<usize> = [BasisIndex::K1, BasisIndex::K2].iter().filter_map(|z| t.index_of(z)).collect();
    (0..t.dim())
        .filter(|&a| margin.is_none_or(|m| t.degree(a).abs() <= m))
        .all(|a| central.iter().all(|&z| f.get(a, z).is_empty() && f.get(z, a).is_empty()))
}

/// Solver for one problem on a shared truncation.
pub struct BiderivationSolver<'a> {
    problem: BiderivationProblem,
    t: &'a TruncatedAlgebra,
    layout: BilinearLayout,
}

impl<'a> BiderivationSolver<'a> {
    pub fn new(t: &'a TruncatedAlgebra, problem: BiderivationProblem) -> Result<Self> {
        if t.selector() != problem.selector || t.window() != problem.window {
            return Err(Error::InvalidArgument("truncation does not match the problem".into()));
        }
        let layout = BilinearLayout::new(t, problem.degree, problem.symmetry);
        Ok(BiderivationSolver { problem, t, layout })
    }

    pub fn problem(&self) -> &BiderivationProblem {
        &self.problem
    }

    pub fn layout(&self) -> &BilinearLayout {
        &self.layout
    }

    fn weight_key(&self, col: usize) -> Vec<i64> {
        let t = self.t;
        let (a, b, u) = self.layout.unknown(col);
        t.weight(u).iter().zip(t.weight(a)).zip(t.weight(b)).map(|((u, a), b)| u - a - b).collect()
    }

    /// Raw (untruncated-interior) solution space in layout coordinates.
    pub fn solution_space(&self) -> Subspace {
        let t = self.t;
        let lay = &self.layout;
        let n = self.problem.degree;
        let keys: Vec<Vec<i64>> = (0..lay.len()).map(|c| self.weight_key(c)).collect();
        let kernel = ClassedKernel::new(&keys);
        let adj = t.adjoint_columns();
        let ok = |d: i64| t.in_window(d);
        let both = self.problem.symmetry == Symmetry::None;
        let push = |row: &mut Vec<(usize, Rational)>, a: usize, b: usize, u: usize, c: &Rational| {
            if let Some((col, neg)) = lay.column(a, b, u) {
                row.push((col, if neg { -c } else { c.clone() }));
            }
        };
        par::map_indices(t.dim(), |x| {
            let p = t.degree(x);
            let mut rows = Vec::new();
            for y in 0..t.dim() {
                let q = t.degree(y);
                for z in 0..t.dim() {
                    let r = t.degree(z);
                    // F([x,y],z) − [x,F(y,z)] + [y,F(x,z)] = 0, antisymmetric in x, y
                    if x < y && ok(p + q) && ok(q + r + n) && ok(p + r + n) && ok(p + q + r + n) {
                        for out in t.degree_range(p + q + r + n) {
                            let mut row = Vec::new();
                            for (s, c) in t.bracket(x, y) {
                                push(&mut row, *s, z, out, c);
                            }
                            for (u, c) in &adj[x][out] {
                                push(&mut row, y, z, *u, &-c);
                            }
                            for (u, c) in &adj[y][out] {
                                push(&mut row, x, z, *u, c);
                            }
                            let row = canonicalize(row);
                            if !row.is_empty() {
                                rows.push(row);
                            }
                        }
                    }
                    // F(x,[y,z]) − [y,F(x,z)] + [z,F(x,y)] = 0, antisymmetric in y, z
                    if both && y < z && ok(q + r) && ok(p + r + n) && ok(p + q + n) && ok(p + q + r + n) {
                        for out in t.degree_range(p + q + r + n) {
                            let mut row = Vec::new();
                            for (s, c) in t.bracket(y, z) {
                                push(&mut row, x, *s, out, c);
                            }
                            for (u, c) in &adj[y][out] {
                                push(&mut row, x, z, *u, &-c);
                            }
                            for (u, c) in &adj[z][out] {
                                push(&mut row, x, y, *u, c);
                            }
                            let row = canonicalize(row);
                            if !row.is_empty() {
                                rows.push(row);
                            }
                        }
                    }
                }
                if rows.len() > 4096 {
                    kernel.push_batch(std::mem::take(&mut rows));
                }
            }
            kernel.push_batch(rows);
        });
        kernel.finish()
    }

    pub fn interior_columns(&self) -> Vec<usize> {
        self.layout.interior_columns(self.t, self.problem.margin)
    }

    pub fn restrict_to_interior(&self, s: &Subspace) -> Subspace {
        s.project(&self.interior_columns())
    }

    pub fn restrict_vector(&self, v: &[(usize, Rational)]) -> SparseRow {
        let cols = self.interior_columns();
        let position: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        v.iter().filter_map(|(c, x)| position.get(c).map(|&i| (i, x.clone()))).collect()
    }

    /// `F₁` in layout coordinates; `None` when it does not fit the problem
    /// (nonzero degree or symmetric storage).
    pub fn f1_vector(&self) -> Option<SparseRow> {
        if self.problem.degree != 0 || self.problem.symmetry == Symmetry::Symmetric {
            return None;
        }
        GradedBilinearMap::inner(self.t, &Rational::ONE).to_vector(&self.layout)
    }

    /// Does the interior part of `v` have the form `F(a, b) = φ([a, b])` for
    /// some linear `φ`? Solved as an inhomogeneous system in `φ`.
    pub fn factors_through_bracket(&self, v: &[(usize, Rational)]) -> bool {
        let t = self.t;
        let m = self.problem.margin;
        let n = self.problem.degree;
        let f = GradedBilinearMap::from_vector(&self.layout, v);
        // unknowns φ(x_s)_u with deg u = deg s + n, for s of degree in [−2m, 2m]
        let mut cols: HashMap<(usize, usize), usize> = HashMap::new();
        for s in 0..t.dim() {
            if t.degree(s).abs() > 2 * m {
                continue;
            }
            for u in t.degree_range(t.degree(s) + n) {
                let next = cols.len();
                cols.insert((s, u), next);
            }
        }
        let rhs = cols.len();
        let mut eb = EchelonBuilder::new(rhs + 1);
        for a in 0..t.dim() {
            for b in 0..t.dim() {
                if t.degree(a).abs() > m || t.degree(b).abs() > m {
                    continue;
                }
                let value = f.get(a, b);
                for u in t.degree_range(t.degree(a) + t.degree(b) + n) {
                    let mut row: SparseRow = Vec::new();
                    for (s, c) in t.bracket(a, b) {
                        match cols.get(&(*s, u)) {
                            Some(&col) => row.push((col, c.clone())),
                            None => return false,
                        }
                    }
                    let target = value.iter().find(|(k, _)| *k == u).map(|(_, x)| x.clone());
                    if let Some(x) = target {
                        row.push((rhs, -x));
                    }
                    let row = canonicalize(row);
                    if !row.is_empty() {
                        eb.insert(row);
                    }
                }
            }
        }
        let reduced = eb.into_rref();
        !reduced.iter().any(|r| r[0].0 == rhs)
    }

    pub fn report(&self) -> BiderivationRow {
        let raw = self.solution_space();
        let interior = self.restrict_to_interior(&raw);
        let contains_f1 = self.f1_vector().map(|f1| interior.contains(&self.restrict_vector(&f1)).unwrap_or(false));
        let center = [Selector::Full, Selector::GTilde].contains(&self.problem.selector).then(|| {
            raw.basis().iter().all(|v| {
                center_annihilation_check(self.t, &GradedBilinearMap::from_vector(&self.layout, v), None)
            })
        });
        BiderivationRow {
            selector: self.problem.selector,
            window: self.problem.window.n(),
            margin: self.problem.margin,
            degree: self.problem.degree,
            symmetry: self.problem.symmetry,
            dim_raw: raw.dim(),
            dim_interior: interior.dim(),
            contains_f1,
            center_annihilation_ok: center,
        }
    }
}

/// One row of a biderivation report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiderivationRow {
    pub selector: Selector,
    #[serde(rename = "N")]
    pub window: i64,
    #[serde(rename = "M")]
    pub margin: i64,
    #[serde(rename = "n")]
    pub degree: i64,
    pub symmetry: Symmetry,
    pub dim_raw: usize,
    pub dim_interior: usize,
    #[serde(rename = "contains_F1")]
    pub contains_f1: Option<bool>,
    pub center_annihilation_ok: Option<bool>,
}

/// Raw solution space of a problem (building its own truncation).
pub fn biderivation_space(alg: &AffineVirasoro, p: BiderivationProblem) -> Result<Subspace> {
    let t = alg.truncate(p.window, p.selector);
    Ok(BiderivationSolver::new(&t, p)?.solution_space())
}

/// Interior skew dimensions for the full algebra and its quotient by the
/// center, at one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientComparison {
    #[serde(rename = "N")]
    pub window: i64,
    #[serde(rename = "n")]
    pub degree: i64,
    pub full_dim_interior: usize,
    pub quotient_dim_interior: usize,
}

pub fn quotient_comparison(alg: &AffineVirasoro, window: TruncationWindow, degree: i64) -> Result<QuotientComparison> {
    let dims = [Selector::Full, Selector::Quotient]
        .iter()
        .map(|&s| {
            let t = alg.truncate(window, s);
            let solver = BiderivationSolver::new(&t, BiderivationProblem::new(s, window, degree, Symmetry::Skew)?)?;
            Ok(solver.restrict_to_interior(&solver.solution_space()).dim())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientComparison { window: window.n(), degree, full_dim_interior: dims[0], quotient_dim_interior: dims[1] })
}

/// Solution dimensions for the semisimple base cases on `g` itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimpleBaseReport {
    /// `δ: g × g → g`, module map in the second argument and derivation in
    /// the first.
    pub mixed_adjoint_dim: usize,
    pub symmetric_adjoint_dim: usize,
    pub symmetric_trivial_dim: usize,
}

impl SemisimpleBaseReport {
    pub fn ok(&self) -> bool {
        self.mixed_adjoint_dim == 0 && self.symmetric_adjoint_dim == 0 && self.symmetric_trivial_dim == 0
    }
}

pub fn semisimple_base_checks(g: &SimpleLieAlgebra) -> Result<SemisimpleBaseReport> {
    if g.dim() > 14 {
        return Err(Error::InvalidArgument(format!("dim g = {} exceeds the supported 14", g.dim())));
    }
    let l = FiniteLie::from_simple(g);
    let ad = FiniteModule::adjoint(&l);
    let triv = FiniteModule::trivial(&l, 1);
    Ok(SemisimpleBaseReport {
        mixed_adjoint_dim: finite::mixed_bilinear(&l, &ad, &ad).dim(),
        symmetric_adjoint_dim: finite::biderivations(&l, &ad, Symmetry::Symmetric).dim(),
        symmetric_trivial_dim: finite::biderivations(&l, &triv, Symmetry::Symmetric).dim(),
    })
}
