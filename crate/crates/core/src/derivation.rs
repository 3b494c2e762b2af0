//! Degree-homogeneous derivations of truncated affine-Virasoro algebras.
//!
//! A derivation problem fixes a domain selector, a target (the domain itself
//! or, for the full algebra, the ideal g̃), a window `[−N, N]` and a degree
//! `n`. The unknowns are the coefficients `⟨D(x_a), x_c⟩` with
//! `deg c = deg a + n`; the Leibniz rule `D[a,b] = [Da,b] + [a,Db]` is imposed
//! on every basis pair whose degrees, and the degrees of every term, stay in
//! the window. Raw solution spaces carry boundary artifacts, so comparisons
//! with inner derivations are made after restricting to source degrees in
//! `[−M, M]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::affine::{AffineVirasoro, BasisIndex, Element, Selector, TruncatedAlgebra, TruncationWindow};
use crate::error::{Error, Result};
use crate::finite::{self, FiniteLie, FiniteModule};
use crate::linalg::{canonicalize, kernel_by_keys, Rational, SparseMatrix, SparseRow, Subspace};
use crate::par;

/// A homogeneous derivation problem on a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivationProblem {
    pub domain: Selector,
    pub target: Selector,
    pub window: TruncationWindow,
    pub degree: i64,
    pub margin: i64,
}

impl DerivationProblem {
    /// Problem with the default interior margin `⌊(N − |n|)/2⌋`.
    pub fn new(domain: Selector, target: Selector, window: TruncationWindow, degree: i64) -> Result<Self> {
        let margin = (window.n() - degree.abs()).max(0) / 2;
        Self::with_margin(domain, target, window, degree, margin)
    }

    pub fn with_margin(
        domain: Selector,
        target: Selector,
        window: TruncationWindow,
        degree: i64,
        margin: i64,
    ) -> Result<Self> {
        let ok_target = target == domain || (domain == Selector::Full && target == Selector::GTilde);
        if !ok_target {
            return Err(Error::InvalidArgument(format!("target {target} is not a submodule of {domain}")));
        }
        if domain == Selector::SimpleG {
            if degree != 0 {
                return Err(Error::WindowTooSmall { window: window.n(), degree });
            }
        } else if degree.abs() >= window.n() {
            return Err(Error::WindowTooSmall { window: window.n(), degree });
        }
        if margin < 0 || margin > window.n() {
            return Err(Error::InvalidArgument(format!("interior margin {margin} outside [0, {}]", window.n())));
        }
        Ok(DerivationProblem { domain, target, window, degree, margin })
    }
}

/// Index of the unknowns of a degree-`n` linear map on a truncation: one
/// column per (source `a`, target `c`) with `deg c = deg a + n` and `c` in
/// the target selector.
#[derive(Clone, Debug)]
pub struct DerivationLayout {
    degree: i64,
    unknowns: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl DerivationLayout {
    pub fn new(t: &TruncatedAlgebra, target: Selector, degree: i64) -> Self {
        let mut unknowns = Vec::new();
        for a in 0..t.dim() {
            for c in t.degree_range(t.degree(a) + degree) {
                if target.contains(&t.basis_index(c)) {
                    unknowns.push((a, c));
                }
            }
        }
        let index = unknowns.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        DerivationLayout { degree, unknowns, index }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    /// `(source, target)` basis indices of each unknown.
    pub fn unknowns(&self) -> &[(usize, usize)] {
        &self.unknowns
    }

    pub fn column(&self, source: usize, target: usize) -> Option<usize> {
        self.index.get(&(source, target)).copied()
    }

    /// Columns whose source degree lies in `[−m, m]`.
    pub fn interior_columns(&self, t: &TruncatedAlgebra, m: i64) -> Vec<usize> {
        (0..self.len()).filter(|&i| t.degree(self.unknowns[i].0).abs() <= m).collect()
    }
}

/// A degree-homogeneous linear map, stored per source degree as a matrix
/// from the degree-`m` basis to the degree-`m+n` basis (local coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLinearMap {
    pub degree: i64,
    pub blocks: BTreeMap<i64, SparseMatrix>,
}

impl GradedLinearMap {
    pub fn from_vector(t: &TruncatedAlgebra, layout: &DerivationLayout, v: &[(usize, Rational)]) -> Self {
        let mut blocks: BTreeMap<i64, SparseMatrix> = BTreeMap::new();
        for (col, x) in v {
            let (a, c) = layout.unknowns[*col];
            let m = t.degree(a);
            let src = t.degree_range(m);
            let dst = t.degree_range(m + layout.degree);
            blocks
                .entry(m)
                .or_insert_with(|| SparseMatrix::zeros(dst.len(), src.len()))
                .set(c - dst.start, a - src.start, x.clone());
        }
        GradedLinearMap { degree: layout.degree, blocks }
    }

    /// `D(x_a)` as an element of 𝔏(g).
    pub fn apply(&self, t: &TruncatedAlgebra, a: usize) -> Element {
        let m = t.degree(a);
        let Some(block) = self.blocks.get(&m) else { return Element::zero() };
        let src = t.degree_range(m);
        let dst = t.degree_range(m + self.degree);
        Element::from_terms(
            block
                .entries()
                .filter(|(_, col, _)| *col == a - src.start)
                .map(|(row, _, x)| (t.basis_index(dst.start + row), x.clone())),
        )
    }
}

/// Solutions of a [`DerivationProblem`] with their truncation and layout.
#[derive(Debug)]
pub struct DerivationSolver {
    problem: DerivationProblem,
    algebra: TruncatedAlgebra,
    layout: DerivationLayout,
}

impl DerivationSolver {
    pub fn new(alg: &AffineVirasoro, problem: DerivationProblem) -> Self {
        let algebra = alg.truncate(problem.window, problem.domain);
        let layout = DerivationLayout::new(&algebra, problem.target, problem.degree);
        DerivationSolver { problem, algebra, layout }
    }

    pub fn problem(&self) -> &DerivationProblem {
        &self.problem
    }

    pub fn algebra(&self) -> &TruncatedAlgebra {
        &self.algebra
    }

    pub fn layout(&self) -> &DerivationLayout {
        &self.layout
    }

    /// The Leibniz system, split into root-lattice weight classes
    /// (`weight(c) − weight(a)` is preserved by every constraint).
    pub fn derivation_space(&self) -> Subspace {
        let t = &self.algebra;
        let lay = &self.layout;
        let n = self.problem.degree;
        let target = self.problem.target;
        let adj = t.adjoint_columns();
        let rows: Vec<SparseRow> = par::map_indices(t.dim(), |a| {
            let mut out = Vec::new();
            let da = t.degree(a);
            if !t.in_window(da + n) {
                return out;
            }
            for b in a + 1..t.dim() {
                let db = t.degree(b);
                if !(t.in_window(da + db) && t.in_window(db + n) && t.in_window(da + db + n)) {
                    continue;
                }
                for out_t in t.degree_range(da + db + n) {
                    if !target.contains(&t.basis_index(out_t)) {
                        continue;
                    }
                    let mut row: SparseRow = Vec::new();
                    // D([a,b]) on x_t
                    for (s, c) in t.bracket(a, b) {
                        if let Some(col) = lay.column(*s, out_t) {
                            row.push((col, c.clone()));
                        }
                    }
                    // −[Da, b] = [b, Da]
                    for (u, c) in &adj[b][out_t] {
                        if let Some(col) = lay.column(a, *u) {
                            row.push((col, c.clone()));
                        }
                    }
                    // −[a, Db]
                    for (u, c) in &adj[a][out_t] {
                        if let Some(col) = lay.column(b, *u) {
                            row.push((col, -c));
                        }
                    }
                    let row = canonicalize(row);
                    if !row.is_empty() {
                        out.push(row);
                    }
                }
            }
            out
        })
        .into_iter()
        .flatten()
        .collect();
        kernel_by_keys(&self.weight_keys(), rows)
    }

    fn weight_keys(&self) -> Vec<Vec<i64>> {
        let t = &self.algebra;
        self.layout
            .unknowns
            .iter()
            .map(|&(a, c)| t.weight(c).iter().zip(t.weight(a)).map(|(x, y)| x - y).collect())
            .collect()
    }

    /// Span of `x ↦ [v, x]` for `v` in the target's degree-`n` part.
    pub fn inner_space(&self) -> Subspace {
        let t = &self.algebra;
        let vectors = t
            .degree_range(self.problem.degree)
            .filter(|&v| self.problem.target.contains(&t.basis_index(v)))
            .map(|v| self.inner_vector(v));
        Subspace::from_vectors(self.layout.len(), vectors.collect::<Vec<_>>()).expect("columns in range")
    }

    /// Flattened `ad x_v` (as a degree-`deg v` map).
    pub fn inner_vector(&self, v: usize) -> SparseRow {
        let t = &self.algebra;
        let mut out = Vec::new();
        for a in 0..t.dim() {
            for (c, x) in t.bracket(v, a) {
                if let Some(col) = self.layout.column(a, *c) {
                    out.push((col, x.clone()));
                }
            }
        }
        canonicalize(out)
    }

    /// The degree-0 map `x ↦ [d₀, x]` on g̃: `x⊗t^m ↦ m·x⊗t^m`, `K₁ ↦ 0`.
    /// Only defined on domains without `d₀` (g̃ and ĝ), where it is outer.
    pub fn gamma(&self) -> Result<SparseRow> {
        if self.problem.degree != 0 || !matches!(self.problem.domain, Selector::GTilde | Selector::GHat) {
            return Err(Error::InvalidArgument("γ is a degree-0 map on g̃ or ĝ".into()));
        }
        let t = &self.algebra;
        let mut out = Vec::new();
        for a in 0..t.dim() {
            if let BasisIndex::Loop { power, .. } = t.basis_index(a) {
                if let Some(col) = self.layout.column(a, a) {
                    out.push((col, Rational::from_int(power)));
                }
            }
        }
        Ok(canonicalize(out))
    }

    pub fn interior_columns(&self) -> Vec<usize> {
        self.layout.interior_columns(&self.algebra, self.problem.margin)
    }

    /// Projection of a space of flattened maps onto interior source degrees.
    pub fn restrict_to_interior(&self, s: &Subspace) -> Subspace {
        s.project(&self.interior_columns())
    }

    pub fn restrict_vector(&self, v: &[(usize, Rational)]) -> SparseRow {
        let cols = self.interior_columns();
        let mut position = vec![usize::MAX; self.layout.len()];
        for (i, &c) in cols.iter().enumerate() {
            position[c] = i;
        }
        v.iter().filter(|(c, _)| position[*c] != usize::MAX).map(|(c, x)| (position[*c], x.clone())).collect()
    }

    pub fn report(&self) -> DerivationRow {
        let der = self.derivation_space();
        let inner = self.inner_space();
        let der_i = self.restrict_to_interior(&der);
        let inner_i = self.restrict_to_interior(&inner);
        DerivationRow {
            selector: self.problem.domain,
            target: self.problem.target,
            window: self.problem.window.n(),
            margin: self.problem.margin,
            degree: self.problem.degree,
            dim_der: der.dim(),
            dim_inner: inner.dim(),
            dim_der_interior: der_i.dim(),
            dim_inner_interior: inner_i.dim(),
            h1: der_i.dim() as i64 - inner_i.dim() as i64,
            interior_equal: der_i == inner_i,
        }
    }
}

/// One row of a derivation report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationRow {
    pub selector: Selector,
    pub target: Selector,
    #[serde(rename = "N")]
    pub window: i64,
    #[serde(rename = "M")]
    pub margin: i64,
    #[serde(rename = "n")]
    pub degree: i64,
    pub dim_der: usize,
    pub dim_inner: usize,
    pub dim_der_interior: usize,
    pub dim_inner_interior: usize,
    pub h1: i64,
    pub interior_equal: bool,
}

pub fn derivation_space(alg: &AffineVirasoro, p: DerivationProblem) -> Subspace {
    DerivationSolver::new(alg, p).derivation_space()
}

pub fn inner_derivation_space(alg: &AffineVirasoro, p: DerivationProblem) -> Subspace {
    DerivationSolver::new(alg, p).inner_space()
}

/// `dim Der − dim Inn` after interior restriction.
pub fn h1_dimension(alg: &AffineVirasoro, p: DerivationProblem) -> i64 {
    DerivationSolver::new(alg, p).report().h1
}

/// Degree-0 subalgebra `g ⊕ span{d₀, K₁, K₂}` and the module `g ⊗ t^m` on a
/// window wide enough to hold degree `m`.
fn degree_zero_setup(alg: &AffineVirasoro, extent: i64) -> TruncatedAlgebra {
    alg.truncate(TruncationWindow::new(extent.max(1)).expect("positive window"), Selector::Full)
}

fn gtilde_part(t: &TruncatedAlgebra, degree: i64) -> Vec<usize> {
    t.degree_range(degree).filter(|&i| Selector::GTilde.contains(&t.basis_index(i))).collect()
}

/// Outcome of one exact finite-dimensional check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedCheck {
    pub m: i64,
    pub n: Option<i64>,
    pub dim_solutions: usize,
    pub dim_expected: usize,
    pub passed: bool,
}

/// `H¹(𝔏₀, g ⊗ t^m) = 0` for `m ≠ 0`, by an exact solve (no truncation
/// artifacts: both sides are finite-dimensional).
pub fn degree0_cohomology(alg: &AffineVirasoro, m: i64) -> Result<GradedCheck> {
    if m == 0 {
        return Err(Error::InvalidArgument("the degree-0 module is excluded".into()));
    }
    let t = degree_zero_setup(alg, m.abs());
    let l0: Vec<usize> = t.degree_range(0).collect();
    let module = gtilde_part(&t, m);
    let l = FiniteLie::from_truncated(&t, &l0)?;
    let v = FiniteModule::from_truncated(&t, &l0, &module)?;
    let der = finite::derivations(&l, &v).dim();
    let inn = finite::inner_derivations(&l, &v).dim();
    Ok(GradedCheck { m, n: None, dim_solutions: der, dim_expected: inn, passed: der == inn })
}

pub fn degree0_cohomology_vanishes(alg: &AffineVirasoro, m: i64) -> Result<bool> {
    Ok(degree0_cohomology(alg, m)?.passed)
}

/// `Hom_{𝔏₀}(𝔏_m, g̃_n) = 0` for `m ≠ n`.
pub fn graded_hom_space(alg: &AffineVirasoro, m: i64, n: i64) -> Result<GradedCheck> {
    if m == n {
        return Err(Error::InvalidArgument("m = n is excluded".into()));
    }
    let t = degree_zero_setup(alg, m.abs().max(n.abs()));
    let l0: Vec<usize> = t.degree_range(0).collect();
    let source: Vec<usize> = t.degree_range(m).collect();
    let target = gtilde_part(&t, n);
    let l = FiniteLie::from_truncated(&t, &l0)?;
    let v = FiniteModule::from_truncated(&t, &l0, &source)?;
    let w = FiniteModule::from_truncated(&t, &l0, &target)?;
    let dim = finite::module_homs(&l, &v, &w).dim();
    Ok(GradedCheck { m, n: Some(n), dim_solutions: dim, dim_expected: 0, passed: dim == 0 })
}

pub fn graded_homs_vanish(alg: &AffineVirasoro, m: i64, n: i64) -> Result<bool> {
    Ok(graded_hom_space(alg, m, n)?.passed)
}

/// Row of the nonzero-degree comparison for derivations into g̃.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonzeroDegreeRow {
    pub row: DerivationRow,
    /// `None` at degree 0, where only the sum decomposition is claimed.
    pub asserted: Option<bool>,
}

/// Full → g̃ derivations per degree; nonzero degrees must be inner after
/// interior restriction.
pub fn nonzero_degree_report(alg: &AffineVirasoro, window: TruncationWindow, degrees: &[i64]) -> Result<Vec<NonzeroDegreeRow>> {
    let problems = degrees
        .iter()
        .map(|&n| DerivationProblem::new(Selector::Full, Selector::GTilde, window, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(problems
        .iter()
        .map(|p| {
            let row = DerivationSolver::new(alg, *p).report();
            let asserted = (p.degree != 0).then_some(row.interior_equal);
            NonzeroDegreeRow { row, asserted }
        })
        .collect())
}
