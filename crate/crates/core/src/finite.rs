//! Exact solvers for finite-dimensional Lie algebras and modules given by
//! structure constants: derivations, module homomorphisms and bilinear maps
//! subject to Leibniz-type conditions.
//!
//! Unknown maps are flattened row-major: a linear map `L → V` puts the
//! coefficient of `v_k` in `D(x_i)` at `i·dim V + k`; a bilinear map
//! `L × U → V` puts the coefficient of `v_k` in `F(x_a, u_b)` at
//! `(a·dim U + b)·dim V + k` (or at the structural pair index for symmetric and
//! skew maps, see [`PairLayout`]).

use std::collections::BTreeMap;

use crate::affine::TruncatedAlgebra;
use crate::error::{Error, Result};
use crate::lie::SimpleLieAlgebra;
use crate::linalg::{canonicalize, kernel_of_rows, Rational, SparseRow, Subspace};

/// A Lie algebra given by its bracket table on a basis `x_0..x_{n-1}`.
#[derive(Clone, Debug)]
pub struct FiniteLie {
    dim: usize,
    table: Vec<SparseRow>,
}

impl FiniteLie {
    /// `table[i·dim + j] = [x_i, x_j]`.
    pub fn new(dim: usize, table: Vec<SparseRow>) -> Result<Self> {
        if table.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: table.len() });
        }
        if table.iter().flatten().any(|(k, _)| *k >= dim) {
            return Err(Error::InvalidArgument("bracket leaves the basis".into()));
        }
        Ok(FiniteLie { dim, table })
    }

    pub fn from_simple(g: &SimpleLieAlgebra) -> Self {
        let n = g.dim();
        let table = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| g.bracket(i, j).to_vec()).collect();
        FiniteLie { dim: n, table }
    }

    /// The subalgebra spanned by `basis` (indices into `t`), which must be
    /// closed under the truncated bracket.
    pub fn from_truncated(t: &TruncatedAlgebra, basis: &[usize]) -> Result<Self> {
        let table = restricted_action(t, basis, basis)?;
        Ok(FiniteLie { dim: basis.len(), table: table.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim + j]
    }
}

/// A module over a [`FiniteLie`]: `action[i][m] = x_i . v_m`.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    dim: usize,
    action: Vec<Vec<SparseRow>>,
}

impl FiniteModule {
    pub fn new(dim: usize, action: Vec<Vec<SparseRow>>) -> Result<Self> {
        if action.iter().any(|a| a.len() != dim) {
            return Err(Error::InvalidArgument("action matrix has the wrong size".into()));
        }
        if action.iter().flatten().flatten().any(|(k, _)| *k >= dim) {
            return Err(Error::InvalidArgument("action leaves the module".into()));
        }
        Ok(FiniteModule { dim, action })
    }

    pub fn adjoint(l: &FiniteLie) -> Self {
        let action = (0..l.dim).map(|i| (0..l.dim).map(|m| l.bracket(i, m).to_vec()).collect()).collect();
        FiniteModule { dim: l.dim, action }
    }

    pub fn trivial(l: &FiniteLie, dim: usize) -> Self {
        FiniteModule { dim, action: vec![vec![Vec::new(); dim]; l.dim] }
    }

    /// The span of `module` (indices into `t`) under the bracket action of the
    /// elements `domain`; the span must be stable.
    pub fn from_truncated(t: &TruncatedAlgebra, domain: &[usize], module: &[usize]) -> Result<Self> {
        Ok(FiniteModule { dim: module.len(), action: restricted_action(t, domain, module)? })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn act(&self, x: usize, v: usize) -> &[(usize, Rational)] {
        &self.action[x][v]
    }

    /// Does the action satisfy `[x,y].v = x.(y.v) − y.(x.v)`?
    pub fn is_module_over(&self, l: &FiniteLie) -> bool {
        if self.action.len() != l.dim {
            return false;
        }
        for x in 0..l.dim {
            for y in 0..l.dim {
                for v in 0..self.dim {
                    let mut acc: SparseRow = Vec::new();
                    for (z, c) in l.bracket(x, y) {
                        acc.extend(self.act(*z, v).iter().map(|(k, a)| (*k, a * c)));
                    }
                    for (w, c) in self.act(y, v) {
                        acc.extend(self.act(x, *w).iter().map(|(k, a)| (*k, -(a * c))));
                    }
                    for (w, c) in self.act(x, v) {
                        acc.extend(self.act(y, *w).iter().map(|(k, a)| (*k, a * c)));
                    }
                    if !canonicalize(acc).is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn restricted_action(t: &TruncatedAlgebra, domain: &[usize], module: &[usize]) -> Result<Vec<Vec<SparseRow>>> {
    let mut position = vec![usize::MAX; t.dim()];
    for (i, &m) in module.iter().enumerate() {
        position[m] = i;
    }
    domain
        .iter()
        .map(|&x| {
            module
                .iter()
                .map(|&v| {
                    t.bracket(x, v)
                        .iter()
                        .map(|(k, c)| match position[*k] {
                            usize::MAX => Err(Error::InvalidArgument(format!(
                                "[{}, {}] leaves the module",
                                t.label(x),
                                t.label(v)
                            ))),
                            p => Ok((p, c.clone())),
                        })
                        .collect::<Result<SparseRow>>()
                })
                .collect()
        })
        .collect()
}

/// Per-output-coordinate accumulator for one vector-valued constraint.
#[derive(Default)]
struct Constraint(BTreeMap<usize, SparseRow>);

impl Constraint {
    fn add(&mut self, k: usize, col: usize, c: Rational) {
        self.0.entry(k).or_default().push((col, c));
    }

    fn flush(self, rows: &mut Vec<SparseRow>) {
        rows.extend(self.0.into_values().map(canonicalize).filter(|r| !r.is_empty()));
    }
}

/// Derivations `D: L → V`, `D[x,y] = x.D(y) − y.D(x)`.
pub fn derivations(l: &FiniteLie, v: &FiniteModule) -> Subspace {
    let dv = v.dim;
    let mut rows = Vec::new();
    for i in 0..l.dim {
        for j in i + 1..l.dim {
            let mut c = Constraint::default();
            for (s, a) in l.bracket(i, j) {
                for k in 0..dv {
                    c.add(k, s * dv + k, a.clone());
                }
            }
            for m in 0..dv {
                for (k, a) in v.act(i, m) {
                    c.add(*k, j * dv + m, -a);
                }
                for (k, a) in v.act(j, m) {
                    c.add(*k, i * dv + m, a.clone());
                }
            }
            c.flush(&mut rows);
        }
    }
    kernel_of_rows(l.dim * dv, rows)
}

/// Inner derivations `x ↦ x.v`, `v ∈ V`.
pub fn inner_derivations(l: &FiniteLie, v: &FiniteModule) -> Subspace {
    let dv = v.dim;
    let vectors = (0..dv).map(|m| {
        (0..l.dim).flat_map(|i| v.act(i, m).iter().map(move |(k, a)| (i * dv + k, a.clone()))).collect::<SparseRow>()
    });
    Subspace::from_vectors(l.dim * dv, vectors).expect("coordinates in range")
}

/// L-module homomorphisms `φ: V → W`; `φ(v_m)` has coefficient of `w_k` at
/// `m·dim W + k`.
pub fn module_homs(l: &FiniteLie, v: &FiniteModule, w: &FiniteModule) -> Subspace {
    let dw = w.dim;
    let mut rows = Vec::new();
    for i in 0..l.dim {
        for m in 0..v.dim {
            let mut c = Constraint::default();
            for (s, a) in v.act(i, m) {
                for k in 0..dw {
                    c.add(k, s * dw + k, a.clone());
                }
            }
            for n in 0..dw {
                for (k, a) in w.act(i, n) {
                    c.add(*k, m * dw + n, -a);
                }
            }
            c.flush(&mut rows);
        }
    }
    kernel_of_rows(v.dim * dw, rows)
}

/// Bilinear `δ: L × V → W` such that every `δ(x, ·)` is a module
/// homomorphism and every `δ(·, v)` is a derivation `L → W`.
pub fn mixed_bilinear(l: &FiniteLie, v: &FiniteModule, w: &FiniteModule) -> Subspace {
    let (dl, dv, dw) = (l.dim, v.dim, w.dim);
    let col = |a: usize, b: usize, k: usize| (a * dv + b) * dw + k;
    let mut rows = Vec::new();
    // δ(x_a, y.v_b) = y.δ(x_a, v_b)
    for a in 0..dl {
        for y in 0..dl {
            for b in 0..dv {
                let mut c = Constraint::default();
                for (s, x) in v.act(y, b) {
                    for k in 0..dw {
                        c.add(k, col(a, *s, k), x.clone());
                    }
                }
                for n in 0..dw {
                    for (k, x) in w.act(y, n) {
                        c.add(*k, col(a, b, n), -x);
                    }
                }
                c.flush(&mut rows);
            }
        }
    }
    // δ([x_i, x_j], v_b) = x_i.δ(x_j, v_b) − x_j.δ(x_i, v_b)
    for i in 0..dl {
        for j in i + 1..dl {
            for b in 0..dv {
                let mut c = Constraint::default();
                for (s, x) in l.bracket(i, j) {
                    for k in 0..dw {
                        c.add(k, col(*s, b, k), x.clone());
                    }
                }
                for n in 0..dw {
                    for (k, x) in w.act(i, n) {
                        c.add(*k, col(j, b, n), -x);
                    }
                    for (k, x) in w.act(j, n) {
                        c.add(*k, col(i, b, n), x.clone());
                    }
                }
                c.flush(&mut rows);
            }
        }
    }
    kernel_of_rows(dl * dv * dw, rows)
}

/// Symmetry imposed on a bilinear map `F(x, y)` with both arguments in the
/// same space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    #[serde(rename = "sym")]
    Symmetric,
    Skew,
    None,
}

impl Symmetry {
    pub const ALL: [Symmetry; 3] = [Symmetry::Symmetric, Symmetry::Skew, Symmetry::None];

    pub fn name(&self) -> &'static str {
        match self {
            Symmetry::Symmetric => "sym",
            Symmetry::Skew => "skew",
            Symmetry::None => "none",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sym" | "symmetric" => Ok(Symmetry::Symmetric),
            "skew" | "antisymmetric" => Ok(Symmetry::Skew),
            "none" => Ok(Symmetry::None),
            _ => Err(Error::InvalidArgument(format!("unknown symmetry {s:?}"))),
        }
    }
}

impl std::fmt::Display for Symmetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Structural indexing of ordered pairs `(a, b)`, `a, b < n`, under a
/// symmetry: symmetric maps store `a ≤ b`, skew maps store `a < b` (the
/// diagonal is zero and `F(b, a) = −F(a, b)`).
#[derive(Clone, Debug)]
pub struct PairLayout {
    n: usize,
    symmetry: Symmetry,
}

impl PairLayout {
    pub fn new(n: usize, symmetry: Symmetry) -> Self {
        PairLayout { n, symmetry }
    }

    pub fn len(&self) -> usize {
        let n = self.n;
        match self.symmetry {
            Symmetry::None => n * n,
            Symmetry::Symmetric => n * (n + 1) / 2,
            Symmetry::Skew => n * n.saturating_sub(1) / 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Stored slot and sign for `(a, b)`, or `None` when forced to zero.
    pub fn slot(&self, a: usize, b: usize) -> Option<(usize, bool)> {
        let n = self.n;
        let (lo, hi, negate) = if a <= b { (a, b, false) } else { (b, a, true) };
        match self.symmetry {
            Symmetry::None => Some((a * n + b, false)),
            Symmetry::Symmetric => Some((lo * (2 * n - lo + 1) / 2 + (hi - lo), false)),
            Symmetry::Skew if lo == hi => None,
            Symmetry::Skew => Some((lo * (2 * n - lo - 1) / 2 + (hi - lo - 1), negate)),
        }
    }
}

/// Bilinear `F: L × L → V` satisfying
/// `F([x,y],z) = x.F(y,z) − y.F(x,z)` and `F(x,[y,z]) = y.F(x,z) − z.F(x,y)`,
/// in coordinates `slot·dim V + k` of a [`PairLayout`].
pub fn biderivations(l: &FiniteLie, v: &FiniteModule, symmetry: Symmetry) -> Subspace {
    let (dl, dv) = (l.dim, v.dim);
    let layout = PairLayout::new(dl, symmetry);
    let mut rows = Vec::new();
    let term = |c: &mut Constraint, a: usize, b: usize, actor: Option<usize>, coef: &Rational| {
        let Some((slot, neg)) = layout.slot(a, b) else { return };
        let coef = if neg { -coef } else { coef.clone() };
        for n in 0..dv {
            match actor {
                None => c.add(n, slot * dv + n, coef.clone()),
                Some(x) => {
                    for (k, a) in v.act(x, n) {
                        c.add(*k, slot * dv + n, a * &coef);
                    }
                }
            }
        }
    };
    let one = Rational::ONE;
    let minus = -Rational::ONE;
    for x in 0..dl {
        for y in x + 1..dl {
            for z in 0..dl {
                // F([x,y],z) − x.F(y,z) + y.F(x,z)
                let mut c = Constraint::default();
                for (s, a) in l.bracket(x, y) {
                    term(&mut c, *s, z, None, a);
                }
                term(&mut c, y, z, Some(x), &minus);
                term(&mut c, x, z, Some(y), &one);
                c.flush(&mut rows);
                // F(z,[x,y]) − x.F(z,y) + y.F(z,x)
                let mut c = Constraint::default();
                for (s, a) in l.bracket(x, y) {
                    term(&mut c, z, *s, None, a);
                }
                term(&mut c, z, y, Some(x), &minus);
                term(&mut c, z, x, Some(y), &one);
                c.flush(&mut rows);
            }
        }
    }
    kernel_of_rows(layout.len() * dv, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lie(t: &str) -> FiniteLie {
        FiniteLie::from_simple(&SimpleLieAlgebra::from_type(t).unwrap())
    }

    #[test]
    fn adjoint_and_trivial_are_modules() {
        let l = lie("A2");
        assert!(FiniteModule::adjoint(&l).is_module_over(&l));
        assert!(FiniteModule::trivial(&l, 2).is_module_over(&l));
    }

    #[test]
    fn simple_derivations_are_inner() {
        for t in ["A1", "A2", "B2"] {
            let l = lie(t);
            let v = FiniteModule::adjoint(&l);
            let der = derivations(&l, &v);
            assert_eq!(der.dim(), l.dim(), "{t}");
            assert_eq!(der, inner_derivations(&l, &v), "{t}");
        }
    }

    #[test]
    fn adjoint_endomorphisms_are_scalars() {
        let l = lie("A2");
        let v = FiniteModule::adjoint(&l);
        assert_eq!(module_homs(&l, &v, &v).dim(), 1);
        let triv = FiniteModule::trivial(&l, 1);
        assert_eq!(module_homs(&l, &v, &triv).dim(), 0);
    }

    #[test]
    fn pair_layout_is_a_bijection() {
        for n in 0..6 {
            for s in Symmetry::ALL {
                let p = PairLayout::new(n, s);
                let mut seen = vec![0usize; p.len()];
                for a in 0..n {
                    for b in 0..n {
                        if let Some((slot, neg)) = p.slot(a, b) {
                            assert!(slot < p.len());
                            assert_eq!(neg, s == Symmetry::Skew && a > b);
                            if a <= b {
                                seen[slot] += 1;
                            }
                        } else {
                            assert!(s == Symmetry::Skew && a == b);
                        }
                    }
                }
                let expect = if s == Symmetry::None { None } else { Some(1) };
                if let Some(e) = expect {
                    assert!(seen.iter().all(|&c| c == e), "{n} {s}");
                }
            }
        }
    }

    #[test]
    fn semisimple_bilinear_systems_vanish() {
        let l = lie("A1");
        let ad = FiniteModule::adjoint(&l);
        assert!(mixed_bilinear(&l, &ad, &ad).is_zero());
        assert!(biderivations(&l, &ad, Symmetry::Symmetric).is_zero());
        assert!(biderivations(&l, &FiniteModule::trivial(&l, 1), Symmetry::Symmetric).is_zero());
    }

    #[test]
    fn skew_biderivations_of_sl2_are_multiples_of_the_bracket() {
        let l = lie("A1");
        let ad = FiniteModule::adjoint(&l);
        let skew = biderivations(&l, &ad, Symmetry::Skew);
        assert_eq!(skew.dim(), 1);
        let layout = PairLayout::new(3, Symmetry::Skew);
        let mut f: SparseRow = Vec::new();
        for a in 0..3 {
            for b in a + 1..3 {
                let (slot, _) = layout.slot(a, b).unwrap();
                f.extend(l.bracket(a, b).iter().map(|(k, c)| (slot * 3 + k, c.clone())));
            }
        }
        assert!(skew.contains(&canonicalize(f)).unwrap());
    }

    #[test]
    fn unconstrained_is_sym_plus_skew() {
        let l = lie("A1");
        let ad = FiniteModule::adjoint(&l);
        let all = biderivations(&l, &ad, Symmetry::None).dim();
        let sym = biderivations(&l, &ad, Symmetry::Symmetric).dim();
        let skew = biderivations(&l, &ad, Symmetry::Skew).dim();
        assert_eq!(all, sym + skew);
    }
}
