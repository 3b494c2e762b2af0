use std::collections::HashMap;

use super::{CartanMatrix, RootSystem};
use crate::error::Result;
use crate::linalg::{Rational, SparseRow};
use crate::par;

/// Which invariant form to use as `(·,·)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FormNormalization {
    /// The Killing form κ(x, y) = tr(ad x ad y).
    #[default]
    Killing,
    /// κ / (2h∨): the invariant form with (θ, θ) = 2 on the highest root.
    Normalized,
}

/// A finite-dimensional simple Lie algebra in a Chevalley basis.
///
/// Basis order: `e_α` for the positive roots, then `f_α = e_{−α}` in the same
/// order, then the coroots `h_1, …, h_r`. Root vectors therefore share their
/// index with the root id in [`RootSystem`].
///
/// Signs follow the extraspecial-pair convention: N_{α,β} > 0 whenever (α, β)
/// is the extraspecial pair of α + β; with `[e_α, e_{−α}] = h_α` this fixes
/// every structure constant.
#[derive(Clone, Debug)]
pub struct SimpleLieAlgebra {
    roots: RootSystem,
    names: Vec<String>,
    weights: Vec<Vec<i64>>,
    /// `table[i * dim + j] = [x_i, x_j]`.
    table: Vec<SparseRow>,
    killing: Vec<Vec<Rational>>,
    dual_coxeter: i64,
}

impl SimpleLieAlgebra {
    pub fn from_type(name: &str) -> Result<Self> {
        Self::new(&CartanMatrix::from_type(name)?)
    }

    pub fn new(cartan: &CartanMatrix) -> Result<Self> {
        let roots = RootSystem::from_cartan(cartan)?;
        let table = chevalley_table(&roots);
        let p = roots.num_positive();
        let r = roots.rank();
        let label = |v: &[i64]| v.iter().map(|x| x.abs().to_string()).collect::<String>();
        let mut names = Vec::with_capacity(2 * p + r);
        let mut weights = Vec::with_capacity(2 * p + r);
        for id in 0..2 * p {
            let prefix = if id < p { "e" } else { "f" };
            names.push(format!("{prefix}{}", label(roots.root(id))));
            weights.push(roots.root(id).to_vec());
        }
        for i in 0..r {
            names.push(format!("h{}", i + 1));
            weights.push(vec![0; r]);
        }
        let mut g = SimpleLieAlgebra {
            roots,
            names,
            weights,
            table,
            killing: Vec::new(),
            dual_coxeter: 0,
        };
        g.killing = g.compute_killing();
        // κ(h_θ, h_θ) = 2h∨ · (θ∨, θ∨)_normalized = 4h∨
        let theta = g.roots.highest_root();
        let h_theta = g.coroot(theta);
        let k = g.form_on(&h_theta, &h_theta, FormNormalization::Killing);
        g.dual_coxeter = (k / Rational::from_int(4)).to_i64().expect("integral dual Coxeter number");
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn rank(&self) -> usize {
        self.roots.rank()
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn cartan(&self) -> &CartanMatrix {
        self.roots.cartan()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of the basis element with the given name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Root-lattice weight of a basis element (zero for the Cartan part).
    pub fn weight(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }

    pub fn e(&self, positive_root: usize) -> usize {
        positive_root
    }

    pub fn f(&self, positive_root: usize) -> usize {
        positive_root + self.roots.num_positive()
    }

    pub fn h(&self, i: usize) -> usize {
        2 * self.roots.num_positive() + i
    }

    pub fn is_cartan(&self, i: usize) -> bool {
        i >= 2 * self.roots.num_positive()
    }

    pub fn dual_coxeter_number(&self) -> i64 {
        self.dual_coxeter
    }

    /// `[x_i, x_j]` as a sparse combination of basis elements.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim() + j]
    }

    pub fn bracket_vec(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseRow {
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                out.extend(self.bracket(*i, *j).iter().map(|(k, c)| (*k, c * &ab)));
            }
        }
        crate::linalg::canonicalize(out)
    }

    /// Coroot h_α of a root, in the basis h_1..h_r.
    pub fn coroot(&self, root: usize) -> SparseRow {
        coroot_in(&self.roots, root)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.h(i), c))
            .collect()
    }

    /// Structure constant N_{α,β} with `[e_α, e_β] = N_{α,β} e_{α+β}`.
    pub fn structure_constant(&self, a: usize, b: usize) -> Rational {
        match self.roots.sum(a, b) {
            Some(s) => crate::linalg::get(self.bracket(a, b), s),
            None => Rational::ZERO,
        }
    }

    pub fn killing(&self, i: usize, j: usize) -> &Rational {
        &self.killing[i][j]
    }

    pub fn killing_matrix(&self) -> &[Vec<Rational>] {
        &self.killing
    }

    /// The chosen invariant form on basis elements.
    pub fn form(&self, i: usize, j: usize, norm: FormNormalization) -> Rational {
        match norm {
            FormNormalization::Killing => self.killing[i][j].clone(),
            FormNormalization::Normalized => {
                &self.killing[i][j] / &Rational::from_int(2 * self.dual_coxeter)
            }
        }
    }

    pub fn form_on(&self, x: &[(usize, Rational)], y: &[(usize, Rational)], norm: FormNormalization) -> Rational {
        let mut acc = Rational::ZERO;
        for (i, a) in x {
            for (j, b) in y {
                let k = self.form(*i, *j, norm);
                if !k.is_zero() {
                    acc += &(&(a * b) * &k);
                }
            }
        }
        acc
    }

    /// Matrix of ad x_i: `result[k] = [x_i, x_k]`.
    pub fn ad(&self, i: usize) -> Vec<SparseRow> {
        (0..self.dim()).map(|k| self.bracket(i, k).to_vec()).collect()
    }

    fn compute_killing(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        let rows = par::map_indices(n, |i| {
            (0..n)
                .map(|j| {
                    let opposite = self.weights[i].iter().zip(&self.weights[j]).all(|(a, b)| a + b == 0);
                    if !opposite {
                        return Rational::ZERO;
                    }
                    // tr(ad x_i ad x_j) = Σ_k coefficient of x_k in [x_i, [x_j, x_k]]
                    let mut tr = Rational::ZERO;
                    for k in 0..n {
                        for (l, c) in self.bracket(j, k) {
                            let v = crate::linalg::get(self.bracket(i, *l), k);
                            if !v.is_zero() {
                                tr += &(c * &v);
                            }
                        }
                    }
                    tr
                })
                .collect()
        });
        rows
    }
}

fn coroot_in(roots: &RootSystem, root: usize) -> Vec<Rational> {
    let r = roots.rank();
    let lengths = roots.cartan().symmetrizer().expect("validated");
    let a = roots.root(root);
    let len = roots.inner(a, a);
    (0..r)
        .map(|i| &(&Rational::from_int(a[i]) * &lengths[i]) / &len)
        .collect()
}

/// Builds `[x_i, x_j]` for the whole Chevalley basis.
fn chevalley_table(roots: &RootSystem) -> Vec<SparseRow> {
    let p = roots.num_positive();
    let r = roots.rank();
    let dim = 2 * p + r;
    let mut ns = StructureConstants::new(roots);
    let mut table = vec![Vec::new(); dim * dim];
    let h = |i: usize| 2 * p + i;
    for a in 0..2 * p {
        for b in 0..2 * p {
            let entry: SparseRow = if roots.negate(a) == b {
                let sign = if roots.is_positive(a) { Rational::ONE } else { -Rational::ONE };
                let base = if roots.is_positive(a) { a } else { b };
                coroot_in(roots, base)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (h(i), &c * &sign))
                    .collect()
            } else {
                match roots.sum(a, b) {
                    Some(s) => vec![(s, ns.get(a, b))],
                    None => Vec::new(),
                }
            };
            table[a * dim + b] = entry;
        }
        for i in 0..r {
            let c = Rational::from_int(roots.pairing(roots.root(a), i));
            if !c.is_zero() {
                table[h(i) * dim + a] = vec![(a, c.clone())];
                table[a * dim + h(i)] = vec![(a, -c)];
            }
        }
    }
    table
}

/// N_{α,β} for all pairs of roots, derived from the extraspecial pairs.
struct StructureConstants<'a> {
    roots: &'a RootSystem,
    lengths: Vec<Rational>,
    memo: HashMap<(usize, usize), Rational>,
}

impl<'a> StructureConstants<'a> {
    fn new(roots: &'a RootSystem) -> Self {
        let lengths = (0..roots.num_roots()).map(|i| roots.inner(roots.root(i), roots.root(i))).collect();
        StructureConstants { roots, lengths, memo: HashMap::new() }
    }

    fn len2(&self, a: usize) -> &Rational {
        &self.lengths[a]
    }

    fn len2_of(&self, v: &[i64]) -> Rational {
        self.roots.inner(v, v)
    }

    fn get(&mut self, a: usize, b: usize) -> Rational {
        let rs = self.roots;
        let Some(s) = rs.sum(a, b) else { return Rational::ZERO };
        match (rs.is_positive(a), rs.is_positive(b)) {
            (true, true) => self.positive_pair(a, b, s),
            (false, false) => -self.get(rs.negate(a), rs.negate(b)),
            (false, true) => -self.get(b, a),
            (true, false) => {
                // a + b + γ = 0 with γ = −s:
                // N_{a,b}/(γ,γ) = N_{b,γ}/(a,a) = N_{γ,a}/(b,b)
                let gamma = rs.negate(s);
                let gg = self.len2(gamma).clone();
                if rs.is_positive(s) {
                    let n = self.get(b, gamma);
                    &(&gg / self.len2(a)) * &n
                } else {
                    let n = self.get(gamma, a);
                    &(&gg / self.len2(b)) * &n
                }
            }
        }
    }

    fn positive_pair(&mut self, a: usize, b: usize, xi: usize) -> Rational {
        if a > b {
            return -self.positive_pair(b, a, xi);
        }
        if let Some(v) = self.memo.get(&(a, b)) {
            return v.clone();
        }
        let rs = self.roots;
        let (ea, eb) = self.extraspecial(xi);
        let value = if (a, b) == (ea, eb) {
            Rational::from_int(rs.string_below(a, b) + 1)
        } else {
            // N_{a,b} N_{−a',−b'}/(ξ,ξ) + N_{b,−a'} N_{a,−b'}/(b−a', b−a')
            //   + N_{−a',a} N_{b,−b'}/(a−a', a−a') = 0, with N_{−a',−b'} = −N_{a',b'}
            let na = rs.negate(ea);
            let nb = rs.negate(eb);
            let mut bracket_sum = Rational::ZERO;
            if rs.sum(b, na).is_some() {
                let diff: Vec<i64> = rs.root(b).iter().zip(rs.root(ea)).map(|(x, y)| x - y).collect();
                let t = &self.get(b, na) * &self.get(a, nb);
                bracket_sum += &(&t / &self.len2_of(&diff));
            }
            if rs.sum(na, a).is_some() {
                let diff: Vec<i64> = rs.root(a).iter().zip(rs.root(ea)).map(|(x, y)| x - y).collect();
                let t = &self.get(na, a) * &self.get(b, nb);
                bracket_sum += &(&t / &self.len2_of(&diff));
            }
            let n_extra = self.positive_pair(ea, eb, xi);
            &(&bracket_sum * self.len2(xi)) / &n_extra
        };
        self.memo.insert((a, b), value.clone());
        value
    }

    /// (α', β') with α' the first simple root such that ξ − α' ∈ Φ⁺.
    fn extraspecial(&self, xi: usize) -> (usize, usize) {
        let rs = self.roots;
        let coords = rs.root(xi);
        for i in 0..rs.rank() {
            let mut rest = coords.to_vec();
            rest[i] -= 1;
            if let Some(b) = rs.find(&rest) {
                if rs.is_positive(b) {
                    return (i, b);
                }
            }
        }
        unreachable!("simple roots have no extraspecial pair")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::get;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn sl2_relations() {
        let g = SimpleLieAlgebra::from_type("A1").unwrap();
        let (e, f, h) = (0, 1, 2);
        assert_eq!(g.names(), &["e1", "f1", "h1"]);
        assert_eq!(g.bracket(e, f), &[(h, r(1))]);
        assert_eq!(g.bracket(h, e), &[(e, r(2))]);
        assert_eq!(g.bracket(h, f), &[(f, r(-2))]);
    }

    #[test]
    fn sl2_killing_by_hand() {
        let g = SimpleLieAlgebra::from_type("A1").unwrap();
        assert_eq!(*g.killing(2, 2), r(8));
        assert_eq!(*g.killing(0, 1), r(4));
        assert_eq!(*g.killing(0, 0), r(0));
        assert_eq!(g.dual_coxeter_number(), 2);
        assert_eq!(g.form(0, 1, FormNormalization::Normalized), r(1));
    }

    #[test]
    fn a2_strings() {
        let g = SimpleLieAlgebra::from_type("A2").unwrap();
        let n = g.structure_constant(0, 1);
        assert!(n == r(1) || n == r(-1));
        // α₁ + (α₁ + α₂) is not a root
        assert!(g.bracket(0, 2).is_empty());
    }

    #[test]
    fn extraspecial_positive() {
        for t in ["A3", "B3", "C3", "G2", "F4"] {
            let g = SimpleLieAlgebra::from_type(t).unwrap();
            let rs = g.root_system();
            let sc = StructureConstants::new(rs);
            for xi in rs.rank()..rs.num_positive() {
                let (a, b) = sc.extraspecial(xi);
                assert!(g.structure_constant(a, b) > Rational::ZERO, "{t}");
            }
        }
    }

    #[test]
    fn dual_coxeter_numbers() {
        for (t, hv) in [("A3", 4), ("B3", 5), ("C3", 4), ("D4", 6), ("G2", 4), ("F4", 9), ("E6", 12)] {
            assert_eq!(SimpleLieAlgebra::from_type(t).unwrap().dual_coxeter_number(), hv, "{t}");
        }
    }

    #[test]
    fn coroots_integral() {
        let g = SimpleLieAlgebra::from_type("G2").unwrap();
        for a in 0..g.root_system().num_positive() {
            let hv = g.bracket(g.e(a), g.f(a));
            assert!(hv.iter().all(|(_, c)| c.is_integer()));
            // [h_α, e_α] = 2 e_α
            let act = g.bracket_vec(hv, &[(a, r(1))]);
            assert_eq!(get(&act, a), r(2));
        }
    }
}
