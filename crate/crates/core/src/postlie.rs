//! Commutative post-Lie structures: products `x.y` on a Lie algebra with
//!
//! ```text
//! x.y = y.x
//! [x,y].z = x.(y.z) − y.(x.z)
//! x.[y,z] = [x.y,z] + [y,x.z]
//! ```
//!
//! Such a product is a symmetric biderivation, so on a truncation the only
//! candidates are found by a linear solve; the quadratic axiom is then checked
//! on what remains.

use serde::{Deserialize, Serialize};

use crate::affine::{AffineVirasoro, Selector, TruncatedAlgebra, TruncationWindow};
use crate::biderivation::{
    biderivation_witness, BiderivationProblem, BiderivationSolver, GradedBilinearMap, IdentityWitness, Symmetry,
};
use crate::error::{Error, Result};
use crate::linalg::{canonicalize, Rational, SparseRow};
use crate::par;

/// A product given as a finite sum of homogeneous components.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BilinearProduct {
    components: Vec<GradedBilinearMap>,
}

impl BilinearProduct {
    pub fn zero() -> Self {
        BilinearProduct::default()
    }

    pub fn new(components: Vec<GradedBilinearMap>) -> Self {
        BilinearProduct { components }
    }

    pub fn components(&self) -> &[GradedBilinearMap] {
        &self.components
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.components.iter().map(|c| c.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn product(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> SparseRow {
        let mut out = Vec::new();
        for c in &self.components {
            out.extend(c.apply(x, y));
        }
        canonicalize(out)
    }
}

impl From<GradedBilinearMap> for BilinearProduct {
    fn from(m: GradedBilinearMap) -> Self {
        BilinearProduct::new(vec![m])
    }
}

/// A failed axiom (1: commutativity, 2: `[x,y].z`, 3: Leibniz in the
/// bracket argument) with the basis elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: u8,
    pub witness: Vec<String>,
}

/// Checks the three axioms on window-safe basis pairs and triples; returns
/// the first violation of each failing axiom.
pub fn is_commutative_postlie(t: &TruncatedAlgebra, prod: &BilinearProduct) -> (bool, Vec<AxiomViolation>) {
    let mut violations = Vec::new();
    if let Some(w) = commutativity_witness(t, prod) {
        violations.push(w);
    }
    violations.extend(triple_witnesses(t, prod));
    (violations.is_empty(), violations)
}

fn one(i: usize) -> SparseRow {
    vec![(i, Rational::ONE)]
}

/// Pairs are scanned by increasing `|deg a| + |deg b|`, so the reported
/// witness is the lowest-degree one.
fn commutativity_witness(t: &TruncatedAlgebra, prod: &BilinearProduct) -> Option<AxiomViolation> {
    let n = t.dim();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.sort_by_key(|&(a, b)| (t.degree(a).abs() + t.degree(b).abs(), a, b));
    pairs
        .into_iter()
        .find(|&(a, b)| prod.product(&one(a), &one(b)) != prod.product(&one(b), &one(a)))
        .map(|(a, b)| AxiomViolation { axiom: 1, witness: vec![t.label(a), t.label(b)] })
}

fn triple_witnesses(t: &TruncatedAlgebra, prod: &BilinearProduct) -> Vec<AxiomViolation> {
    let degrees = prod.degrees();
    let ok = |d: i64| t.in_window(d);
    // every term of every component stays in the window
    let safe = |shifts: &[(i64, i64)]| degrees.iter().all(|&n| shifts.iter().all(|&(base, k)| ok(base + k * n)));
    let dim = t.dim();
    let found: Vec<[Option<(usize, usize, usize)>; 2]> = par::map_indices(dim, |x| {
        let p = t.degree(x);
        let mut first = [None, None];
        for y in 0..dim {
            let q = t.degree(y);
            for z in 0..dim {
                let r = t.degree(z);
                if first[0].is_none()
                    && x < y
                    && ok(p + q)
                    && safe(&[(p + q + r, 1), (q + r, 1), (p + r, 1), (p + q + r, 2)])
                {
                    let lhs = prod.product(t.bracket(x, y), &one(z));
                    let mut rhs = prod.product(&one(x), &prod.product(&one(y), &one(z)));
                    rhs.extend(prod.product(&one(y), &prod.product(&one(x), &one(z))).into_iter().map(|(k, c)| (k, -c)));
                    if canonicalize(rhs) != lhs {
                        first[0] = Some((x, y, z));
                    }
                }
                if first[1].is_none() && y < z && ok(q + r) && safe(&[(p + q + r, 1), (p + q, 1), (p + r, 1)]) {
                    let lhs = prod.product(&one(x), t.bracket(y, z));
                    let mut rhs = t.bracket_vec(&prod.product(&one(x), &one(y)), &one(z));
                    rhs.extend(t.bracket_vec(&one(y), &prod.product(&one(x), &one(z))));
                    if canonicalize(rhs) != lhs {
                        first[1] = Some((x, y, z));
                    }
                }
                if first[0].is_some() && first[1].is_some() {
                    return first;
                }
            }
        }
        first
    });
    let mut out = Vec::new();
    for (slot, axiom) in [(0usize, 2u8), (1, 3)] {
        if let Some((x, y, z)) = found.iter().find_map(|f| f[slot]) {
            out.push(AxiomViolation { axiom, witness: vec![t.label(x), t.label(y), t.label(z)] });
        }
    }
    out
}

/// Outcome of reading a product as a bilinear map and testing both
/// biderivation identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiderivationCheck {
    pub passed: bool,
    pub witness: Option<IdentityWitness>,
}

/// The product as a biderivation candidate; a genuine commutative post-Lie
/// product always passes.
pub fn postlie_to_biderivation(t: &TruncatedAlgebra, prod: &GradedBilinearMap) -> (GradedBilinearMap, BiderivationCheck) {
    let witness = biderivation_witness(t, prod);
    (prod.clone(), BiderivationCheck { passed: witness.is_none(), witness })
}

/// One degree of the triviality report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostLieRow {
    pub selector: Selector,
    #[serde(rename = "N")]
    pub window: i64,
    #[serde(rename = "n")]
    pub degree: i64,
    pub sym_bider_dim_interior: usize,
    pub postlie_trivial: bool,
}

/// Per degree: the symmetric biderivation space restricted to the interior
/// must vanish, leaving the zero product, which must satisfy all axioms.
pub fn postlie_triviality_report(
    alg: &AffineVirasoro,
    window: TruncationWindow,
    selector: Selector,
    degrees: &[i64],
) -> Result<Vec<PostLieRow>> {
    if window.n() < 3 {
        return Err(Error::WindowTooSmall { window: window.n(), degree: 0 });
    }
    let t = alg.truncate(window, selector);
    let zero_ok = is_commutative_postlie(&t, &BilinearProduct::zero()).0;
    degrees
        .iter()
        .map(|&n| {
            let solver = BiderivationSolver::new(&t, BiderivationProblem::new(selector, window, n, Symmetry::Symmetric)?)?;
            let dim = solver.restrict_to_interior(&solver.solution_space()).dim();
            Ok(PostLieRow {
                selector,
                window: window.n(),
                degree: n,
                sym_bider_dim_interior: dim,
                postlie_trivial: dim == 0 && zero_ok,
            })
        })
        .collect()
}
