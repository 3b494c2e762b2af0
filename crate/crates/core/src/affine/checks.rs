use super::{AffineVirasoro, BasisIndex, Selector, TruncatedAlgebra, TruncationWindow};
use crate::linalg::{canonicalize, Rational};
use crate::par;

/// Outcome of the exhaustive Jacobi check on window-safe triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub triples_checked: usize,
    pub violations: Vec<[BasisIndex; 3]>,
}

impl JacobiReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Bracket-table sanity checks for 𝔏(g) on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub antisymmetry_violations: Vec<[BasisIndex; 2]>,
    pub degree_violations: Vec<[BasisIndex; 2]>,
    pub ideal_violations: Vec<[BasisIndex; 2]>,
    pub jacobi: JacobiReport,
    pub center_dim: usize,
    pub center_is_k1_k2: bool,
}

impl SoundnessReport {
    pub fn ok(&self) -> bool {
        self.antisymmetry_violations.is_empty()
            && self.degree_violations.is_empty()
            && self.ideal_violations.is_empty()
            && self.jacobi.ok()
            && self.center_is_k1_k2
    }
}

impl TruncatedAlgebra {
    /// Checks `[[a,b],c] + [[b,c],a] + [[c,a],b] = 0` over unordered basis
    /// triples whose pairwise and total degrees all stay in the window, so no
    /// intermediate bracket is truncated.
    pub fn jacobi_report(&self) -> JacobiReport {
        let n = self.dim();
        let ok = |d: i64| self.in_window(d);
        let per_a = par::map_indices(n, |a| {
            let mut checked = 0usize;
            let mut bad = Vec::new();
            let da = self.degree(a);
            for b in a..n {
                let db = self.degree(b);
                if !ok(da + db) {
                    continue;
                }
                for c in b..n {
                    let dc = self.degree(c);
                    if !(ok(db + dc) && ok(da + dc) && ok(da + db + dc)) {
                        continue;
                    }
                    checked += 1;
                    let mut sum = Vec::new();
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        sum.extend(self.bracket_vec(self.bracket(x, y), &[(z, Rational::ONE)]));
                    }
                    if !canonicalize(sum).is_empty() {
                        bad.push([self.basis_index(a), self.basis_index(b), self.basis_index(c)]);
                    }
                }
            }
            (checked, bad)
        });
        let triples_checked = per_a.iter().map(|(c, _)| c).sum();
        let violations = per_a.into_iter().flat_map(|(_, b)| b).collect();
        JacobiReport { triples_checked, violations }
    }

    /// Pairs with `[a,b] ≠ −[b,a]`.
    pub fn antisymmetry_violations(&self) -> Vec<[BasisIndex; 2]> {
        let n = self.dim();
        let mut bad = Vec::new();
        for a in 0..n {
            for b in a..n {
                let mut sum = self.bracket(a, b).to_vec();
                sum.extend(self.bracket(b, a).iter().cloned());
                if !canonicalize(sum).is_empty() {
                    bad.push([self.basis_index(a), self.basis_index(b)]);
                }
            }
        }
        bad
    }

    /// Pairs whose bracket has a term of degree other than `deg a + deg b`.
    pub fn degree_violations(&self) -> Vec<[BasisIndex; 2]> {
        let n = self.dim();
        let mut bad = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let d = self.degree(a) + self.degree(b);
                if self.bracket(a, b).iter().any(|(k, _)| self.degree(*k) != d) {
                    bad.push([self.basis_index(a), self.basis_index(b)]);
                }
            }
        }
        bad
    }

    /// Pairs (x, y) with y in `ideal` whose bracket leaves `ideal`.
    pub fn ideal_violations(&self, ideal: Selector) -> Vec<[BasisIndex; 2]> {
        let n = self.dim();
        let mut bad = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if !ideal.contains(&self.basis_index(y)) {
                    continue;
                }
                if self.bracket(x, y).iter().any(|(k, _)| !ideal.contains(&self.basis_index(*k))) {
                    bad.push([self.basis_index(x), self.basis_index(y)]);
                }
            }
        }
        bad
    }
}

/// Antisymmetry, degree additivity, Jacobi, the g̃ ideal property and the
/// degree-0 center of the full algebra on a window.
pub fn soundness(alg: &AffineVirasoro, window: TruncationWindow) -> SoundnessReport {
    let t = alg.truncate(window, Selector::Full);
    let center = t.center_degree0();
    let expected = vec![super::Element::basis(BasisIndex::K1), super::Element::basis(BasisIndex::K2)];
    SoundnessReport {
        antisymmetry_violations: t.antisymmetry_violations(),
        degree_violations: t.degree_violations(),
        ideal_violations: t.ideal_violations(Selector::GTilde),
        jacobi: t.jacobi_report(),
        center_dim: center.dim(),
        center_is_k1_k2: center.basis_elements() == expected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(t: &str) -> AffineVirasoro {
        AffineVirasoro::from_type(t).unwrap()
    }

    fn w(n: i64) -> TruncationWindow {
        TruncationWindow::new(n).unwrap()
    }

    #[test]
    fn a1_full_sound() {
        let r = soundness(&alg("A1"), w(4));
        assert!(r.ok(), "{r:?}");
        assert!(r.jacobi.triples_checked > 1000);
        assert_eq!(r.center_dim, 2);
    }

    #[test]
    fn a2_gtilde_jacobi() {
        let t = alg("A2").truncate(w(2), Selector::GTilde);
        assert!(t.jacobi_report().ok());
    }

    #[test]
    fn every_selector_is_closed_and_jacobi() {
        let l = alg("B2");
        for s in Selector::ALL {
            let t = l.truncate(w(2), s);
            assert!(t.jacobi_report().ok(), "{s}");
            assert!(t.antisymmetry_violations().is_empty(), "{s}");
        }
    }

    #[test]
    fn vir_is_not_an_ideal() {
        let t = alg("A1").truncate(w(2), Selector::Full);
        assert!(t.ideal_violations(Selector::GTilde).is_empty());
        assert!(!t.ideal_violations(Selector::Vir).is_empty());
    }
}
