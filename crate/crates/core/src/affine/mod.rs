//! The affine-Virasoro algebra 𝔏(g) = g⊗ℂ[t, t⁻¹] ⊕ ℂK₁ ⊕ ℂK₂ ⊕ ⨁ ℂd_m.
//!
//! Brackets:
//!
//! ```text
//! [x⊗t^m, y⊗t^n] = [x,y]⊗t^{m+n} + m (x,y) δ_{m+n,0} K₁
//! [d_m, x⊗t^n]   = n x⊗t^{m+n}
//! [d_m, d_n]     = (n−m) d_{m+n} + δ_{m+n,0} (m³−m)/12 K₂
//! K₁, K₂ central
//! ```
//!
//! The algebra is ℤ-graded by `deg(x⊗t^m) = deg(d_m) = m`, `deg K_i = 0`.
//! Computations happen on a [`TruncationWindow`] of degrees `−N..=N`: brackets
//! landing outside the window are dropped.

mod checks;
mod truncated;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

pub use checks::{soundness, JacobiReport, SoundnessReport};
pub use truncated::{DegreeZeroCenter, TruncatedAlgebra};

use crate::error::{Error, Result};
use crate::lie::{FormNormalization, SimpleLieAlgebra};
use crate::linalg::Rational;

/// One basis vector of 𝔏(g).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisIndex {
    /// `x_g ⊗ t^power` for the Chevalley basis element with index `g`.
    Loop { g: usize, power: i64 },
    D(i64),
    K1,
    K2,
}

impl BasisIndex {
    pub fn loop_(g: usize, power: i64) -> Self {
        BasisIndex::Loop { g, power }
    }

    pub fn degree(&self) -> i64 {
        match *self {
            BasisIndex::Loop { power, .. } => power,
            BasisIndex::D(m) => m,
            BasisIndex::K1 | BasisIndex::K2 => 0,
        }
    }

    pub fn is_central(&self) -> bool {
        matches!(self, BasisIndex::K1 | BasisIndex::K2)
    }
}

/// Degree of a basis element.
pub fn degree(i: &BasisIndex) -> i64 {
    i.degree()
}

/// Which subalgebra, ideal or quotient of 𝔏(g) to work in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Selector {
    /// 𝔏(g) itself.
    Full,
    /// g̃ = ĝ ⊕ ℂK₁, an ideal of 𝔏(g).
    GTilde,
    /// The loop algebra ĝ = g⊗ℂ[t, t⁻¹].
    GHat,
    /// The Virasoro algebra span{d_m} ⊕ ℂK₂.
    Vir,
    /// 𝔏(g)/Z: K₁, K₂ removed and central terms dropped from the bracket.
    Quotient,
    /// g alone, as the degree-0 loop elements.
    SimpleG,
}

impl Selector {
    pub const ALL: [Selector; 6] =
        [Selector::Full, Selector::GTilde, Selector::GHat, Selector::Vir, Selector::Quotient, Selector::SimpleG];

    pub fn contains(&self, i: &BasisIndex) -> bool {
        use BasisIndex::*;
        match self {
            Selector::Full => true,
            Selector::GTilde => matches!(i, Loop { .. } | K1),
            Selector::GHat => matches!(i, Loop { .. }),
            Selector::Vir => matches!(i, D(_) | K2),
            Selector::Quotient => matches!(i, Loop { .. } | D(_)),
            Selector::SimpleG => matches!(i, Loop { power: 0, .. }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Selector::Full => "Full",
            Selector::GTilde => "GTilde",
            Selector::GHat => "GHat",
            Selector::Vir => "Vir",
            Selector::Quotient => "Quotient",
            Selector::SimpleG => "SimpleG",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Selector::ALL
            .into_iter()
            .find(|sel| sel.name().to_ascii_lowercase() == lower || (lower == "simple" && *sel == Selector::SimpleG))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown selector {s:?}")))
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Degrees `−N..=N` are retained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncationWindow(i64);

impl TruncationWindow {
    pub fn new(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidWindow(n));
        }
        Ok(TruncationWindow(n))
    }

    pub fn n(&self) -> i64 {
        self.0
    }

    pub fn contains(&self, degree: i64) -> bool {
        degree.abs() <= self.0
    }
}

/// A sparse linear combination of basis elements of 𝔏(g).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<BasisIndex, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: BasisIndex) -> Self {
        Self::from_terms([(i, Rational::ONE)])
    }

    pub fn from_terms<I: IntoIterator<Item = (BasisIndex, Rational)>>(terms: I) -> Self {
        let mut e = Element::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    pub fn add_term(&mut self, i: BasisIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_insert(Rational::ZERO);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, i: &BasisIndex) -> Rational {
        self.terms.get(i).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> Element {
        Element::from_terms(self.terms.iter().map(|(i, x)| (*i, x * c)))
    }

    fn retain<F: FnMut(&BasisIndex) -> bool>(&mut self, mut keep: F) {
        self.terms.retain(|i, _| keep(i));
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (i, c) in &rhs.terms {
            out.add_term(*i, c.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scaled(&-Rational::ONE)
    }
}

/// 𝔏(g) for a fixed simple g and choice of invariant form.
#[derive(Clone, Debug)]
pub struct AffineVirasoro {
    g: Arc<SimpleLieAlgebra>,
    form: FormNormalization,
}

impl AffineVirasoro {
    pub fn new(g: SimpleLieAlgebra) -> Self {
        Self::with_form(Arc::new(g), FormNormalization::Killing)
    }

    pub fn with_form(g: Arc<SimpleLieAlgebra>, form: FormNormalization) -> Self {
        AffineVirasoro { g, form }
    }

    pub fn from_type(name: &str) -> Result<Self> {
        Ok(Self::new(SimpleLieAlgebra::from_type(name)?))
    }

    pub fn g(&self) -> &SimpleLieAlgebra {
        &self.g
    }

    pub fn g_arc(&self) -> &Arc<SimpleLieAlgebra> {
        &self.g
    }

    pub fn form(&self) -> FormNormalization {
        self.form
    }

    /// Basis element of g by name (`"e1"`, `"h2"`, …) at the given power of t.
    pub fn loop_elem(&self, name: &str, power: i64) -> Result<BasisIndex> {
        let g = self
            .g
            .index_of(name)
            .ok_or_else(|| Error::InvalidArgument(format!("no basis element {name:?} in g")))?;
        Ok(BasisIndex::Loop { g, power })
    }

    pub fn label(&self, i: &BasisIndex) -> String {
        match *i {
            BasisIndex::Loop { g, power } => format!("{}⊗t^{}", self.g.name(g), power),
            BasisIndex::D(m) => format!("d{m}"),
            BasisIndex::K1 => "K1".to_string(),
            BasisIndex::K2 => "K2".to_string(),
        }
    }

    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = e.terms().map(|(i, c)| format!("({c})·{}", self.label(i))).collect();
        parts.join(" + ")
    }

    /// The bracket in 𝔏(g) with no truncation or selector applied.
    pub fn raw_bracket(&self, a: &BasisIndex, b: &BasisIndex) -> Element {
        use BasisIndex::*;
        let mut out = Element::zero();
        match (*a, *b) {
            (Loop { g: x, power: m }, Loop { g: y, power: n }) => {
                for (k, c) in self.g.bracket(x, y) {
                    out.add_term(Loop { g: *k, power: m + n }, c.clone());
                }
                if m + n == 0 && m != 0 {
                    let k = self.g.form(x, y, self.form);
                    out.add_term(K1, &Rational::from_int(m) * &k);
                }
            }
            (D(m), Loop { g: x, power: n }) => {
                out.add_term(Loop { g: x, power: m + n }, Rational::from_int(n));
            }
            (Loop { g: x, power: n }, D(m)) => {
                out.add_term(Loop { g: x, power: m + n }, Rational::from_int(-n));
            }
            (D(m), D(n)) => {
                out.add_term(D(m + n), Rational::from_int(n - m));
                if m + n == 0 {
                    out.add_term(K2, Rational::new(m * m * m - m, 12));
                }
            }
            _ => {}
        }
        out
    }

    /// `[a, b]` within selector `s`, projected to the window.
    pub fn bracket(&self, a: &BasisIndex, b: &BasisIndex, w: TruncationWindow, s: Selector) -> Result<Element> {
        for x in [a, b] {
            if !s.contains(x) || !w.contains(x.degree()) {
                return Err(Error::OutOfWindow(self.label(x)));
            }
        }
        let mut out = self.raw_bracket(a, b);
        out.retain(|i| s.contains(i) && w.contains(i.degree()));
        Ok(out)
    }

    /// Bilinear extension of [`Self::bracket`].
    pub fn bracket_elements(&self, x: &Element, y: &Element, w: TruncationWindow, s: Selector) -> Result<Element> {
        let mut out = Element::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let ab = ca * cb;
                for (k, c) in self.bracket(a, b, w, s)?.terms() {
                    out.add_term(*k, c * &ab);
                }
            }
        }
        Ok(out)
    }

    /// Basis of the selector within the window, sorted by degree; inside a
    /// degree: loop elements in g-basis order, then d, K₁, K₂.
    pub fn basis(&self, w: TruncationWindow, s: Selector) -> Vec<BasisIndex> {
        let n = if s == Selector::SimpleG { 0 } else { w.n() };
        let mut out = Vec::new();
        for m in -n..=n {
            for g in 0..self.g.dim() {
                out.push(BasisIndex::Loop { g, power: m });
            }
            out.push(BasisIndex::D(m));
            if m == 0 {
                out.push(BasisIndex::K1);
                out.push(BasisIndex::K2);
            }
        }
        out.retain(|i| s.contains(i));
        out
    }

    /// `dim 𝔏_n` for each degree in the window.
    pub fn graded_dims(&self, w: TruncationWindow, s: Selector) -> BTreeMap<i64, usize> {
        let mut dims = BTreeMap::new();
        for i in self.basis(w, s) {
            *dims.entry(i.degree()).or_insert(0) += 1;
        }
        dims
    }

    pub fn truncate(&self, w: TruncationWindow, s: Selector) -> TruncatedAlgebra {
        TruncatedAlgebra::new(self.clone(), w, s)
    }
}
