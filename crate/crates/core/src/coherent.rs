//! Exact algebra on finite superpositions of multimode coherent states.
//!
//! A coherent state is identified by its complex amplitude. Inner products
//! between coherent states have the closed form
//! `⟨a|b⟩ = exp(−|a|²/2 − |b|²/2 + a*·b)`, so every quantity in this module is
//! computed without truncating the Fock space.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{cholesky_upper, upper_triangular_inverse, CMatrix};

/// Relative tolerance under which two amplitudes name the same coherent state.
pub const LABEL_EQ_TOL: f64 = 1e-12;
/// Below this Gram determinant a label set is treated as linearly dependent.
pub const GRAM_DET_MIN: f64 = 1e-12;
pub const MAX_BASIS_DIM: usize = 8;

/// Complex amplitude `α` of a single-mode coherent state `|α⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentLabel(C64);

impl CoherentLabel {
    pub fn new(amplitude: C64) -> Result<Self> {
        if amplitude.re.is_finite() && amplitude.im.is_finite() {
            Ok(Self(amplitude))
        } else {
            Err(Error::NonFiniteLabel(format!("{amplitude}")))
        }
    }

    /// Real amplitude. Panics if `x` is not finite.
    pub fn real(x: f64) -> Self {
        Self::new(C64::new(x, 0.0)).expect("finite amplitude")
    }

    pub fn vacuum() -> Self {
        Self(C64::new(0.0, 0.0))
    }

    pub fn amplitude(self) -> C64 {
        self.0
    }

    pub fn norm_sqr(self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn approx_eq(self, other: Self) -> bool {
        let scale = 1f64.max(self.0.norm()).max(other.0.norm());
        (self.0 - other.0).norm() <= LABEL_EQ_TOL * scale
    }

    /// The label of the same state after a linear map on amplitudes.
    pub(crate) fn map(self, f: impl FnOnce(C64) -> C64) -> Self {
        Self(f(self.0))
    }
}

impl From<C64> for CoherentLabel {
    /// Panics on non-finite input; use [`CoherentLabel::new`] for fallible
    /// construction.
    fn from(z: C64) -> Self {
        Self::new(z).expect("finite amplitude")
    }
}

impl fmt::Display for CoherentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩", self.0)
    }
}

/// `⟨a|b⟩` for coherent states.
pub fn overlap(a: CoherentLabel, b: CoherentLabel) -> C64 {
    let (a, b) = (a.0, b.0);
    (-0.5 * a.norm_sqr() - 0.5 * b.norm_sqr() + a.conj() * b).exp()
}

/// One term of a superposition: a complex weight times a product of coherent
/// states, one per mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub labels: Vec<CoherentLabel>,
}

impl Term {
    pub fn new(coeff: C64, labels: Vec<CoherentLabel>) -> Self {
        Self { coeff, labels }
    }

    fn same_labels(&self, labels: &[CoherentLabel]) -> bool {
        self.labels.iter().zip(labels).all(|(a, b)| a.approx_eq(*b))
    }
}

/// Finite superposition `Σ_s c_s |α_{s,1}⟩ ⊗ … ⊗ |α_{s,n}⟩`, not necessarily
/// normalized. Terms with identical label tuples are merged on construction;
/// terms whose merged weight is exactly zero are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct Superposition {
    n_modes: usize,
    terms: Vec<Term>,
}

impl Superposition {
    pub fn new(n_modes: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            if t.labels.len() != n_modes {
                return Err(Error::LabelCount { expected: n_modes, found: t.labels.len() });
            }
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(Error::NonFiniteLabel(format!("coefficient {}", t.coeff)));
            }
            match merged.iter_mut().find(|m| m.same_labels(&t.labels)) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != C64::new(0.0, 0.0));
        Ok(Self { n_modes, terms: merged })
    }

    /// Single-mode superposition from `(coeff, label)` pairs.
    pub fn single_mode(terms: impl IntoIterator<Item = (C64, CoherentLabel)>) -> Self {
        Self::new(1, terms.into_iter().map(|(c, l)| Term::new(c, vec![l])))
            .expect("single-mode terms are well formed")
    }

    /// The product state `|α_1⟩ ⊗ … ⊗ |α_n⟩`.
    pub fn product(labels: Vec<CoherentLabel>) -> Result<Self> {
        Self::new(labels.len(), [Term::new(C64::new(1.0, 0.0), labels)])
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|α|` over all labels.
    pub fn max_amplitude(&self) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.labels.iter())
            .map(|l| l.amplitude().norm())
            .fold(0.0, f64::max)
    }

    /// Rebuilds the state with every term transformed by `f`.
    pub(crate) fn map_terms(&self, n_modes: usize, f: impl Fn(&Term) -> Term) -> Result<Self> {
        Self::new(n_modes, self.terms.iter().map(f))
    }

    /// Distinct labels appearing in `mode`, in order of first appearance.
    pub fn mode_labels(&self, mode: usize) -> Result<Vec<CoherentLabel>> {
        if mode >= self.n_modes {
            return Err(Error::BadMode(mode));
        }
        let mut out: Vec<CoherentLabel> = Vec::new();
        for t in &self.terms {
            let l = t.labels[mode];
            if !out.iter().any(|o| o.approx_eq(l)) {
                out.push(l);
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            n_modes: self.n_modes,
            terms: self.terms.iter().map(|t| Term::new(t.coeff * s, t.labels.clone())).collect(),
        }
    }
}

/// Product of single-mode overlaps `Π_m ⟨x_m|y_m⟩`.
pub fn product_overlap(x: &[CoherentLabel], y: &[CoherentLabel]) -> C64 {
    x.iter().zip(y).map(|(a, b)| overlap(*a, *b)).product()
}

/// Exact inner product `⟨x|y⟩`.
pub fn inner(x: &Superposition, y: &Superposition) -> Result<C64> {
    if x.n_modes != y.n_modes {
        return Err(Error::ModeMismatch(x.n_modes, y.n_modes));
    }
    let mut acc = C64::new(0.0, 0.0);
    for s in &x.terms {
        for t in &y.terms {
            acc += s.coeff.conj() * t.coeff * product_overlap(&s.labels, &t.labels);
        }
    }
    Ok(acc)
}

pub fn norm_sqr(x: &Superposition) -> f64 {
    inner(x, x).expect("same state").re
}

/// Rescales `x` to unit norm.
pub fn normalize(x: &Superposition) -> Result<Superposition> {
    let n2 = norm_sqr(x);
    if !(n2 > 1e-15) {
        return Err(Error::ZeroNorm);
    }
    Ok(x.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
}

/// Orthonormal basis for the span of a set of single-mode coherent states.
///
/// With `G = R†R` (R upper triangular), coherent state `i` expands as
/// `|α_i⟩ = Σ_j R_ji |e_j⟩`. The first label is `|e_0⟩` itself and each later
/// `|e_k⟩` is the normalized Gram–Schmidt residue of label `k`.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    labels: Vec<CoherentLabel>,
    gram: CMatrix,
    factor: CMatrix,
}

impl OrthoBasis {
    pub fn labels(&self) -> &[CoherentLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn factor(&self) -> &CMatrix {
        &self.factor
    }

    /// `det G`, the product of the squared pivots of the factor.
    pub fn gram_det(&self) -> f64 {
        (0..self.dim()).map(|i| self.factor[(i, i)].norm_sqr()).product()
    }

    pub fn index_of(&self, label: CoherentLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l.approx_eq(label))
            .ok_or_else(|| Error::LabelNotInBasis(label.to_string()))
    }

    /// Components of `|label⟩` over the orthonormal kets.
    pub fn expand(&self, label: CoherentLabel) -> Result<Vec<C64>> {
        Ok(self.factor.column(self.index_of(label)?))
    }

    /// Components of the orthonormal ket `|e_k⟩` over the coherent labels,
    /// i.e. column `k` of `R⁻¹`.
    pub fn ket_in_labels(&self, k: usize) -> Vec<C64> {
        upper_triangular_inverse(&self.factor).column(k)
    }
}

/// Builds the orthonormal basis spanned by `labels`, preserving their order.
pub fn orthonormalize(labels: &[CoherentLabel]) -> Result<OrthoBasis> {
    let d = labels.len();
    if d == 0 || d > MAX_BASIS_DIM {
        return Err(Error::BasisSize(d));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            if labels[i].approx_eq(labels[j]) {
                return Err(Error::DuplicateLabel);
            }
        }
    }
    let gram = CMatrix::from_fn(d, d, |i, j| overlap(labels[i], labels[j]));
    let factor = cholesky_upper(&gram).ok_or(Error::GramIllConditioned(0.0))?;
    let basis = OrthoBasis { labels: labels.to_vec(), gram, factor };
    let det = basis.gram_det();
    if det < GRAM_DET_MIN {
        return Err(Error::GramIllConditioned(det));
    }
    Ok(basis)
}

/// Coefficients `a_ij` with `x = Σ a_ij |e_i⟩ ⊗ |f_j⟩` for a two-mode state.
pub fn coefficient_matrix(
    x: &Superposition,
    basis1: &OrthoBasis,
    basis2: &OrthoBasis,
) -> Result<CMatrix> {
    if x.n_modes != 2 {
        return Err(Error::ModeMismatch(x.n_modes, 2));
    }
    let mut a = CMatrix::zeros(basis1.dim(), basis2.dim());
    for t in &x.terms {
        let u = basis1.expand(t.labels[0])?;
        let v: Vec<C64> = basis2.expand(t.labels[1])?.iter().map(|z| z.conj()).collect();
        // add_outer conjugates its second argument
        a.add_outer(t.coeff, &u, &v);
    }
    Ok(a)
}

/// Coefficient vector of a multimode state over the tensor product of
/// per-mode orthonormal bases (mode 0 most significant).
pub fn coefficient_vector(x: &Superposition, bases: &[OrthoBasis]) -> Result<Vec<C64>> {
    if bases.len() != x.n_modes {
        return Err(Error::ModeMismatch(x.n_modes, bases.len()));
    }
    let dim: usize = bases.iter().map(OrthoBasis::dim).product();
    let mut out = vec![C64::new(0.0, 0.0); dim];
    for t in &x.terms {
        let v = tensor_expand(&t.labels, bases)?;
        for (o, vi) in out.iter_mut().zip(v) {
            *o += t.coeff * vi;
        }
    }
    Ok(out)
}

/// `⊗_m R_m[:, idx(label_m)]` for one product term.
pub(crate) fn tensor_expand(labels: &[CoherentLabel], bases: &[OrthoBasis]) -> Result<Vec<C64>> {
    let mut v = vec![C64::new(1.0, 0.0)];
    for (l, b) in labels.iter().zip(bases) {
        let e = b.expand(*l)?;
        v = v.iter().flat_map(|x| e.iter().map(move |y| x * y)).collect();
    }
    Ok(v)
}
