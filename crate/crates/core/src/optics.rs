//! Beam splitters, the entangled-coherent-state families, photon loss and
//! reduction to density matrices over orthonormalized coherent bases.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;

use crate::coherent::{
    normalize, orthonormalize, product_overlap, tensor_expand, CoherentLabel, OrthoBasis,
    Superposition, Term,
};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigh, CMatrix};

/// Two-port beam splitter `B_ij(θ)` acting on the labels of modes `i`, `j`:
/// `(α_i, α_j) ↦ (α_i cosθ − α_j sinθ, α_i sinθ + α_j cosθ)`.
pub fn beamsplitter(x: &Superposition, i: usize, j: usize, theta: f64) -> Result<Superposition> {
    let n = x.n_modes();
    if i >= n {
        return Err(Error::BadMode(i));
    }
    if j >= n || j == i {
        return Err(Error::BadMode(j));
    }
    let (s, c) = theta.sin_cos();
    x.map_terms(n, |t| {
        let mut labels = t.labels.clone();
        let (ai, aj) = (t.labels[i].amplitude(), t.labels[j].amplitude());
        labels[i] = (ai * c - aj * s).into();
        labels[j] = (ai * s + aj * c).into();
        Term::new(t.coeff, labels)
    })
}

/// Appends vacuum modes to every term.
pub fn with_vacuum_modes(x: &Superposition, extra: usize) -> Superposition {
    x.map_terms(x.n_modes() + extra, |t| {
        let mut labels = t.labels.clone();
        labels.extend(std::iter::repeat(CoherentLabel::vacuum()).take(extra));
        Term::new(t.coeff, labels)
    })
    .expect("consistent label count")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EcsKind {
    Qubit,
    Qutrit,
    Qufit,
}

impl EcsKind {
    pub fn dim(self) -> usize {
        match self {
            EcsKind::Qubit => 2,
            EcsKind::Qutrit => 3,
            EcsKind::Qufit => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EcsKind::Qubit => "qubit",
            EcsKind::Qutrit => "qutrit",
            EcsKind::Qufit => "qufit",
        }
    }

    /// Single-mode amplitudes feeding the beam splitter, in weight order.
    pub fn input_labels(self, alpha: C64, beta: C64) -> Vec<C64> {
        match self {
            EcsKind::Qubit => vec![alpha, -alpha],
            EcsKind::Qutrit => vec![2.0 * alpha + beta, beta, -2.0 * alpha + beta],
            EcsKind::Qufit => vec![3.0 * alpha, alpha, -alpha, -3.0 * alpha],
        }
    }

    /// Real `α` for which the family's characteristic overlap equals `p`.
    ///
    /// For every family this is `p = e^{−α²}`: the qubit's
    /// `⟨α/√2|−α/√2⟩`, and the per-mode overlap of neighbouring qutrit and
    /// qufit labels.
    pub fn alpha_for_overlap(p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::DomainError(format!("overlap p = {p} must lie in (0, 1)")));
        }
        Ok((-p.ln()).sqrt())
    }
}

/// Two-mode entangled coherent state obtained by sending the generated
/// single-mode superposition and the vacuum through a 50:50 beam splitter.
pub fn make_ecs(kind: EcsKind, alpha: C64, beta: C64, coeffs: &[C64]) -> Result<Superposition> {
    if coeffs.len() != kind.dim() {
        return Err(Error::WeightCount { kind: kind.name(), expected: kind.dim(), found: coeffs.len() });
    }
    let labels = kind.input_labels(alpha, beta);
    let mut terms = Vec::with_capacity(labels.len());
    for (&w, a) in coeffs.iter().zip(labels) {
        terms.push((w, CoherentLabel::new(a)?));
    }
    let single = Superposition::single_mode(terms);
    let split = beamsplitter(&with_vacuum_modes(&single, 1), 0, 1, FRAC_PI_4)?;
    normalize(&split)
}

/// Fraction `η ∈ [0, 1]` of photons surviving the lossy channel.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct NoiseParam(f64);

impl NoiseParam {
    pub fn new(eta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&eta) {
            Ok(Self(eta))
        } else {
            Err(Error::BadNoise(eta))
        }
    }

    pub fn eta(self) -> f64 {
        self.0
    }
}

/// Photon loss on the selected modes: each label `γ ↦ √η·γ`, with an
/// environment mode carrying `√(1−η)·γ` appended per lossy mode (in the order
/// given).
pub fn lossy_channel(x: &Superposition, modes: &[usize], eta: NoiseParam) -> Result<Superposition> {
    let n = x.n_modes();
    if let Some(&m) = modes.iter().find(|&&m| m >= n) {
        return Err(Error::BadMode(m));
    }
    let keep = eta.0.sqrt();
    let lost = (1.0 - eta.0).sqrt();
    x.map_terms(n + modes.len(), |t| {
        let mut labels = t.labels.clone();
        for &m in modes {
            labels[m] = t.labels[m].map(|a| a * keep);
        }
        labels.extend(modes.iter().map(|&m| t.labels[m].map(|a| a * lost)));
        Term::new(t.coeff, labels)
    })
}

/// Index space of one mode of a density matrix.
#[derive(Clone, Debug)]
pub enum ModeBasis {
    Coherent(OrthoBasis),
    Fock { cutoff: usize },
}

impl ModeBasis {
    pub fn dim(&self) -> usize {
        match self {
            ModeBasis::Coherent(b) => b.dim(),
            ModeBasis::Fock { cutoff } => cutoff + 1,
        }
    }
}

/// Density matrix over a tensor product of per-mode bases (first mode most
/// significant in the flattened index).
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
    bases: Vec<ModeBasis>,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, bases: Vec<ModeBasis>) -> Result<Self> {
        let dims: Vec<usize> = bases.iter().map(ModeBasis::dim).collect();
        let d: usize = dims.iter().product();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::BadDims(dims));
        }
        Ok(Self { dims, matrix, bases })
    }

    /// Density matrix with plain computational bases of the given sizes.
    pub fn from_matrix(matrix: CMatrix, dims: &[usize]) -> Result<Self> {
        let bases = dims.iter().map(|&d| ModeBasis::Fock { cutoff: d - 1 }).collect();
        Self::new(matrix, bases)
    }

    pub fn pure(vector: &[C64], dims: &[usize]) -> Result<Self> {
        Self::from_matrix(CMatrix::outer(vector, vector), dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn bases(&self) -> &[ModeBasis] {
        &self.bases
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Checks Hermiticity (1e-12), unit trace (1e-10) and positivity
    /// (eigenvalues ≥ −1e-10).
    pub fn validate(&self) -> Result<()> {
        let dev = self.matrix.hermitian_deviation();
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::DomainError(format!("trace {tr} ≠ 1")));
        }
        let eig = jacobi_eigh(&self.matrix)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -1e-10 {
            return Err(Error::DomainError(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Reduces `|x⟩⟨x|` to the modes in `keep`, tracing out the rest exactly.
///
/// Each kept mode is expressed in the orthonormal basis of its distinct labels
/// (first appearance first). Cross terms between product states `s`, `t`
/// carry the overlap `Π_{m ∉ keep} ⟨α_{t,m}|α_{s,m}⟩` of the discarded modes.
pub fn trace_out(x: &Superposition, keep: &[usize]) -> Result<DensityMatrix> {
    let n = x.n_modes();
    for (k, &m) in keep.iter().enumerate() {
        if m >= n || keep[..k].contains(&m) {
            return Err(Error::BadMode(m));
        }
    }
    if keep.is_empty() {
        return Err(Error::BadSplit("no modes kept".into()));
    }
    let x = normalize(x)?;
    let discard: Vec<usize> = (0..n).filter(|m| !keep.contains(m)).collect();
    let bases: Vec<OrthoBasis> =
        keep.iter().map(|&m| orthonormalize(&x.mode_labels(m)?)).collect::<Result<_>>()?;

    let terms = x.terms();
    let vectors: Vec<Vec<C64>> = terms
        .iter()
        .map(|t| {
            let kept: Vec<CoherentLabel> = keep.iter().map(|&m| t.labels[m]).collect();
            tensor_expand(&kept, &bases)
        })
        .collect::<Result<_>>()?;
    let env: Vec<Vec<CoherentLabel>> =
        terms.iter().map(|t| discard.iter().map(|&m| t.labels[m]).collect()).collect();

    let dim: usize = bases.iter().map(OrthoBasis::dim).product();
    let mut rho = CMatrix::zeros(dim, dim);
    for (s, ts) in terms.iter().enumerate() {
        for (t, tt) in terms.iter().enumerate() {
            let w = ts.coeff * tt.coeff.conj() * product_overlap(&env[t], &env[s]);
            rho.add_outer(w, &vectors[s], &vectors[t]);
        }
    }
    let tr = rho.trace().re;
    let rho = rho.scale(C64::new(1.0 / tr, 0.0));
    DensityMatrix::new(rho, bases.into_iter().map(ModeBasis::Coherent).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{inner, overlap};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn re(x: f64) -> CoherentLabel {
        CoherentLabel::real(x)
    }

    #[test]
    fn fifty_fifty_split() {
        let a = c(1.2, 0.3);
        let x = Superposition::product(vec![a.into(), CoherentLabel::vacuum()]).unwrap();
        let y = beamsplitter(&x, 0, 1, FRAC_PI_4).unwrap();
        let h: CoherentLabel = (a / 2f64.sqrt()).into();
        assert!(y.terms()[0].labels.iter().all(|l| l.approx_eq(h)));
        assert_eq!(beamsplitter(&x, 0, 1, 0.0).unwrap(), x);
        assert!(matches!(beamsplitter(&x, 0, 0, 0.1), Err(Error::BadMode(0))));
        assert!(matches!(beamsplitter(&x, 0, 2, 0.1), Err(Error::BadMode(2))));
    }

    #[test]
    fn three_way_split() {
        let a = 1.1;
        let x = Superposition::product(vec![re(a), re(0.0), re(0.0)]).unwrap();
        let y = beamsplitter(&x, 0, 1, (1.0 / 3f64.sqrt()).acos()).unwrap();
        let y = beamsplitter(&y, 1, 2, FRAC_PI_4).unwrap();
        let third = re(a / 3f64.sqrt());
        assert!(y.terms()[0].labels.iter().all(|l| l.approx_eq(third)), "{:?}", y.terms());
    }

    #[test]
    fn qubit_ecs_matches_bell_form() {
        let alpha = 0.9;
        let x = make_ecs(EcsKind::Qubit, c(alpha, 0.0), c(0.0, 0.0), &[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let b = alpha / 2f64.sqrt();
        let p = overlap(re(b), re(-b)).re;
        let k = 1.0 / (2.0 - 2.0 * p * p).sqrt();
        assert!(x.terms()[0].labels.iter().all(|l| l.approx_eq(re(b))));
        assert!((x.terms()[0].coeff - c(-k, 0.0)).norm() < 1e-14);
        assert!((x.terms()[1].coeff - c(k, 0.0)).norm() < 1e-14);
        assert!(matches!(
            make_ecs(EcsKind::Qutrit, c(1.0, 0.0), c(0.0, 0.0), &[c(1.0, 0.0)]),
            Err(Error::WeightCount { .. })
        ));
    }

    #[test]
    fn qutrit_ecs_labels() {
        let (alpha, beta) = (0.8, 0.3);
        let x = make_ecs(
            EcsKind::Qutrit,
            c(alpha, 0.0),
            c(beta, 0.0),
            &[c(1.0, 0.0), c(1.35, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let s2 = 2f64.sqrt();
        let want = [(2.0 * alpha + beta) / s2, beta / s2, (-2.0 * alpha + beta) / s2];
        for (t, w) in x.terms().iter().zip(want) {
            assert!(t.labels.iter().all(|l| l.approx_eq(re(w))));
        }
        let r = x.terms()[1].coeff / x.terms()[0].coeff;
        assert!((r - c(1.35, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lossy_channel_limits() {
        let x = make_ecs(EcsKind::Qubit, c(1.0, 0.0), c(0.0, 0.0), &[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let full = lossy_channel(&x, &[0, 1], NoiseParam::new(1.0).unwrap()).unwrap();
        assert_eq!(full.n_modes(), 4);
        for (a, b) in full.terms().iter().zip(x.terms()) {
            assert_eq!(&a.labels[..2], &b.labels[..]);
            assert!(a.labels[2..].iter().all(|l| l.amplitude().norm() == 0.0));
        }
        let none = lossy_channel(&x, &[0, 1], NoiseParam::new(0.0).unwrap()).unwrap();
        for (a, b) in none.terms().iter().zip(x.terms()) {
            assert!(a.labels[..2].iter().all(|l| l.amplitude().norm() == 0.0));
            assert_eq!(&a.labels[2..], &b.labels[..]);
        }
        assert!(NoiseParam::new(1.5).is_err());
        assert!(matches!(lossy_channel(&x, &[3], NoiseParam::new(0.5).unwrap()), Err(Error::BadMode(3))));
    }

    #[test]
    fn lossy_channel_scales_amplitudes() {
        let alpha = 1.0;
        let eta = 0.36;
        let x = make_ecs(EcsKind::Qubit, c(alpha, 0.0), c(0.0, 0.0), &[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let y = lossy_channel(&x, &[0, 1], NoiseParam::new(eta).unwrap()).unwrap();
        let b = alpha / 2f64.sqrt();
        let t = &y.terms()[1];
        let want = [-0.6 * b, -0.6 * b, -0.8 * b, -0.8 * b];
        for (l, w) in t.labels.iter().zip(want) {
            assert!(l.approx_eq(re(w)));
        }
        // the channel is an isometry
        assert!((inner(&y, &y).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_out_pure_at_unit_eta() {
        let x = make_ecs(EcsKind::Qubit, c(0.8, 0.0), c(0.0, 0.0), &[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let y = lossy_channel(&x, &[0, 1], NoiseParam::new(1.0).unwrap()).unwrap();
        let rho = trace_out(&y, &[0, 1]).unwrap();
        rho.validate().unwrap();
        let sq = rho.matrix() * rho.matrix();
        assert!(sq.max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn trace_out_half_half_entries() {
        let p: f64 = 0.5;
        let alpha = EcsKind::alpha_for_overlap(p).unwrap();
        let x = make_ecs(EcsKind::Qubit, c(alpha, 0.0), c(0.0, 0.0), &[c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let y = lossy_channel(&x, &[0, 1], NoiseParam::new(0.5).unwrap()).unwrap();
        let rho = trace_out(&y, &[0, 1]).unwrap();
        let pref = 1.0 / (2.0 - 2.0 * p * p);
        let m = rho.matrix();
        let expect = [
            ((0, 0), 0.75),
            ((0, 1), 0.0),
            ((0, 3), 0.0),
            ((1, 1), 0.25),
            ((1, 3), 0.25),
            ((3, 3), 0.25),
        ];
        for ((i, j), v) in expect {
            assert!((m[(i, j)] - c(v * pref, 0.0)).norm() < 1e-12, "({i},{j}) = {}", m[(i, j)]);
        }
    }

    #[test]
    fn qutrit_environment_factors() {
        let p: f64 = 0.5;
        let alpha = EcsKind::alpha_for_overlap(p).unwrap();
        let s2 = 2f64.sqrt();
        let (omega, delta, gamma) = (2.0 * alpha / s2, 0.0, -2.0 * alpha / s2);
        for eta in [0.2f64, 0.5, 0.9] {
            let k = (1.0 - eta).sqrt();
            let two = |a: f64, b: f64| overlap(re(k * a), re(k * b)).powi(2);
            let big_a = two(delta, omega);
            let big_b = two(gamma, delta);
            let big_d = two(gamma, omega);
            assert!((big_a.re - p.powf(2.0 * (1.0 - eta))).abs() < 1e-14);
            assert!((big_b.re - p.powf(2.0 * (1.0 - eta))).abs() < 1e-14);
            assert!((big_d.re - p.powf(8.0 * (1.0 - eta))).abs() < 1e-14);
        }
    }

    #[test]
    fn trace_out_rejects_bad_modes() {
        let x = Superposition::product(vec![re(0.5), re(0.5)]).unwrap();
        assert!(matches!(trace_out(&x, &[2]), Err(Error::BadMode(2))));
        assert!(matches!(trace_out(&x, &[0, 0]), Err(Error::BadMode(0))));
    }
}
