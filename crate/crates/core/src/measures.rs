//! Entanglement measures: pure-state concurrence from coefficient minors,
//! Wootters concurrence for two qubits, negativity, the closed-form curves
//! for the ECS families, and monogamy of the three-mode state.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C64;

use crate::coherent::{
    coefficient_vector, normalize, orthonormalize, product_overlap, CoherentLabel, OrthoBasis, Superposition,
};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigh, CMatrix};
use crate::optics::{beamsplitter, lossy_channel, trace_out, with_vacuum_modes, DensityMatrix, NoiseParam};

/// Threshold below which a partial-transpose eigenvalue counts as negative.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-12;
/// Radicands of closed forms above `-RADICAND_CLAMP` are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-9;

/// Real spectrum of a Hermitian matrix, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Spectrum> {
    Ok(Spectrum { eigenvalues: jacobi_eigh(m)?.values })
}

/// `C = 2·sqrt(Σ_{i<j} Σ_{k<l} |a_ik a_jl − a_il a_jk|²)` for a normalized
/// coefficient matrix.
pub fn pure_concurrence(a: &CMatrix) -> Result<f64> {
    let norm: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    let (d1, d2) = (a.rows(), a.cols());
    let mut s = 0.0;
    for i in 0..d1 {
        for j in (i + 1)..d1 {
            for k in 0..d2 {
                for l in (k + 1)..d2 {
                    s += (a[(i, k)] * a[(j, l)] - a[(i, l)] * a[(j, k)]).norm_sqr();
                }
            }
        }
    }
    Ok(2.0 * s.sqrt())
}

/// Orthonormal bases built from each mode's distinct labels.
pub fn mode_bases(x: &Superposition) -> Result<Vec<OrthoBasis>> {
    (0..x.n_modes()).map(|m| orthonormalize(&x.mode_labels(m)?)).collect()
}

/// Reshapes a flattened multimode vector (mode 0 most significant) into a
/// matrix whose rows index the modes in `part_a` and columns the rest.
pub fn bipartite_matrix(v: &[C64], dims: &[usize], part_a: &[usize]) -> Result<CMatrix> {
    check_split(dims.len(), part_a)?;
    let part_b: Vec<usize> = (0..dims.len()).filter(|m| !part_a.contains(m)).collect();
    let rows: usize = part_a.iter().map(|&m| dims[m]).product();
    let cols: usize = part_b.iter().map(|&m| dims[m]).product();
    let mut out = CMatrix::zeros(rows, cols);
    let mut digits = vec![0usize; dims.len()];
    for (flat, &val) in v.iter().enumerate() {
        let mut r = flat;
        for m in (0..dims.len()).rev() {
            digits[m] = r % dims[m];
            r /= dims[m];
        }
        let row = part_a.iter().fold(0, |acc, &m| acc * dims[m] + digits[m]);
        let col = part_b.iter().fold(0, |acc, &m| acc * dims[m] + digits[m]);
        out[(row, col)] = val;
    }
    Ok(out)
}

/// Concurrence of a pure multimode coherent-state superposition across the
/// cut `part_a | rest`.
pub fn state_concurrence(x: &Superposition, part_a: &[usize]) -> Result<f64> {
    let x = normalize(x)?;
    let bases = mode_bases(&x)?;
    let dims: Vec<usize> = bases.iter().map(OrthoBasis::dim).collect();
    let v = coefficient_vector(&x, &bases)?;
    pure_concurrence(&bipartite_matrix(&v, &dims, part_a)?)
}

fn sigma_y_sigma_y() -> CMatrix {
    CMatrix::from_real_rows(&[
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![-1.0, 0.0, 0.0, 0.0],
    ])
}

/// Embeds a `d1×d2` density matrix with `d1, d2 ≤ 2` into two-qubit space.
fn pad_to_two_qubits(rho: &DensityMatrix) -> Result<CMatrix> {
    let dims = rho.dims();
    if dims.len() != 2 || dims.iter().any(|&d| d == 0 || d > 2) {
        return Err(Error::BadDims(dims.to_vec()));
    }
    let (d1, d2) = (dims[0], dims[1]);
    let m = rho.matrix();
    let mut out = CMatrix::zeros(4, 4);
    for i in 0..d1 * d2 {
        for j in 0..d1 * d2 {
            let (ia, ib) = (i / d2, i % d2);
            let (ja, jb) = (j / d2, j % d2);
            out[(ia * 2 + ib, ja * 2 + jb)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)` of a two-qubit state,
/// with `λ_i²` the eigenvalues of `√ρ ρ̃ √ρ`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
/// Modes of dimension one are embedded as the qubit `|0⟩`.
///
/// `√ρ ρ̃ √ρ` is evaluated on the support of `ρ` only: with `ρ = W W†`
/// (`W = V √Λ` over eigenvalues above `1e-13`) its nonzero spectrum is that of
/// the `r×r` matrix `W† ρ̃ W`. Rank-deficient states then carry no
/// square-rooted round-off in the small `λ_i`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let m = pad_to_two_qubits(rho)?;
    let yy = sigma_y_sigma_y();
    let tilde = &(&yy * &m.conj()) * &yy;
    let eig = jacobi_eigh(&m)?;
    let support: Vec<usize> = (0..4).filter(|&k| eig.values[k] > 1e-13).collect();
    if support.is_empty() {
        return Err(Error::ZeroNorm);
    }
    let w = CMatrix::from_fn(4, support.len(), |i, k| {
        eig.vectors[(i, support[k])] * eig.values[support[k]].sqrt()
    });
    let h = &(&w.adjoint() * &tilde) * &w;
    let h = CMatrix::from_fn(h.rows(), h.cols(), |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    let mut lam: Vec<f64> = jacobi_eigh(&h)?.values.iter().map(|x| x.max(0.0).sqrt()).collect();
    lam.resize(4, 0.0);
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

fn check_split(n_modes: usize, modes: &[usize]) -> Result<()> {
    if modes.is_empty() || modes.len() >= n_modes {
        return Err(Error::BadSplit(format!("{modes:?} is not a proper subset of {n_modes} modes")));
    }
    for (k, &m) in modes.iter().enumerate() {
        if m >= n_modes || modes[..k].contains(&m) {
            return Err(Error::BadSplit(format!("invalid mode {m}")));
        }
    }
    Ok(())
}

/// Partial transpose over the modes in `transposed`.
pub fn partial_transpose(m: &CMatrix, dims: &[usize], transposed: &[usize]) -> CMatrix {
    let n = m.rows();
    let split = |mut flat: usize| {
        let mut digits = vec![0usize; dims.len()];
        for k in (0..dims.len()).rev() {
            digits[k] = flat % dims[k];
            flat /= dims[k];
        }
        digits
    };
    let join = |digits: &[usize]| digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d);
    CMatrix::from_fn(n, n, |i, j| {
        let (mut di, mut dj) = (split(i), split(j));
        for &k in transposed {
            std::mem::swap(&mut di[k], &mut dj[k]);
        }
        m[(join(&di), join(&dj))]
    })
}

/// Negativity `|Σ μ_i|` over the negative eigenvalues of the partial transpose
/// with respect to `split` (the modes forming subsystem B).
///
/// Also evaluates `(‖ρ^{T_B}‖₁ − 1)/2` and fails if the two disagree by more
/// than 1e-10.
pub fn negativity(rho: &DensityMatrix, split: &[usize]) -> Result<f64> {
    check_split(rho.dims().len(), split)?;
    let pt = partial_transpose(rho.matrix(), rho.dims(), split);
    let spec = hermitian_eigenvalues(&pt)?;
    let neg: f64 = -spec.eigenvalues.iter().filter(|&&x| x < -NEGATIVE_EIGEN_TOL).sum::<f64>();
    let trace_norm: f64 = spec.eigenvalues.iter().map(|x| x.abs()).sum();
    let via_norm = (trace_norm - rho.trace()) / 2.0;
    if (neg - via_norm).abs() > 1e-10 {
        return Err(Error::NegativityMismatch(neg, via_norm));
    }
    Ok(neg)
}

/// Closed-form concurrence of the qubit-like ECS as a function of
/// `r = ε₀ε₁*` and `p = ⟨β|−β⟩`.
pub fn paper_c2_curve(r: C64, p: f64) -> f64 {
    let p2 = p * p;
    2.0 * r.norm() * (1.0 - p2) / (1.0 + r.norm_sqr() - 2.0 * r.re * p2)
}

fn clamp_radicand(x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x > -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand(x))
    }
}

/// The printed polynomial for the qutrit-like concurrence in `p = e^{−α²}`,
/// with its rounded constants kept verbatim.
pub fn paper_c3_curve(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!("p = {p} outside [0, 1]")));
    }
    let q = p * p;
    // coefficients of p^0, p^2, …, p^14
    let num = [4.64461, -0.0677901, 2.59035, -22.5563, 24.965, -6.05322, -17.6206, 14.098];
    let radicand = num.iter().rev().fold(0.0, |acc, c| acc * q + c);
    let den = 1.99954 * q.powi(4) + 7.28968 * q + 3.8224;
    Ok(2.0 * clamp_radicand(radicand)?.sqrt() / den)
}

/// Concurrences and residual tangle of the three-mode state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonogamyReport {
    pub c_ab: f64,
    pub c_ad: f64,
    pub c_abd: f64,
    /// `c_abd² − c_ab² − c_ad²`
    pub tau: f64,
}

impl MonogamyReport {
    pub fn new(c_ab: f64, c_ad: f64, c_abd: f64) -> Self {
        Self { c_ab, c_ad, c_abd, tau: c_abd * c_abd - c_ab * c_ab - c_ad * c_ad }
    }
}

fn check_monogamy_domain(pprime: f64, eta: f64) -> Result<()> {
    if !(pprime > 0.0 && pprime < 1.0) {
        return Err(Error::DomainError(format!("p' = {pprime} must lie in (0, 1)")));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::DomainError(format!("η = {eta} must lie in (0, 1]")));
    }
    Ok(())
}

/// Printed closed forms for the noisy three-mode state:
/// `C_AB = C_AD = p'^{3+η}(1−p'^{2η})/(p'^{3η}−p'⁶)` and
/// `C_A(BD) = sqrt((1−p'^{2η})(1−p'^{2(3−η)}))/(1−p'^{6−3η})`.
pub fn monogamy_closed_forms(pprime: f64, eta: f64) -> Result<MonogamyReport> {
    check_monogamy_domain(pprime, eta)?;
    let p = pprime;
    let c_ab = p.powf(3.0 + eta) * (1.0 - p.powf(2.0 * eta)) / (p.powf(3.0 * eta) - p.powi(6));
    let rad = clamp_radicand((1.0 - p.powf(2.0 * eta)) * (1.0 - p.powf(2.0 * (3.0 - eta))))?;
    let c_abd = rad.sqrt() / (1.0 - p.powf(6.0 - 3.0 * eta));
    Ok(MonogamyReport::new(c_ab, c_ab, c_abd))
}

/// Three-mode GHZ-like ECS `(|−γ,−γ,−γ⟩ − |γ,γ,γ⟩)/√(2−2p'³)` with
/// `γ = α/√3`, built with two beam splitters from `(|−α⟩ − |α⟩)⊗|0⟩⊗|0⟩`.
/// `p' = ⟨γ|−γ⟩ = e^{−2α²/3}`.
pub fn three_mode_ecs(pprime: f64) -> Result<Superposition> {
    if !(pprime > 0.0 && pprime < 1.0) {
        return Err(Error::DomainError(format!("p' = {pprime} must lie in (0, 1)")));
    }
    let alpha = (-1.5 * pprime.ln()).sqrt();
    let single = Superposition::single_mode([
        (C64::new(1.0, 0.0), CoherentLabel::real(-alpha)),
        (C64::new(-1.0, 0.0), CoherentLabel::real(alpha)),
    ]);
    let x = with_vacuum_modes(&single, 2);
    let x = beamsplitter(&x, 0, 1, (1.0 / 3f64.sqrt()).acos())?;
    let x = beamsplitter(&x, 1, 2, FRAC_PI_4)?;
    normalize(&x)
}

/// Monogamy quantities from the simulated state: `C_AB`, `C_AD` via Wootters
/// on the reduced states after loss on all three modes. `C_A(BD)` is the
/// pure-state concurrence when `η = 1`; for `η < 1` the mixed `ρ_ABD` has no
/// computable concurrence here and the closed form is used.
pub fn monogamy_pipeline(pprime: f64, eta: f64) -> Result<MonogamyReport> {
    check_monogamy_domain(pprime, eta)?;
    let x = three_mode_ecs(pprime)?;
    let noisy = lossy_channel(&x, &[0, 1, 2], NoiseParam::new(eta)?)?;
    let c_ab = wootters_concurrence(&trace_out(&noisy, &[0, 1])?)?;
    let c_ad = wootters_concurrence(&trace_out(&noisy, &[0, 2])?)?;
    let c_abd = if eta == 1.0 {
        state_concurrence(&x, &[0])?
    } else {
        monogamy_closed_forms(pprime, eta)?.c_abd
    };
    Ok(MonogamyReport::new(c_ab, c_ad, c_abd))
}

/// Range of pure-state concurrences over the support of a bipartite mixed
/// state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportConcurrence {
    /// Smallest concurrence among the sampled support vectors.
    pub support_min: f64,
    /// `Σ λ_i C(ψ_i)` over the spectral decomposition; an upper bound on the
    /// convex roof.
    pub spectral_upper: f64,
}

impl SupportConcurrence {
    /// The concurrence when the two ends coincide (every state in the support
    /// is equally entangled).
    pub fn value(&self) -> Option<f64> {
        ((self.spectral_upper - self.support_min).abs() < 1e-9).then_some(self.spectral_upper)
    }
}

/// Low-discrepancy sequence in `[0, 1)`; keeps the sampling deterministic.
fn golden_sequence(n: usize) -> impl Iterator<Item = f64> {
    const G: f64 = 0.618_033_988_749_894_9;
    (1..=n).map(|k| (k as f64 * G).fract())
}

pub fn support_concurrence(rho: &DensityMatrix) -> Result<SupportConcurrence> {
    let dims = rho.dims();
    if dims.len() != 2 {
        return Err(Error::BadDims(dims.to_vec()));
    }
    let eig = jacobi_eigh(rho.matrix())?;
    let support: Vec<(f64, Vec<C64>)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 1e-12)
        .map(|(k, &l)| (l, eig.vectors.column(k)))
        .collect();
    let conc = |v: &[C64]| -> Result<f64> {
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = v.iter().map(|z| z / n).collect();
        pure_concurrence(&bipartite_matrix(&v, dims, &[0])?)
    };
    let mut upper = 0.0;
    let mut lower = f64::INFINITY;
    for (l, v) in &support {
        let c = conc(v)?;
        upper += l * c;
        lower = lower.min(c);
    }
    let combine = |coeffs: &[C64]| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); support[0].1.len()];
        for (c, (_, v)) in coeffs.iter().zip(&support) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    };
    let r = support.len();
    for i in 0..r {
        for j in (i + 1)..r {
            for ph in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                let mut coeffs = vec![C64::new(0.0, 0.0); r];
                coeffs[i] = C64::new(1.0, 0.0);
                coeffs[j] = ph;
                lower = lower.min(conc(&combine(&coeffs))?);
            }
        }
    }
    let samples: Vec<f64> = golden_sequence(512 * 2 * r).collect();
    for chunk in samples.chunks(2 * r) {
        let coeffs: Vec<C64> = chunk
            .chunks(2)
            .map(|uv| C64::from_polar(uv[0] + 1e-3, std::f64::consts::TAU * uv[1]))
            .collect();
        lower = lower.min(conc(&combine(&coeffs))?);
    }
    Ok(SupportConcurrence { support_min: lower, spectral_upper: upper })
}

/// Orthogonal-limit imbalanced qutrit state
/// `(|012⟩ − |021⟩ + |201⟩ − |210⟩ + |120⟩ − |102⟩)/√6` over modes A, B, D.
pub fn antisymmetric_qutrit_state() -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 27];
    let k = 1.0 / 6f64.sqrt();
    for (digits, sign) in [([0, 1, 2], 1.0), ([0, 2, 1], -1.0), ([2, 0, 1], 1.0), ([2, 1, 0], -1.0), ([1, 2, 0], 1.0), ([1, 0, 2], -1.0)] {
        v[digits[0] * 9 + digits[1] * 3 + digits[2]] = C64::new(sign * k, 0.0);
    }
    v
}

/// Reduced density matrix of a pure state vector on the modes in `keep`.
pub fn reduce_pure(v: &[C64], dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let m = bipartite_matrix(v, dims, keep)?;
    let rho = &m * &m.adjoint();
    let kept: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    DensityMatrix::from_matrix(rho, &kept)
}

/// Returns `(C_AB² + C_AD², C_A(BD)²)` for the antisymmetric qutrit state.
pub fn qutrit_violation_example() -> Result<(f64, f64)> {
    let v = antisymmetric_qutrit_state();
    let dims = [3, 3, 3];
    let c_abd = pure_concurrence(&bipartite_matrix(&v, &dims, &[0])?)?;
    let pair = |keep: &[usize]| -> Result<f64> {
        let sc = support_concurrence(&reduce_pure(&v, &dims, keep)?)?;
        sc.value().ok_or_else(|| {
            Error::DomainError(format!(
                "support concurrence not pinned: [{}, {}]",
                sc.support_min, sc.spectral_upper
            ))
        })
    };
    let c_ab = pair(&[0, 1])?;
    let c_ad = pair(&[0, 2])?;
    Ok((c_ab * c_ab + c_ad * c_ad, c_abd * c_abd))
}

/// Pure-state concurrence across `part_a | rest` from `C² = 2(1 − tr ρ_A²)`,
/// with `tr ρ_A²` summed directly over label overlaps. No basis is built, so
/// this stays defined when the labels are too close for [`orthonormalize`].
pub fn purity_concurrence(x: &Superposition, part_a: &[usize]) -> Result<f64> {
    check_split(x.n_modes(), part_a)?;
    let x = normalize(x)?;
    let split = |labels: &[CoherentLabel]| {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (m, &l) in labels.iter().enumerate() {
            if part_a.contains(&m) { a.push(l) } else { b.push(l) }
        }
        (a, b)
    };
    let parts: Vec<_> = x.terms().iter().map(|t| split(&t.labels)).collect();
    let n = parts.len();
    // ρ_A = Σ w_st |A_s⟩⟨A_t|, tr ρ_A² = tr((W G)²) with G_tu = ⟨A_t|A_u⟩
    let w = CMatrix::from_fn(n, n, |s, t| {
        x.terms()[s].coeff * x.terms()[t].coeff.conj() * product_overlap(&parts[t].1, &parts[s].1)
    });
    let g = CMatrix::from_fn(n, n, |t, u| product_overlap(&parts[t].0, &parts[u].0));
    let wg = &w * &g;
    let purity = (&wg * &wg).trace().re;
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bell() -> Vec<C64> {
        let k = 1.0 / 2f64.sqrt();
        vec![c(k, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(k, 0.0)]
    }

    #[test]
    fn spectrum_examples() {
        let s = hermitian_eigenvalues(&CMatrix::identity(4)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0; 4]);
        let s = hermitian_eigenvalues(&CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14 && (s.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn pure_concurrence_examples() {
        let a = CMatrix::from_rows(&[bell()[..2].to_vec(), bell()[2..].to_vec()]);
        assert!((pure_concurrence(&a).unwrap() - 1.0).abs() < 1e-14);
        let prod = CMatrix::outer(&[c(0.6, 0.0), c(0.0, 0.8)], &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(pure_concurrence(&prod).unwrap().abs() < 1e-15);
        let diag = CMatrix::diag(&[-0.5, 0.5, -0.5, -0.5]);
        assert!((pure_concurrence(&diag).unwrap() - 2.0 * (6.0f64 / 16.0).sqrt()).abs() < 1e-14);
        assert!(matches!(pure_concurrence(&CMatrix::identity(2)), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn wootters_examples() {
        let b = DensityMatrix::pure(&bell(), &[2, 2]).unwrap();
        assert!((wootters_concurrence(&b).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::from_matrix(CMatrix::identity(4).scale(c(0.25, 0.0)), &[2, 2]).unwrap();
        assert!(wootters_concurrence(&mixed).unwrap().abs() < 1e-12);
        let q = DensityMatrix::from_matrix(CMatrix::identity(9).scale(c(1.0 / 9.0, 0.0)), &[3, 3]).unwrap();
        assert!(matches!(wootters_concurrence(&q), Err(Error::BadDims(_))));
        let one = DensityMatrix::from_matrix(CMatrix::identity(1), &[1, 1]).unwrap();
        assert_eq!(wootters_concurrence(&one).unwrap(), 0.0);
    }

    #[test]
    fn negativity_examples() {
        let b = DensityMatrix::pure(&bell(), &[2, 2]).unwrap();
        assert!((negativity(&b, &[1]).unwrap() - 0.5).abs() < 1e-12);
        let prod = DensityMatrix::pure(&[c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)], &[2, 2]).unwrap();
        assert!(negativity(&prod, &[1]).unwrap().abs() < 1e-12);
        assert!(matches!(negativity(&b, &[0, 1]), Err(Error::BadSplit(_))));
        assert!(matches!(negativity(&b, &[]), Err(Error::BadSplit(_))));
    }

    #[test]
    fn partial_transpose_of_swap() {
        // the swap operator's partial transpose is d·|Φ⁺⟩⟨Φ⁺|
        let d = 3;
        let swap = CMatrix::from_fn(9, 9, |i, j| {
            let (a, b) = (i / d, i % d);
            if j == b * d + a { c(1.0, 0.0) } else { c(0.0, 0.0) }
        });
        let pt = partial_transpose(&swap, &[3, 3], &[1]);
        for i in 0..9 {
            for j in 0..9 {
                let want = if i % 4 == 0 && j % 4 == 0 { 1.0 } else { 0.0 };
                assert_eq!(pt[(i, j)], c(want, 0.0));
            }
        }
    }

    #[test]
    fn c2_curve_examples() {
        assert!((paper_c2_curve(c(1.0, 0.0), 0.3) - 1.0).abs() < 1e-15);
        assert_eq!(paper_c2_curve(c(0.0, 0.0), 0.4), 0.0);
        assert!((paper_c2_curve(c(2.0, 0.0), 0.0) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn c3_curve_examples() {
        let at0 = paper_c3_curve(0.0).unwrap();
        assert!((at0 - 2.0 * 4.64461f64.sqrt() / 3.8224).abs() < 1e-14);
        assert!((at0 - 1.1276).abs() < 1e-4);
        assert!(paper_c3_curve(1.0).unwrap() < 0.01);
        // direct substitution of p = 0.5 into the printed expression
        let p: f64 = 0.5;
        let num = 4.64461 + 14.098 * p.powi(14) - 17.6206 * p.powi(12) - 6.05322 * p.powi(10)
            + 24.965 * p.powi(8)
            - 22.5563 * p.powi(6)
            + 2.59035 * p.powi(4)
            - 0.0677901 * p.powi(2);
        let den = 1.99954 * p.powi(8) + 7.28968 * p.powi(2) + 3.8224;
        let v = paper_c3_curve(0.5).unwrap();
        assert!((v - 2.0 * num.sqrt() / den).abs() < 1e-14);
        assert!((v - 0.7527).abs() < 1e-3);
        assert!(paper_c3_curve(1.5).is_err());
    }

    #[test]
    fn radicand_clamp() {
        assert_eq!(clamp_radicand(-1e-12).unwrap(), 0.0);
        assert!(matches!(clamp_radicand(-1e-6), Err(Error::NegativeRadicand(_))));
    }

    #[test]
    fn monogamy_closed_form_limits() {
        for p in [0.1, 0.5, 0.9] {
            let r = monogamy_closed_forms(p, 1.0).unwrap();
            assert!((r.c_ab - p * (1.0 + p) / (1.0 + p + p * p)).abs() < 1e-12);
        }
        let small = monogamy_closed_forms(1e-6, 1.0).unwrap();
        assert!((small.tau - 1.0).abs() < 1e-5);
        let near_one = monogamy_closed_forms(1.0 - 1e-6, 1.0).unwrap();
        assert!(near_one.tau.abs() < 1e-4, "{near_one:?}");
        assert!(monogamy_closed_forms(0.0, 1.0).is_err());
        assert!(monogamy_closed_forms(1.0, 1.0).is_err());
        assert!(monogamy_closed_forms(0.5, 0.0).is_err());
    }

    #[test]
    fn lossless_tripartite_concurrence() {
        let p: f64 = 0.5;
        let r = monogamy_pipeline(p, 1.0).unwrap();
        let expected = ((1.0 - p * p) * (1.0 - p.powi(4))).sqrt() / (1.0 - p.powi(3));
        assert!((r.c_abd - expected).abs() < 1e-10);
        assert!((expected - 0.9583).abs() < 1e-4);
        assert!((r.c_ab - p * (1.0 + p) / (1.0 + p + p * p)).abs() < 1e-9);
        assert!((r.c_ab - r.c_ad).abs() < 1e-10);
    }

    #[test]
    fn violation_pair() {
        let (lhs, rhs) = qutrit_violation_example().unwrap();
        assert!((lhs - 2.0).abs() < 1e-9);
        assert!((rhs - 4.0 / 3.0).abs() < 1e-9);
        assert!(lhs > rhs);
    }

    #[test]
    fn purity_route_matches_basis_route() {
        use crate::optics::{make_ecs, EcsKind};
        let w = [c(1.0, 0.0), c(1.35, 0.0), c(1.0, 0.0)];
        for &a in &[0.3, 0.8, 1.7] {
            let x = make_ecs(EcsKind::Qutrit, c(a, 0.0), c(0.0, 0.0), &w).unwrap();
            let d = purity_concurrence(&x, &[0]).unwrap() - state_concurrence(&x, &[0]).unwrap();
            assert!(d.abs() < 1e-7, "α = {a}: {d:e}");
        }
        // labels too close for a basis: still defined and near zero
        let x = make_ecs(EcsKind::Qutrit, c(1e-3, 0.0), c(0.0, 0.0), &w).unwrap();
        assert!(matches!(state_concurrence(&x, &[0]), Err(Error::GramIllConditioned(_))));
        assert!(purity_concurrence(&x, &[0]).unwrap() < 1e-2);
    }
}
