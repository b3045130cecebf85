//! Truncated number-basis representation used to cross-check the exact
//! coherent-state algebra.
//!
//! Everything here is brute force: states become dense vectors of length
//! `(K+1)^n`, partial traces are explicit index sums and spectra come from
//! nalgebra's Hermitian eigensolver rather than the crate's Jacobi kernel.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::coherent::{CoherentLabel, Superposition};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::optics::{DensityMatrix, ModeBasis};

/// Poisson tail mass tolerated when a cutoff is chosen automatically.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Number-basis amplitudes `c_n = e^{−|α|²/2} αⁿ/√(n!)`, `n = 0..=K`, of a
/// coherent state.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    cutoff: usize,
    amps: Vec<C64>,
}

impl FockVector {
    /// Amplitudes by the ratio `c_n = c_{n−1}·α/√n`, which never forms `αⁿ`
    /// or `n!` and so stays finite for any cutoff.
    pub fn coherent(label: CoherentLabel, cutoff: usize) -> Self {
        let a = label.amplitude();
        let mut amps = Vec::with_capacity(cutoff + 1);
        let mut c = C64::new((-0.5 * a.norm_sqr()).exp(), 0.0);
        amps.push(c);
        for n in 1..=cutoff {
            c = c * a / (n as f64).sqrt();
            amps.push(c);
        }
        Self { cutoff, amps }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Smallest `K` whose Poisson tail `Σ_{n>K} e^{−m} mⁿ/n!`, `m = max_amp²`,
/// is below `tol`.
pub fn cutoff_for(max_amp: f64, tol: f64) -> usize {
    assert!(tol > 0.0, "tail tolerance must be positive");
    let m = max_amp * max_amp;
    if m == 0.0 {
        return 0;
    }
    // p_n up to where the remaining mass is far below the tolerance
    let mut probs = vec![(-m).exp()];
    while !(probs.len() as f64 > m + 1.0 && probs[probs.len() - 1] < tol * 1e-6) {
        let n = probs.len();
        probs.push(probs[n - 1] * m / n as f64);
    }
    // suffix sums accumulated from the small end
    let mut tail = vec![0.0; probs.len() + 1];
    for k in (0..probs.len()).rev() {
        tail[k] = tail[k + 1] + probs[k];
    }
    (0..probs.len()).find(|&k| tail[k + 1] < tol).expect("tail vanishes")
}

/// Poisson tail `Σ_{n>K} e^{−m} mⁿ/n!` by direct summation.
pub fn poisson_tail(max_amp: f64, cutoff: usize) -> f64 {
    let m = max_amp * max_amp;
    let mut p = (-m).exp();
    let mut tail = 0.0;
    let mut n = 0usize;
    while n <= cutoff || (n as f64) <= m || p > tail * 1e-17 {
        if n > cutoff {
            tail += p;
        }
        n += 1;
        p *= m / n as f64;
    }
    tail
}

/// The cutoff [`to_fock`] requires for `x`.
pub fn required_cutoff(x: &Superposition) -> usize {
    cutoff_for(x.max_amplitude(), DEFAULT_TAIL_TOL)
}

fn check_cutoff(x: &Superposition, cutoff: usize) -> Result<()> {
    let required = required_cutoff(x);
    if cutoff < required {
        return Err(Error::CutoffTooSmall { given: cutoff, required });
    }
    Ok(())
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

fn product_vector(labels: &[CoherentLabel], cutoff: usize) -> Vec<C64> {
    labels.iter().fold(vec![C64::new(1.0, 0.0)], |acc, &l| {
        kron_vec(&acc, FockVector::coherent(l, cutoff).amps())
    })
}

/// Dense number-basis vector of `x` on `(K+1)^n` entries, mode 0 most
/// significant.
pub fn to_fock(x: &Superposition, cutoff: usize) -> Result<Vec<C64>> {
    check_cutoff(x, cutoff)?;
    let dim = (cutoff + 1).pow(x.n_modes() as u32);
    let mut out = vec![C64::new(0.0, 0.0); dim];
    for t in x.terms() {
        for (o, v) in out.iter_mut().zip(product_vector(&t.labels, cutoff)) {
            *o += t.coeff * v;
        }
    }
    Ok(out)
}

/// `Σ conj(a_i)·b_i`.
pub fn fock_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Reduced density matrix of `x` on the modes in `keep`, in the truncated
/// number basis. Discarded modes are traced out through number-basis dot
/// products of their coherent components.
pub fn oracle_density(x: &Superposition, keep: &[usize], cutoff: usize) -> Result<DensityMatrix> {
    check_cutoff(x, cutoff)?;
    let n = x.n_modes();
    if keep.is_empty() {
        return Err(Error::BadSplit("no modes kept".into()));
    }
    for (k, &m) in keep.iter().enumerate() {
        if m >= n || keep[..k].contains(&m) {
            return Err(Error::BadMode(m));
        }
    }
    let discard: Vec<usize> = (0..n).filter(|m| !keep.contains(m)).collect();
    let terms = x.terms();
    let kept: Vec<Vec<C64>> = terms
        .iter()
        .map(|t| product_vector(&keep.iter().map(|&m| t.labels[m]).collect::<Vec<_>>(), cutoff))
        .collect();
    let env: Vec<Vec<C64>> = terms
        .iter()
        .map(|t| product_vector(&discard.iter().map(|&m| t.labels[m]).collect::<Vec<_>>(), cutoff))
        .collect();

    let dim = (cutoff + 1).pow(keep.len() as u32);
    let mut rho = CMatrix::zeros(dim, dim);
    for (s, ts) in terms.iter().enumerate() {
        for (t, tt) in terms.iter().enumerate() {
            let w = ts.coeff * tt.coeff.conj() * fock_inner(&env[t], &env[s]);
            rho.add_outer(w, &kept[s], &kept[t]);
        }
    }
    let tr = rho.trace().re;
    if !(tr > 1e-15) {
        return Err(Error::ZeroNorm);
    }
    let rho = rho.scale(C64::new(1.0 / tr, 0.0));
    DensityMatrix::new(rho, keep.iter().map(|_| ModeBasis::Fock { cutoff }).collect())
}

fn to_nalgebra(m: &CMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Eigenvalues of a Hermitian matrix by nalgebra, ascending.
pub fn oracle_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = to_nalgebra(m);
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut vals: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Transposes the indices of the listed subsystems, written as explicit
/// digit arithmetic on `(K+1)`-ary indices.
fn oracle_partial_transpose(m: &CMatrix, n_sub: usize, base: usize, transposed: &[usize]) -> CMatrix {
    let dim = m.rows();
    let mut out = CMatrix::zeros(dim, dim);
    let stride = |k: usize| base.pow((n_sub - 1 - k) as u32);
    for i in 0..dim {
        for j in 0..dim {
            let (mut a, mut b) = (i, j);
            for &k in transposed {
                let s = stride(k);
                let (da, db) = ((i / s) % base, (j / s) % base);
                a = a - da * s + db * s;
                b = b - db * s + da * s;
            }
            out[(a, b)] = m[(i, j)];
        }
    }
    out
}

/// Negativity of `x` reduced to `keep`, with the partial transpose taken over
/// the positions `split` of `keep`, computed entirely in the number basis.
pub fn oracle_negativity(x: &Superposition, keep: &[usize], split: &[usize], cutoff: usize) -> Result<f64> {
    if split.is_empty() || split.len() >= keep.len() || split.iter().any(|&k| k >= keep.len()) {
        return Err(Error::BadSplit(format!("{split:?} is not a proper subset of {} kept modes", keep.len())));
    }
    let rho = oracle_density(x, keep, cutoff)?;
    let pt = oracle_partial_transpose(rho.matrix(), keep.len(), cutoff + 1, split);
    Ok(-oracle_eigenvalues(&pt).iter().filter(|&&v| v < 0.0).sum::<f64>())
}

/// Rewrites a density matrix over coherent-label bases in the number basis,
/// so it can be compared entry by entry with [`oracle_density`].
pub fn lift_to_fock(rho: &DensityMatrix, cutoff: usize) -> Result<CMatrix> {
    let mut factors: Vec<CMatrix> = Vec::with_capacity(rho.bases().len());
    for b in rho.bases() {
        let ModeBasis::Coherent(basis) = b else {
            return Err(Error::BadDims(rho.dims().to_vec()));
        };
        let fock: Vec<FockVector> =
            basis.labels().iter().map(|&l| FockVector::coherent(l, cutoff)).collect();
        // column k holds |e_k⟩ = Σ_i (R⁻¹)_ik |α_i⟩
        let cols: Vec<Vec<C64>> = (0..basis.dim()).map(|k| basis.ket_in_labels(k)).collect();
        factors.push(CMatrix::from_fn(cutoff + 1, basis.dim(), |n, k| {
            cols[k].iter().zip(&fock).map(|(w, f)| w * f.amps()[n]).sum()
        }));
    }
    let lift = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kron(f));
    Ok(&(&lift * rho.matrix()) * &lift.adjoint())
}
