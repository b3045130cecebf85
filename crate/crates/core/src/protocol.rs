//! Cavity-QED generation of coherent-state superpositions.
//!
//! The atom–cavity dynamics enter only through three effective maps: a
//! resonant classical pulse rotating the atom, a dispersive interaction of
//! fixed duration that rotates the cavity amplitude by `±π/2` depending on
//! the atomic level, and projection of the atom onto `|g⟩`. Phase shifts and
//! displacements act on the cavity alone.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use crate::coherent::{inner, normalize, CoherentLabel, Superposition, Term};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomLevel {
    Ground,
    Excited,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomFieldTerm {
    pub level: AtomLevel,
    pub coeff: C64,
    pub cavity: CoherentLabel,
}

/// Joint atom–cavity state `Σ c_s |level_s⟩|α_s⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomFieldState {
    terms: Vec<AtomFieldTerm>,
}

impl AtomFieldState {
    pub fn new(terms: impl IntoIterator<Item = AtomFieldTerm>) -> Self {
        let mut merged: Vec<AtomFieldTerm> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|m| m.level == t.level && m.cavity.approx_eq(t.cavity)) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != C64::new(0.0, 0.0));
        Self { terms: merged }
    }

    /// `|g⟩|α⟩`
    pub fn ground(alpha: CoherentLabel) -> Self {
        Self::new([AtomFieldTerm { level: AtomLevel::Ground, coeff: C64::new(1.0, 0.0), cavity: alpha }])
    }

    pub fn terms(&self) -> &[AtomFieldTerm] {
        &self.terms
    }

    /// Cavity superposition of the component with the atom in `level`.
    pub fn component(&self, level: AtomLevel) -> Superposition {
        Superposition::single_mode(
            self.terms.iter().filter(|t| t.level == level).map(|t| (t.coeff, t.cavity)),
        )
    }

    /// `⟨ψ|ψ⟩`; the two atomic levels are orthogonal.
    pub fn norm_sqr(&self) -> f64 {
        [AtomLevel::Ground, AtomLevel::Excited]
            .iter()
            .map(|&l| {
                let c = self.component(l);
                inner(&c, &c).expect("single mode").re
            })
            .sum()
    }
}

/// Maps acting on cavity amplitudes only, shared by joint and cavity states.
pub trait CavityMap: Sized {
    fn map_cavity(&self, f: impl Fn(CoherentLabel, C64) -> (CoherentLabel, C64)) -> Self;
}

impl CavityMap for AtomFieldState {
    fn map_cavity(&self, f: impl Fn(CoherentLabel, C64) -> (CoherentLabel, C64)) -> Self {
        Self::new(self.terms.iter().map(|t| {
            let (cavity, coeff) = f(t.cavity, t.coeff);
            AtomFieldTerm { level: t.level, coeff, cavity }
        }))
    }
}

impl CavityMap for Superposition {
    fn map_cavity(&self, f: impl Fn(CoherentLabel, C64) -> (CoherentLabel, C64)) -> Self {
        self.map_terms(self.n_modes(), |t| {
            let mut coeff = t.coeff;
            let labels = t
                .labels
                .iter()
                .map(|&l| {
                    let (l2, c2) = f(l, coeff);
                    coeff = c2;
                    l2
                })
                .collect();
            Term::new(coeff, labels)
        })
        .expect("mode count unchanged")
    }
}

/// Resonant classical pulse with complex amplitude `ε`:
/// `|g⟩ ↦ (|g⟩ + ε|e⟩)/√(1+|ε|²)`, `|e⟩ ↦ (−ε*|g⟩ + |e⟩)/√(1+|ε|²)`.
pub fn apply_pulse(s: &AtomFieldState, eps: C64) -> AtomFieldState {
    let k = 1.0 / (1.0 + eps.norm_sqr()).sqrt();
    AtomFieldState::new(s.terms.iter().flat_map(|t| {
        let (cg, ce) = match t.level {
            AtomLevel::Ground => (t.coeff, t.coeff * eps),
            AtomLevel::Excited => (-t.coeff * eps.conj(), t.coeff),
        };
        [
            AtomFieldTerm { level: AtomLevel::Ground, coeff: cg * k, cavity: t.cavity },
            AtomFieldTerm { level: AtomLevel::Excited, coeff: ce * k, cavity: t.cavity },
        ]
    }))
}

/// Dispersive interaction for `t = πΔ/2g²`: `|g⟩|α⟩ ↦ |g⟩|iα⟩`,
/// `|e⟩|α⟩ ↦ |e⟩|−iα⟩`.
pub fn apply_dispersive(s: &AtomFieldState) -> AtomFieldState {
    let i = C64::new(0.0, 1.0);
    AtomFieldState::new(s.terms.iter().map(|t| {
        let rot = match t.level {
            AtomLevel::Ground => i,
            AtomLevel::Excited => -i,
        };
        AtomFieldTerm { cavity: t.cavity.map(|a| a * rot), ..*t }
    }))
}

/// Phase shifter: every cavity amplitude `α ↦ e^{iφ}α`.
pub fn apply_phase_shift<S: CavityMap>(x: &S, phi: f64) -> S {
    let rot = C64::from_polar(1.0, phi);
    x.map_cavity(|l, c| (l.map(|a| a * rot), c))
}

/// Displacement `D(β)`: `α ↦ α + β`. With `exact_phase` the coefficient also
/// picks up `e^{i·Im(β·α*)}`; without it the phase is dropped.
pub fn apply_displacement<S: CavityMap>(x: &S, beta: C64, exact_phase: bool) -> S {
    x.map_cavity(|l, c| {
        let a = l.amplitude();
        let c = if exact_phase { c * C64::from_polar(1.0, (beta * a.conj()).im) } else { c };
        (l.map(|a| a + beta), c)
    })
}

/// Projects the atom onto `|g⟩`. Returns the normalized cavity state and the
/// probability of the outcome.
pub fn measure_ground(s: &AtomFieldState) -> Result<(Superposition, f64)> {
    let g = s.component(AtomLevel::Ground);
    let g_norm = inner(&g, &g)?.re;
    if !(g_norm >= 1e-15) {
        return Err(Error::NeverGround);
    }
    let total = s.norm_sqr();
    Ok((normalize(&g)?, g_norm / total))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    Pulse(C64),
    Dispersive,
    PhaseShift(f64),
    Displace { beta: C64, exact_phase: bool },
    MeasureGround,
}

/// Ordered list of protocol primitives applied to `|g⟩|α⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recipe {
    steps: Vec<Step>,
}

impl Recipe {
    /// Validates the step order: exactly one `MeasureGround` and only cavity
    /// maps after it; a pulse before the first dispersive step, between any two
    /// of them and after the last one.
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let measures: Vec<usize> = steps
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Step::MeasureGround))
            .map(|(i, _)| i)
            .collect();
        let [m] = measures[..] else {
            return Err(Error::BadRecipe(format!("expected one MeasureGround, found {}", measures.len())));
        };
        if steps[m + 1..].iter().any(|s| matches!(s, Step::Pulse(_) | Step::Dispersive)) {
            return Err(Error::BadRecipe("atomic steps after the measurement".into()));
        }
        let mut pulse_since_dispersive = false;
        let mut seen_dispersive = false;
        for s in &steps[..m] {
            match s {
                Step::Pulse(_) => pulse_since_dispersive = true,
                Step::Dispersive => {
                    if !pulse_since_dispersive {
                        return Err(Error::BadRecipe("dispersive step without a preceding pulse".into()));
                    }
                    pulse_since_dispersive = false;
                    seen_dispersive = true;
                }
                _ => {}
            }
        }
        if seen_dispersive && !pulse_since_dispersive {
            return Err(Error::BadRecipe("no pulse after the last dispersive step".into()));
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Generation recipe for a superposition of `n + 1` coherent states,
    /// `n ∈ {1, 2, 3}`, from pulse amplitudes `eps` (length `n + 1`) and the
    /// initial amplitude `alpha`.
    ///
    /// The outputs are supported on `{α, −α}`, `{2α, 0, −2α}` and
    /// `{3α, α, −α, −3α}`.
    pub fn canonical(n: usize, eps: &[C64], alpha: C64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::BadRecipe(format!("no canonical recipe for N = {n}")));
        }
        if eps.len() != n + 1 {
            return Err(Error::BadRecipe(format!("N = {n} needs {} pulse amplitudes", n + 1)));
        }
        let i = C64::new(0.0, 1.0);
        let displace = |beta| Step::Displace { beta, exact_phase: false };
        let steps = match n {
            1 => vec![
                Step::Pulse(eps[0]),
                Step::Dispersive,
                Step::Pulse(eps[1]),
                Step::MeasureGround,
                Step::PhaseShift(FRAC_PI_2),
            ],
            2 => vec![
                Step::Pulse(eps[0]),
                Step::Dispersive,
                Step::Pulse(eps[1]),
                displace(i * alpha),
                Step::Dispersive,
                Step::Pulse(eps[2]),
                Step::MeasureGround,
                Step::PhaseShift(PI),
            ],
            _ => vec![
                Step::Pulse(eps[0]),
                Step::Dispersive,
                Step::Pulse(eps[1]),
                Step::Dispersive,
                Step::Pulse(eps[2]),
                displace(2.0 * alpha),
                Step::Dispersive,
                Step::Pulse(eps[3]),
                Step::MeasureGround,
                Step::PhaseShift(FRAC_PI_2),
            ],
        };
        Self::new(steps)
    }
}

/// Outcome of running a recipe.
#[derive(Clone, Debug)]
pub struct Generated {
    /// Normalized cavity state after the measurement and any trailing maps.
    pub state: Superposition,
    pub success_probability: f64,
}

pub fn run_recipe(r: &Recipe, start: CoherentLabel) -> Result<Generated> {
    let mut joint = AtomFieldState::ground(start);
    let mut cavity: Option<(Superposition, f64)> = None;
    for step in &r.steps {
        match (*step, cavity.as_mut()) {
            (Step::Pulse(e), None) => joint = apply_pulse(&joint, e),
            (Step::Dispersive, None) => joint = apply_dispersive(&joint),
            (Step::PhaseShift(phi), None) => joint = apply_phase_shift(&joint, phi),
            (Step::Displace { beta, exact_phase }, None) => {
                joint = apply_displacement(&joint, beta, exact_phase)
            }
            (Step::MeasureGround, None) => cavity = Some(measure_ground(&joint)?),
            (Step::PhaseShift(phi), Some((s, _))) => *s = apply_phase_shift(s, phi),
            (Step::Displace { beta, exact_phase }, Some((s, _))) => {
                *s = apply_displacement(s, beta, exact_phase)
            }
            _ => return Err(Error::BadRecipe("atomic step after measurement".into())),
        }
    }
    let (state, success_probability) = cavity.ok_or_else(|| Error::BadRecipe("no measurement".into()))?;
    Ok(Generated { state, success_probability })
}

/// Weights `A_k` of the generated state on the given labels, rescaled so the
/// weight on the reference label equals `reference_value` (the unnormalized
/// convention of the closed forms).
pub fn weights_on(
    state: &Superposition,
    labels: &[CoherentLabel],
    reference: usize,
    reference_value: C64,
) -> Result<Vec<C64>> {
    let raw: Vec<C64> = labels
        .iter()
        .map(|l| {
            state
                .terms()
                .iter()
                .find(|t| t.labels[0].approx_eq(*l))
                .map_or(C64::new(0.0, 0.0), |t| t.coeff)
        })
        .collect();
    let r = raw[reference];
    if r.norm() < 1e-300 {
        return Err(Error::ZeroNorm);
    }
    Ok(raw.iter().map(|w| w / r * reference_value).collect())
}

/// Runs the canonical recipe for `N = eps.len() − 1` from `|alpha⟩` and
/// returns its output labels with the weights scaled to the closed-form
/// convention: `A₁¹ = 1` for `N = 1`, `A₀ = 1` otherwise.
pub fn canonical_weights(eps: &[C64], alpha: C64) -> Result<(Vec<CoherentLabel>, Vec<C64>)> {
    let n = eps.len().saturating_sub(1);
    let recipe = Recipe::canonical(n, eps, alpha)?;
    let out = run_recipe(&recipe, CoherentLabel::new(alpha)?)?;
    let labels: Vec<CoherentLabel> = match n {
        1 => vec![alpha.into(), (-alpha).into()],
        2 => vec![(2.0 * alpha).into(), CoherentLabel::vacuum(), (-2.0 * alpha).into()],
        _ => [3.0, 1.0, -1.0, -3.0].iter().map(|&k| (k * alpha).into()).collect(),
    };
    let reference = if n == 1 { 1 } else { 0 };
    let w = weights_on(&out.state, &labels, reference, C64::new(1.0, 0.0))?;
    Ok((labels, w))
}

/// Closed-form unnormalized weights on `(α, −α)` for `N = 1`.
pub fn closed_form_n1(eps: &[C64]) -> [C64; 2] {
    [-eps[0] * eps[1].conj(), C64::new(1.0, 0.0)]
}

/// Closed-form unnormalized weights on `(2α, 0, −2α)` for `N = 2`.
pub fn closed_form_n2(eps: &[C64]) -> [C64; 3] {
    [
        C64::new(1.0, 0.0),
        -(eps[0] * eps[2].conj() + eps[0] * eps[1].conj()),
        -eps[1] * eps[2].conj(),
    ]
}
