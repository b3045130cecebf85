//! Parameter sweeps behind the figure data files.
//!
//! A [`SweepSpec`] names a figure and its grid. [`run_sweep`] evaluates every
//! grid point on a worker pool and returns the rows in grid order, so the
//! rendered output does not depend on the number of workers.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::json;

use crate::coherent::Superposition;
use crate::error::{Error, Result};
use crate::fock::{oracle_negativity, required_cutoff};
use crate::measures::{
    monogamy_closed_forms, negativity, paper_c3_curve, purity_concurrence, state_concurrence,
    wootters_concurrence,
};
use crate::optics::{lossy_channel, make_ecs, trace_out, EcsKind, NoiseParam};

/// Weights of the qutrit-like state in the concurrence figure.
pub const QUTRIT_WEIGHTS: [f64; 3] = [1.0, 1.35, 1.0];
/// Weights of the qufit-like state in the concurrence figure.
pub const QUFIT_WEIGHTS: [f64; 4] = [-1.0, 1.0, -1.0, -1.0];
/// Weights of the qubit-like state, `A₀A₁ = −1`.
pub const QUBIT_WEIGHTS: [f64; 2] = [-1.0, 1.0];

/// Grid point tolerance when stepping up to an inclusive bound.
const GRID_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Parameter grid of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    /// `α = 0, step, …, alpha_max`.
    Alpha { alpha_max: f64, step: f64 },
    /// Every `p` against `η = eta_step, 2·eta_step, …, 1`.
    Noise { p: Vec<f64>, eta_step: f64 },
    /// `p' = 0, step, …, 1` against every `η`.
    Monogamy { eta: Vec<f64>, pprime_step: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Figure number, 2 to 7.
    pub figure: u8,
    pub grid: Grid,
    pub output: PathBuf,
    pub format: Format,
    /// Worker threads; 0 lets the pool choose.
    pub workers: usize,
}

/// Evaluated sweep: a header and one row per retained grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Grid points left out, with the reason.
    pub skipped: Vec<String>,
}

pub fn ecs_kind_for(figure: u8) -> Option<EcsKind> {
    match figure {
        3 | 4 => Some(EcsKind::Qubit),
        5 => Some(EcsKind::Qutrit),
        6 => Some(EcsKind::Qufit),
        _ => None,
    }
}

pub fn family_weights(kind: EcsKind) -> Vec<C64> {
    let w: &[f64] = match kind {
        EcsKind::Qubit => &QUBIT_WEIGHTS,
        EcsKind::Qutrit => &QUTRIT_WEIGHTS,
        EcsKind::Qufit => &QUFIT_WEIGHTS,
    };
    w.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// `start, start+step, …` up to `end` inclusive (within a small slack).
fn steps(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::DomainError(format!("step {step} must be positive")));
    }
    let n = ((end - start) / step + GRID_SLACK).floor();
    if !(n >= 0.0) {
        return Ok(Vec::new());
    }
    Ok((0..=n as usize).map(|k| (start + k as f64 * step).min(end)).collect())
}

/// The decohered two-mode state of a family: `make_ecs` with the figure
/// weights at `p = e^{−α²}`, then loss `η` on both modes.
pub fn decohered_family(kind: EcsKind, p: f64, eta: f64) -> Result<Superposition> {
    let alpha = EcsKind::alpha_for_overlap(p)?;
    let x = make_ecs(kind, C64::new(alpha, 0.0), C64::new(0.0, 0.0), &family_weights(kind))?;
    lossy_channel(&x, &[0, 1], NoiseParam::new(eta)?)
}

/// Entanglement plotted in figures 3 to 6: Wootters concurrence for figure 3,
/// negativity for the rest.
///
/// At small `η` the damped labels can crowd together until the coherent basis
/// is ill-conditioned. The amplitudes are then small enough for the number
/// basis to be exact, and the negativity is taken from [`oracle_negativity`].
pub fn noise_measure(figure: u8, p: f64, eta: f64) -> Result<f64> {
    let kind = ecs_kind_for(figure).ok_or_else(|| Error::DomainError(format!("figure {figure} has no η sweep")))?;
    let x = decohered_family(kind, p, eta)?;
    match trace_out(&x, &[0, 1]) {
        Ok(rho) if figure == 3 => wootters_concurrence(&rho),
        Ok(rho) => negativity(&rho, &[1]),
        Err(Error::GramIllConditioned(_)) if figure > 3 => {
            oracle_negativity(&x, &[0, 1], &[1], required_cutoff(&x))
        }
        Err(e) => Err(e),
    }
}

/// Pure-state concurrence, falling back to the purity identity when the
/// labels are too close to orthonormalize.
fn robust_concurrence(x: &Superposition) -> Result<f64> {
    match state_concurrence(x, &[0]) {
        Err(Error::GramIllConditioned(_)) => purity_concurrence(x, &[0]),
        r => r,
    }
}

/// Concurrences of the qutrit-like and qufit-like states at real `α`.
pub fn figure2_point(alpha: f64) -> Result<[f64; 3]> {
    let zero = C64::new(0.0, 0.0);
    let a = C64::new(alpha, 0.0);
    let c3 = robust_concurrence(&make_ecs(EcsKind::Qutrit, a, zero, &family_weights(EcsKind::Qutrit))?)?;
    let c4 = robust_concurrence(&make_ecs(EcsKind::Qufit, a, zero, &family_weights(EcsKind::Qufit))?)?;
    let c3_paper = paper_c3_curve((-alpha * alpha).exp())?;
    Ok([c3, c4, c3_paper])
}

enum Point {
    Row(Vec<f64>),
    Skip(String),
}

fn validate(spec: &SweepSpec) -> Result<Vec<(f64, f64)>> {
    let points: Vec<(f64, f64)> = match (&spec.figure, &spec.grid) {
        (2, Grid::Alpha { alpha_max, step }) => {
            if !(*alpha_max >= 0.0 && alpha_max.is_finite()) {
                return Err(Error::DomainError(format!("alpha-max {alpha_max} must be ≥ 0")));
            }
            steps(0.0, *alpha_max, *step)?.into_iter().map(|a| (a, 0.0)).collect()
        }
        (3..=6, Grid::Noise { p, eta_step }) => {
            for &v in p {
                if !(v > 0.0 && v < 1.0) {
                    return Err(Error::DomainError(format!("p = {v} must lie in (0, 1)")));
                }
            }
            let etas = steps(*eta_step, 1.0, *eta_step)?;
            p.iter().flat_map(|&pv| etas.iter().map(move |&e| (pv, e))).collect()
        }
        (7, Grid::Monogamy { eta, pprime_step }) => {
            if let Some(e) = eta.iter().find(|e| !(0.0..=1.0).contains(*e)) {
                return Err(Error::DomainError(format!("eta = {e} must lie in [0, 1]")));
            }
            let pp = steps(0.0, 1.0, *pprime_step)?;
            pp.iter().flat_map(|&x| eta.iter().map(move |&e| (x, e))).collect()
        }
        (f @ 2..=7, _) => return Err(Error::DomainError(format!("grid does not match figure {f}"))),
        (f, _) => return Err(Error::DomainError(format!("no figure {f}"))),
    };
    if points.is_empty() {
        return Err(Error::DomainError("empty grid".into()));
    }
    Ok(points)
}

fn evaluate(figure: u8, (x, y): (f64, f64)) -> Result<Point> {
    Ok(match figure {
        2 => {
            let [c3, c4, paper] = figure2_point(x)?;
            Point::Row(vec![x, c3, c4, paper])
        }
        3..=6 => Point::Row(vec![x, y, noise_measure(figure, x, y)?]),
        _ => {
            if x <= 0.0 || x >= 1.0 || y <= 0.0 {
                Point::Skip(format!("pprime={x} eta={y}: closed form singular"))
            } else {
                Point::Row(vec![x, y, monogamy_closed_forms(x, y)?.tau])
            }
        }
    })
}

pub fn columns(figure: u8) -> Vec<&'static str> {
    match figure {
        2 => vec!["alpha", "C3", "C4", "C3_paper"],
        3..=6 => vec!["p", "eta", "measure"],
        _ => vec!["pprime", "eta", "tau"],
    }
}

/// Evaluates every grid point of `spec`, rows in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    let points = validate(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::DomainError(format!("worker pool: {e}")))?;
    let figure = spec.figure;
    let results: Vec<Result<Point>> =
        pool.install(|| points.par_iter().map(|&pt| evaluate(figure, pt)).collect());
    let mut table = Table { columns: columns(figure), rows: Vec::new(), skipped: Vec::new() };
    for r in results {
        match r? {
            Point::Row(v) => table.rows.push(v),
            Point::Skip(why) => table.skipped.push(why),
        }
    }
    Ok(table)
}

/// Fixed-point with 12 decimals; a value that rounds to zero prints unsigned.
pub fn format_float(x: f64) -> String {
    let s = format!("{x:.12}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = table.columns.join(",");
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: serde_json::Map<String, serde_json::Value> = table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, &v)| {
                            let rounded: f64 = format_float(v).parse().expect("formatted float");
                            (c.to_string(), json!(rounded))
                        })
                        .collect();
                    serde_json::Value::Object(obj)
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({ "columns": table.columns, "rows": rows }))
                .expect("serializable");
            s.push('\n');
            s
        }
    }
}

/// Runs the sweep and writes the rendered table to `spec.output`. Nothing is
/// written if any grid point fails.
pub fn cmd_figure(spec: &SweepSpec) -> Result<Table> {
    let table = run_sweep(spec)?;
    std::fs::write(&spec.output, render(&table, spec.format))
        .map_err(|e| Error::DomainError(format!("{}: {e}", spec.output.display())))?;
    Ok(table)
}
