use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use ecs::coherent::{overlap, CoherentLabel, Superposition};
use ecs::figures::{cmd_figure, family_weights, format_float, Format, Grid, SweepSpec};
use ecs::fock::{fock_inner, oracle_negativity, to_fock};
use ecs::measures::{
    monogamy_closed_forms, negativity, qutrit_violation_example, state_concurrence, wootters_concurrence,
};
use ecs::optics::{lossy_channel, make_ecs, trace_out, EcsKind, NoiseParam};
use ecs::protocol::canonical_weights;

/// Entangled coherent states: figure sweeps and single computations.
#[derive(Parser)]
#[command(name = "ecs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the data behind figure 2 to 7 as CSV or JSON.
    Figure(FigureArgs),
    /// Print a single quantity.
    Compute(ComputeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure number.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=7))]
    n: u8,
    /// Largest α (figure 2).
    #[arg(long, default_value_t = 3.0)]
    alpha_max: f64,
    /// Step in α (figure 2) or p' (figure 7).
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Overlaps p for figures 3 to 6.
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.5, 0.8])]
    p: Vec<f64>,
    /// Step in η for figures 3 to 6.
    #[arg(long, default_value_t = 0.01)]
    eta_step: f64,
    /// Noise parameters for figure 7.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.4, 1.0])]
    eta: Vec<f64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Overlap,
    Generate,
    Concurrence,
    Negativity,
    Monogamy,
    Violation,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Qubit,
    Qutrit,
    Qufit,
}

impl From<Family> for EcsKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Qubit => EcsKind::Qubit,
            Family::Qutrit => EcsKind::Qutrit,
            Family::Qufit => EcsKind::Qufit,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(value_enum, value_name = "KIND")]
    quantity: Quantity,
    /// Bra label of `overlap`, re[,im].
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    a: Option<C64>,
    /// Ket label of `overlap`, re[,im].
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    b: Option<C64>,
    /// Coherent amplitude α, re[,im].
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    alpha: Option<C64>,
    /// Qutrit offset β, re[,im].
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "0")]
    beta: C64,
    /// Pulse amplitudes ε₀,…,ε_N, each real or of the form a+bi.
    #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
    eps: Vec<C64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Overlap p = e^{−α²}; takes precedence over --alpha.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    pprime: Option<f64>,
    /// Qubit weight ratio r = ε₀ε₁*, giving weights (−r, 1); re[,im].
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    ratio: Option<C64>,
    /// ECS family for `concurrence` and `negativity`.
    #[arg(long = "kind", value_enum, default_value_t = Family::Qubit)]
    family: Family,
    /// Family weights, each real or of the form a+bi.
    #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
    weights: Vec<C64>,
    /// Evaluate in a number basis truncated at K photons per mode.
    #[arg(long)]
    cutoff: Option<usize>,
}

fn parse_pair(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re[,im], got {s:?}")),
    }
}

fn parse_complex(s: &str) -> Result<C64, String> {
    C64::from_str(s.trim()).map_err(|e| format!("{s:?}: {e}"))
}

enum Failure {
    Usage(String),
    Domain(ecs::Error),
}

impl From<ecs::Error> for Failure {
    fn from(e: ecs::Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn print_complex(z: C64) -> String {
    if z.im == 0.0 {
        format_float(z.re)
    } else {
        format!("{} {}", format_float(z.re), format_float(z.im))
    }
}

fn family_state(args: &ComputeArgs) -> Result<Superposition, Failure> {
    let kind = EcsKind::from(args.family);
    let alpha = match (args.p, args.alpha) {
        (Some(p), _) => C64::new(EcsKind::alpha_for_overlap(p)?, 0.0),
        (None, Some(a)) => a,
        (None, None) => return usage("--p or --alpha is required"),
    };
    let weights = if !args.weights.is_empty() {
        args.weights.clone()
    } else if let (EcsKind::Qubit, Some(r)) = (kind, args.ratio) {
        vec![-r, C64::new(1.0, 0.0)]
    } else {
        family_weights(kind)
    };
    Ok(make_ecs(kind, alpha, args.beta, &weights)?)
}

/// The two-mode state after loss on both modes, environment modes appended.
fn decohered(x: &Superposition, eta: f64) -> Result<Superposition, Failure> {
    Ok(lossy_channel(x, &[0, 1], NoiseParam::new(eta)?)?)
}

fn compute(args: &ComputeArgs) -> Result<Vec<String>, Failure> {
    Ok(match args.quantity {
        Quantity::Overlap => {
            let (Some(a), Some(b)) = (args.a, args.b) else {
                return usage("overlap needs --a and --b");
            };
            let (a, b) = (CoherentLabel::new(a)?, CoherentLabel::new(b)?);
            let z = match args.cutoff {
                Some(k) => {
                    let one = C64::new(1.0, 0.0);
                    let fa = to_fock(&Superposition::single_mode([(one, a)]), k)?;
                    let fb = to_fock(&Superposition::single_mode([(one, b)]), k)?;
                    fock_inner(&fa, &fb)
                }
                None => overlap(a, b),
            };
            vec![print_complex(z)]
        }
        Quantity::Generate => {
            if args.eps.len() < 2 || args.eps.len() > 4 {
                return usage("generate needs 2 to 4 pulse amplitudes in --eps");
            }
            let alpha = args.alpha.unwrap_or(C64::new(1.0, 0.0));
            let (_, w) = canonical_weights(&args.eps, alpha)?;
            w.iter().map(|&z| format!("{} {}", format_float(z.re), format_float(z.im))).collect()
        }
        Quantity::Concurrence => {
            let x = family_state(args)?;
            let eta = args.eta.unwrap_or(1.0);
            NoiseParam::new(eta)?;
            let c = if eta == 1.0 {
                state_concurrence(&x, &[0])?
            } else if let Family::Qubit = args.family {
                wootters_concurrence(&trace_out(&decohered(&x, eta)?, &[0, 1])?)?
            } else {
                return Err(Failure::Domain(ecs::Error::DomainError(
                    "mixed-state concurrence is only defined for the qubit family; use negativity".into(),
                )));
            };
            vec![format_float(c)]
        }
        Quantity::Negativity => {
            let x = decohered(&family_state(args)?, args.eta.unwrap_or(1.0))?;
            let n = match args.cutoff {
                Some(k) => oracle_negativity(&x, &[0, 1], &[1], k)?,
                None => negativity(&trace_out(&x, &[0, 1])?, &[1])?,
            };
            vec![format_float(n)]
        }
        Quantity::Monogamy => {
            let Some(pp) = args.pprime else {
                return usage("monogamy needs --pprime");
            };
            let r = monogamy_closed_forms(pp, args.eta.unwrap_or(1.0))?;
            vec![[r.c_ab, r.c_ad, r.c_abd, r.tau].map(format_float).join(" ")]
        }
        Quantity::Violation => {
            let (lhs, rhs) = qutrit_violation_example()?;
            vec![format!("{} {}", format_float(lhs), format_float(rhs))]
        }
    })
}

fn figure(args: &FigureArgs) -> Result<(), Failure> {
    let grid = match args.n {
        2 => Grid::Alpha { alpha_max: args.alpha_max, step: args.step },
        7 => Grid::Monogamy { eta: args.eta.clone(), pprime_step: args.step },
        _ => Grid::Noise { p: args.p.clone(), eta_step: args.eta_step },
    };
    let spec = SweepSpec {
        figure: args.n,
        grid,
        output: args.out.clone(),
        format: match args.format {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        },
        workers: args.workers,
    };
    let table = cmd_figure(&spec)?;
    for note in &table.skipped {
        eprintln!("skipped {note}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Figure(a) => figure(a),
        Command::Compute(a) => compute(a).map(|lines| {
            for l in lines {
                println!("{l}");
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => Cli::command().error(ErrorKind::MissingRequiredArgument, msg).exit(),
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
