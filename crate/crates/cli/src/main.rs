//! `detwit`: determinant dimension witnesses for prepare-and-measure data.
//!
//! Exit codes: 0 success, 1 negative finding (e.g. no decomposition),
//! 2 input error, 3 shape mismatch, 4 infeasible request, 5 partial output.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use detwit::analysis::{find_bit_decomposition, randomness_curve};
use detwit::constructions::{
    bb84_strategy, classical_hadamard_strategy, classical_identity_strategy,
    correlated_mixture_behavior, mub_strategy, parallel_gellmann_strategy,
};
use detwit::optimize::{
    maximize_witness_classical_bruteforce, maximize_witness_classical_seesaw,
    maximize_witness_quantum, OptimizerConfig,
};
use detwit::scenario::apply_noise;
use detwit::witness::{witness_relabeling_scan, witness_value};
use detwit::{Behavior64, Error};

use output::{fmt12, to_json};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SHAPE: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;
const EXIT_PARTIAL: u8 = 5;

#[derive(Parser)]
#[command(
    name = "detwit",
    version,
    about = "Determinant dimension witnesses for prepare-and-measure experiments"
)]
struct Cli {
    /// Worker threads for optimizer restarts and curve points
    /// (0 = available parallelism).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the witness of a behavior file.
    Witness(WitnessArgs),
    /// Maximise the witness over strategies of a given dimension.
    Optimize(OptimizeArgs),
    /// Scan the witness of a behavior under preparation-independent noise.
    NoiseScan(NoiseScanArgs),
    /// Trace certifiable randomness against the witness value.
    RandomnessCurve(CurveArgs),
    /// Emit a named strategy or behavior as JSON.
    Construct(ConstructArgs),
    /// Search for a two-message independent-devices model of a behavior.
    Decompose(DecomposeArgs),
}

#[derive(Args)]
struct WitnessArgs {
    /// Behavior JSON file.
    input: PathBuf,
    /// Witness order; the file needs 2k preparations and k measurements.
    #[arg(long)]
    k: usize,
    /// Also scan the three preparation pairings (k = 2 only).
    #[arg(long)]
    relabelings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Quantum,
    Classical,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// System dimension (Hilbert space dimension or message count).
    #[arg(long)]
    d: usize,
    /// Witness order.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exhaustive enumeration instead of see-saw (classical only).
    #[arg(long)]
    brute_force: bool,
    #[arg(long, default_value_t = 500)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct NoiseScanArgs {
    /// Behavior JSON file (4 preparations, 2 measurements).
    input: PathBuf,
    /// Noise-free weights eta, as `a,b,c` or `start:stop:count`.
    #[arg(long)]
    eta_grid: String,
    /// Noise distribution p_N(y), one value per measurement.
    #[arg(long)]
    pn: String,
}

#[derive(Args)]
struct CurveArgs {
    /// Witness values Q, as `a,b,c` or `start:stop:count`, inside (0, 1].
    #[arg(long)]
    q_grid: String,
    #[arg(long, default_value_t = 12)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 400)]
    max_iterations: usize,
    /// Output CSV path; raw per-point values go to a `.raw.csv` sibling.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionName {
    Bb84,
    ClassicalIdentity,
    CorrelatedMixture,
    Mub,
    GellmannParallel,
    HadamardClassical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Strategy,
    Behavior,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    name: ConstructionName,
    /// Measurement angle for bb84.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Dimension for mub / gellmann-parallel.
    #[arg(long)]
    d: Option<usize>,
    /// Witness order for classical-identity / mub / gellmann-parallel.
    #[arg(long)]
    k: Option<usize>,
    /// Emit the strategy itself or the behavior it produces.
    #[arg(long, value_enum)]
    emit: Option<Emit>,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Behavior JSON file.
    input: PathBuf,
    /// Reconstruction tolerance.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Shape(_) => EXIT_SHAPE,
            Error::Domain(_) | Error::Invariant(_) => EXIT_INPUT,
            Error::Infeasible(_) => EXIT_INFEASIBLE,
        };
        Failure::new(code, err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let run = move || match &cli.command {
        Command::Witness(args) => cmd_witness(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::NoiseScan(args) => cmd_noise_scan(args),
        Command::RandomnessCurve(args) => cmd_randomness_curve(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Decompose(args) => cmd_decompose(args),
    };
    let outcome = if threads == 0 {
        run()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(err) => Err(Failure::new(EXIT_INPUT, err.to_string())),
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

fn read_behavior(path: &Path) -> Result<Behavior64, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

/// Parses `a,b,c` lists and `start:stop:count` linear grids (inclusive
/// endpoints).
fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |msg: &str| Failure::new(EXIT_INPUT, format!("grid `{spec}`: {msg}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("bad start"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("bad stop"))?;
        let count: usize = parts[2].parse().map_err(|_| bad("bad count"))?;
        if count == 0 {
            return Err(bad("count must be positive"));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    spec.split(',')
        .map(|tok| tok.trim().parse::<f64>().map_err(|_| bad("bad value")))
        .collect()
}

fn cmd_witness(args: &WitnessArgs) -> Result<(), Failure> {
    let behavior = read_behavior(&args.input)?;
    let report = if args.relabelings {
        if args.k != 2 {
            return Err(Failure::new(
                EXIT_INPUT,
                "--relabelings is only defined for k = 2",
            ));
        }
        witness_relabeling_scan(&behavior)?
    } else {
        witness_value(&behavior, args.k)?
    };
    println!("{}", to_json(&report));
    Ok(())
}

fn cmd_optimize(args: &OptimizeArgs) -> Result<(), Failure> {
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        max_iterations: args.max_iterations,
        convergence_tol: args.tol,
        seed: args.seed,
    };
    match args.kind {
        Kind::Quantum => {
            if args.brute_force {
                return Err(Failure::new(
                    EXIT_INPUT,
                    "--brute-force applies to classical strategies only",
                ));
            }
            let result = maximize_witness_quantum::<f64>(args.d, args.k, &cfg)?;
            println!("{}", to_json(&result));
        }
        Kind::Classical => {
            if args.brute_force {
                let result = maximize_witness_classical_bruteforce::<f64>(args.d, args.k)?;
                println!("{}", to_json(&result));
            } else {
                let result = maximize_witness_classical_seesaw::<f64>(args.d, args.k, &cfg)?;
                println!("{}", to_json(&result));
            }
        }
    }
    Ok(())
}

fn cmd_noise_scan(args: &NoiseScanArgs) -> Result<(), Failure> {
    let behavior = read_behavior(&args.input)?;
    let etas = parse_grid(&args.eta_grid)?;
    if etas.iter().any(|&e| !(0.0..=1.0).contains(&e)) {
        return Err(Failure::new(EXIT_INPUT, "eta values must lie in [0, 1]"));
    }
    let p_noise = parse_grid(&args.pn)?;
    let clean = witness_value(&behavior, 2)?.value;
    let mut out = String::from("eta,witness,ratio\n");
    for &eta in &etas {
        let noisy = apply_noise(&behavior, eta, &p_noise)?;
        let observed = witness_value(&noisy, 2)?.value;
        let ratio = observed / (eta * eta * clean);
        out.push_str(&format!(
            "{},{},{}\n",
            fmt12(eta),
            fmt12(observed),
            fmt12(ratio)
        ));
    }
    print!("{out}");
    Ok(())
}

fn raw_sibling(out: &Path) -> PathBuf {
    match out.extension().and_then(|e| e.to_str()) {
        Some(ext) => out.with_extension(format!("raw.{ext}")),
        None => out.with_extension("raw.csv"),
    }
}

fn curve_csv(points: &[detwit::RandomnessPoint64]) -> String {
    let mut text = String::from("Q,p_bar,h_min_bits\n");
    for p in points {
        text.push_str(&format!(
            "{},{},{}\n",
            fmt12(p.q),
            fmt12(p.p_bar),
            fmt12(p.h_min)
        ));
    }
    text
}

fn cmd_randomness_curve(args: &CurveArgs) -> Result<(), Failure> {
    let grid = parse_grid(&args.q_grid)?;
    if grid.iter().any(|&q| !(q > 0.0 && q <= 1.0)) {
        return Err(Failure::new(EXIT_INPUT, "Q values must lie in (0, 1]"));
    }
    let cfg = OptimizerConfig {
        restarts: args.restarts,
        max_iterations: args.max_iterations,
        convergence_tol: 1e-10,
        seed: args.seed,
    };
    let curve = randomness_curve(&grid, &cfg)?;
    let write = |path: &Path, text: &str| {
        fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
    };
    write(&args.out, &curve_csv(&curve.points))?;
    write(&raw_sibling(&args.out), &curve_csv(&curve.raw))?;
    if !curve.failed.is_empty() {
        let list: Vec<String> = curve.failed.iter().map(|q| fmt12(*q)).collect();
        return Err(Failure::new(
            EXIT_PARTIAL,
            format!(
                "no feasible strategy at Q = {}; partial curve written to {}",
                list.join(", "),
                args.out.display()
            ),
        ));
    }
    Ok(())
}

fn cmd_construct(args: &ConstructArgs) -> Result<(), Failure> {
    let need = |opt: Option<usize>, what: &str| {
        opt.ok_or_else(|| {
            Failure::new(
                EXIT_INPUT,
                format!("--{what} is required for this construction"),
            )
        })
    };
    let emit = args.emit.unwrap_or(match args.name {
        ConstructionName::CorrelatedMixture => Emit::Behavior,
        _ => Emit::Strategy,
    });

    enum Built {
        Quantum(detwit::QuantumStrategy64),
        Classical(detwit::ClassicalStrategy64),
        Behavior(Behavior64),
    }

    let built = match args.name {
        ConstructionName::Bb84 => Built::Quantum(bb84_strategy(args.theta)),
        ConstructionName::ClassicalIdentity => {
            let k = need(args.k, "k")?;
            if k == 0 {
                return Err(Failure::new(EXIT_INPUT, "--k must be positive"));
            }
            Built::Classical(classical_identity_strategy(k))
        }
        ConstructionName::CorrelatedMixture => {
            if matches!(args.emit, Some(Emit::Strategy)) {
                return Err(Failure::new(
                    EXIT_INPUT,
                    "the correlated mixture exists only as a behavior",
                ));
            }
            Built::Behavior(correlated_mixture_behavior())
        }
        ConstructionName::Mub => {
            Built::Quantum(mub_strategy(need(args.d, "d")?, need(args.k, "k")?)?)
        }
        ConstructionName::GellmannParallel => Built::Quantum(parallel_gellmann_strategy(
            need(args.d, "d")?,
            need(args.k, "k")?,
        )?),
        ConstructionName::HadamardClassical => Built::Classical(classical_hadamard_strategy()),
    };

    let text = match (built, emit) {
        (Built::Behavior(b), _) => to_json(&b),
        (Built::Quantum(s), Emit::Strategy) => to_json(&s),
        (Built::Quantum(s), Emit::Behavior) => to_json(&s.to_behavior()?),
        (Built::Classical(s), Emit::Strategy) => to_json(&s),
        (Built::Classical(s), Emit::Behavior) => to_json(&s.to_behavior()?),
    };
    println!("{text}");
    Ok(())
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<(), Failure> {
    let behavior = read_behavior(&args.input)?;
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Failure::new(EXIT_INPUT, "--tol must be positive"));
    }
    let result = find_bit_decomposition(&behavior, args.tol);
    println!("{}", to_json(&result));
    if result.found {
        Ok(())
    } else {
        Err(Failure::new(EXIT_NEGATIVE, String::new()))
    }
}
