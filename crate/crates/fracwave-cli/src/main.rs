//! Command-line front end for the `fracwave` library: compute standing-wave
//! profiles of the cubic fractional NLS equation, check them against closed
//! forms, characterize the spectra of the linearized operators, and sweep
//! the stability index over frequency ranges.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors, 2 when the
//! computation itself fails (non-convergence, blow-up, a missed validation
//! gate, a sweep with no converged points).
//!
//! Identical command lines produce bit-identical outputs: there is no
//! randomness, no time stamps, and the parallel sweep mode assigns one
//! frequency per task with no cross-task reductions.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use fracwave::closed_form::{dn_solution, gamma, stokes_wave};
use fracwave::ops::residual;
use fracwave::{
    default_initial_guess, make_grid, run_sweep, solve, spectral_report, Classification, Error,
    FractionalParams, PetviashviliConfig, RealPeriodicField, SolveResult, SpectralReport,
    SweepConfig,
};

mod output;
use output::{emit, profile_csv, run_config, sweep_csv, to_pretty_json, WaveDocument};

/// Failures carry their exit status: bad arguments and unusable paths exit
/// 1; failures of the computation itself exit 2.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> Failure {
    Failure::Compute(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "fracwave",
    version,
    about = "Standing waves of the cubic fractional NLS equation: profiles, spectra, stability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a standing-wave profile by Petviashvili iteration
    Solve(SolveArgs),
    /// Check the solver against a closed form and gate on the discrepancy
    Validate(ValidateArgs),
    /// Spectra and index counts of the linearized operators about a wave
    Spectrum(SpectrumArgs),
    /// Mass curve and stability index over a frequency range
    Sweep(SweepArgs),
    /// Evaluate the small-amplitude expansion without solving
    Stokes(StokesArgs),
}

/// Iteration controls shared by every subcommand that solves.
#[derive(Args, Serialize, Clone)]
struct SolverOpts {
    /// Stabilization exponent of the iteration
    #[arg(long, default_value = "1.5")]
    nu: f64,
    /// Tolerance on the step-size and |1 - M| monitors
    #[arg(long, default_value = "1e-12")]
    tol: f64,
    /// Tolerance on the equation-residual monitor [default: 1e-10; sweep: 1e-8]
    #[arg(long)]
    tol_res: Option<f64>,
    /// Iteration budget
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
}

impl SolverOpts {
    fn validate(&self) -> Result<(), Failure> {
        for (name, v) in [
            ("nu", self.nu),
            ("tol", self.tol),
            ("tol-res", self.tol_res.unwrap_or(0.0)),
        ] {
            if !v.is_finite() {
                return Err(Failure::Usage(format!("--{name} must be finite")));
            }
        }
        Ok(())
    }

    /// The residual tolerance defaults per subcommand: sweeps run on larger
    /// grids where the round-off floor of the residual is higher.
    fn to_config(&self, default_tol_res: f64) -> PetviashviliConfig {
        PetviashviliConfig {
            nu: self.nu,
            tol_error: self.tol,
            tol_m: self.tol,
            tol_res: self.tol_res.unwrap_or(default_tol_res),
            max_iter: self.max_iter,
            enforce_even: true,
        }
    }
}

#[derive(Args, Serialize, Clone)]
struct OutputOpts {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output encoding
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Serialize, Clone)]
struct SolveArgs {
    /// Fractional order s in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Frequency omega > 0
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Grid points (even, at least 8)
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverOpts,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputOpts,
}

#[derive(ValueEnum, Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Case {
    /// Dnoidal closed form (s = 1 only)
    Dn,
    /// Order study of the small-amplitude expansion residual
    Stokes,
}

#[derive(Args, Serialize, Clone)]
struct ValidateArgs {
    /// Closed form to check against
    #[arg(long, value_enum)]
    case: Case,
    /// Fractional order s in (0, 1]; the dn case requires 1
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Frequency omega > 1/2 (dn case)
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Expansion amplitude (stokes case)
    #[arg(long, default_value_t = 0.08)]
    a: f64,
    /// Grid points
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverOpts,
    /// Report file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone)]
struct SpectrumArgs {
    /// Wave file from `solve --format json`; solves inline when omitted
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["s", "omega", "n"])]
    #[serde(rename = "in")]
    input: Option<PathBuf>,
    /// Fractional order s in (0, 1] (inline solve)
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Frequency omega > 0 (inline solve)
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Grid points (inline solve)
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Cosine/sine modes kept in the operator truncation
    #[arg(long, default_value_t = 256)]
    modes: usize,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverOpts,
    /// Report file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone)]
struct SweepArgs {
    /// Fractional order s in (0, 1]
    #[arg(long)]
    s: f64,
    /// Lower edge of the frequency range (exclusive, at least 1/2)
    #[arg(long, default_value_t = 0.6)]
    omega_min: f64,
    /// Upper edge of the frequency range (inclusive)
    #[arg(long, default_value_t = 10.0)]
    omega_max: f64,
    /// Number of frequency points
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Grid points per solve
    #[arg(long, default_value_t = 4096)]
    n: usize,
    /// Seed every frequency from scratch instead of continuing along the branch
    #[arg(long)]
    cold_start: bool,
    /// Solve cold-start points on the thread pool (implies --cold-start)
    #[arg(long)]
    parallel: bool,
    /// Preset for the full stability picture: 1000 points on (0.5, 50] at n = 16384
    #[arg(long, conflicts_with_all = ["omega_min", "omega_max", "steps", "n"])]
    full_scale: bool,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverOpts,
    /// CSV table path; a JSON sidecar with the verdict lands next to it
    /// (same stem, .json). Without --out the table goes to stdout and the
    /// sidecar to stderr
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone)]
struct StokesArgs {
    /// Fractional order s in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Expansion amplitude (asymptotic for a <= 0.2)
    #[arg(long, default_value_t = 0.08)]
    a: f64,
    /// Grid points
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputOpts,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are requests, not mistakes; everything else
            // clap reports is a usage error
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Stokes(args) => cmd_stokes(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

/// Validate flags, build the grid, and run the iteration from the default
/// initial guess.
fn solve_from_flags(
    s: f64,
    omega: f64,
    n: usize,
    solver: &SolverOpts,
    default_tol_res: f64,
) -> Result<SolveResult, Failure> {
    solver.validate()?;
    let p = FractionalParams::new(s, omega).map_err(usage)?;
    let grid = make_grid(n).map_err(usage)?;
    let init = default_initial_guess(&grid, &p).map_err(compute)?;
    solve(&init, &p, &solver.to_config(default_tol_res)).map_err(compute)
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, Failure> {
    let result = solve_from_flags(args.s, args.omega, args.n, &args.solver, 1e-10)?;
    let SolveResult {
        profile,
        trace,
        converged,
        final_res,
        ..
    } = result;
    let iterations = trace.len();
    let config = run_config("solve", args);
    let body = match args.output.format {
        Format::Json => to_pretty_json(&WaveDocument {
            config,
            s: args.s,
            omega: args.omega,
            n: args.n,
            converged,
            iterations,
            final_res,
            profile: profile.values().to_vec(),
            trace,
        })?,
        Format::Csv => profile_csv(&config, profile.grid().nodes(), profile.values()),
    };
    emit(&args.output.out, &body)?;
    if converged {
        Ok(0)
    } else {
        eprintln!("did not converge within {iterations} iterations (final residual {final_res:.3e})");
        Ok(2)
    }
}

#[derive(Serialize)]
struct Monitors {
    error: f64,
    m_gap: f64,
    res: f64,
}

#[derive(Serialize)]
struct DnReport {
    config: Value,
    case: &'static str,
    sup_discrepancy: f64,
    converged: bool,
    iterations: usize,
    /// Final values of the three convergence monitors (absent when the
    /// iteration never ran).
    monitors: Option<Monitors>,
    pass: bool,
}

#[derive(Serialize)]
struct StokesValidateReport {
    config: Value,
    case: &'static str,
    gamma: f64,
    /// Profile-equation residual of the expansion at amplitude a.
    residual: f64,
    /// The same at a/2; fourth-order accuracy means a ratio near 16.
    residual_half: f64,
    ratio: f64,
    pass: bool,
}

fn cmd_validate(args: &ValidateArgs) -> Result<u8, Failure> {
    match args.case {
        Case::Dn => validate_dn(args),
        Case::Stokes => validate_stokes(args),
    }
}

fn validate_dn(args: &ValidateArgs) -> Result<u8, Failure> {
    if args.s != 1.0 {
        return Err(Failure::Usage(
            "--case dn requires --s 1: the dnoidal closed form exists only for the classical Laplacian".into(),
        ));
    }
    if !(args.omega > 0.5) {
        return Err(Failure::Usage(format!(
            "--case dn requires --omega > 0.5 (the wave branch), got {}",
            args.omega
        )));
    }
    let result = solve_from_flags(1.0, args.omega, args.n, &args.solver, 1e-10)?;
    let oracle = dn_solution(result.profile.grid(), args.omega).map_err(compute)?;
    let gap = result.profile.sup_distance(&oracle).map_err(compute)?;
    let monitors = match (
        result.trace.error.last(),
        result.trace.m_gap.last(),
        result.trace.res.last(),
    ) {
        (Some(&error), Some(&m_gap), Some(&res)) => Some(Monitors { error, m_gap, res }),
        _ => None,
    };
    let pass = result.converged && gap <= 1e-6;
    let report = DnReport {
        config: run_config("validate", args),
        case: "dn",
        sup_discrepancy: gap,
        converged: result.converged,
        iterations: result.iterations(),
        monitors,
        pass,
    };
    emit(&args.out, &to_pretty_json(&report)?)?;
    Ok(if pass { 0 } else { 2 })
}

fn validate_stokes(args: &ValidateArgs) -> Result<u8, Failure> {
    if !(args.a.is_finite() && args.a > 0.0) {
        return Err(Failure::Usage(format!(
            "--a must be a positive amplitude, got {}",
            args.a
        )));
    }
    let grid = make_grid(args.n).map_err(usage)?;
    let residual_at = |a: f64| -> Result<f64, Failure> {
        let (wave, omega) = stokes_wave(&grid, a, args.s).map_err(usage)?;
        let p = FractionalParams::new(args.s, omega).map_err(usage)?;
        let (_, res) = residual(&wave, &p).map_err(compute)?;
        Ok(res)
    };
    let res_a = residual_at(args.a)?;
    let res_half = residual_at(args.a / 2.0)?;
    let ratio = res_a / res_half;
    // fourth-order residual: halving a divides it by ~16
    let pass = (12.0..=20.0).contains(&ratio);
    let report = StokesValidateReport {
        config: run_config("validate", args),
        case: "stokes",
        gamma: gamma(args.s),
        residual: res_a,
        residual_half: res_half,
        ratio,
        pass,
    };
    emit(&args.out, &to_pretty_json(&report)?)?;
    Ok(if pass { 0 } else { 2 })
}

#[derive(Serialize)]
struct SpectrumDocument {
    config: Value,
    s: f64,
    omega: f64,
    n: usize,
    modes: usize,
    report: SpectralReport,
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<u8, Failure> {
    let (field, params) = match &args.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let doc: WaveDocument = serde_json::from_str(&text).map_err(|e| {
                Failure::Usage(format!("malformed wave file {}: {e}", path.display()))
            })?;
            let grid = make_grid(doc.n).map_err(usage)?;
            let field = RealPeriodicField::new(grid, doc.profile).map_err(usage)?;
            let params = FractionalParams::new(doc.s, doc.omega).map_err(usage)?;
            (field, params)
        }
        None => {
            let result = solve_from_flags(args.s, args.omega, args.n, &args.solver, 1e-10)?;
            if !result.converged {
                return Err(Failure::Compute(format!(
                    "solve did not converge within {} iterations; pass a converged wave via --in or raise --max-iter",
                    result.iterations()
                )));
            }
            (result.profile, result.params)
        }
    };
    let report = spectral_report(&field, &params, args.modes).map_err(|e| match e {
        Error::TruncationTooLarge { .. } => usage(e),
        other => compute(other),
    })?;
    let doc = SpectrumDocument {
        config: run_config("spectrum", args),
        s: params.s(),
        omega: params.omega(),
        n: field.len(),
        modes: args.modes,
        report,
    };
    emit(&args.out, &to_pretty_json(&doc)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct SweepSidecar {
    config: Value,
    s: f64,
    classification: Classification,
    omega_c: Option<f64>,
    delta_omega: f64,
    points: usize,
    converged_points: usize,
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, Failure> {
    args.solver.validate()?;
    let sidecar_path = match &args.out {
        Some(path) => {
            let side = path.with_extension("json");
            if side == *path {
                return Err(Failure::Usage(format!(
                    "--out {} collides with its JSON sidecar; use a different extension (e.g. .csv)",
                    path.display()
                )));
            }
            Some(side)
        }
        None => None,
    };

    let mut cfg = if args.full_scale {
        SweepConfig::new(args.s, 0.5, 50.0, 1000, 1 << 14)
    } else {
        SweepConfig::new(args.s, args.omega_min, args.omega_max, args.steps, args.n)
    };
    cfg.solver = args.solver.to_config(1e-8);
    cfg.cold_start = args.cold_start || args.parallel;
    cfg.parallel = args.parallel;

    let (sweep, classification) = run_sweep(&cfg).map_err(|e| match e {
        Error::InvalidSweepRange
        | Error::InvalidOrder(_)
        | Error::InvalidFrequency(_)
        | Error::InvalidGridSize(_) => usage(e),
        other => compute(other),
    })?;

    let config = run_config("sweep", args);
    let table = sweep_csv(&config, &sweep);
    let sidecar = to_pretty_json(&SweepSidecar {
        config,
        s: sweep.s,
        classification,
        omega_c: sweep.omega_c,
        delta_omega: sweep.delta_omega,
        points: sweep.omegas.len(),
        converged_points: sweep.convergence_flags.iter().filter(|&&c| c).count(),
    })?;
    emit(&args.out, &table)?;
    match sidecar_path {
        Some(path) => emit(&Some(path), &sidecar)?,
        None => eprint!("{sidecar}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct StokesDocument {
    config: Value,
    s: f64,
    a: f64,
    gamma: f64,
    omega: f64,
    profile: Vec<f64>,
}

fn cmd_stokes(args: &StokesArgs) -> Result<u8, Failure> {
    if !(args.a.is_finite() && args.a > 0.0) {
        return Err(Failure::Usage(format!(
            "--a must be a positive amplitude, got {}",
            args.a
        )));
    }
    if args.a > 0.2 {
        eprintln!(
            "warning: a = {} is outside the asymptotic regime (a <= 0.2); the expansion error grows like a^4",
            args.a
        );
    }
    let grid = make_grid(args.n).map_err(usage)?;
    let (wave, omega) = stokes_wave(&grid, args.a, args.s).map_err(usage)?;
    let config = run_config("stokes", args);
    let body = match args.output.format {
        Format::Json => to_pretty_json(&StokesDocument {
            config,
            s: args.s,
            a: args.a,
            gamma: gamma(args.s),
            omega,
            profile: wave.values().to_vec(),
        })?,
        Format::Csv => profile_csv(&config, grid.nodes(), wave.values()),
    };
    emit(&args.output.out, &body)?;
    Ok(0)
}
