//! Command-line front end. Exit codes: 0 success, 1 input error, 2 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use restart_rate::chain::{build_kernel, default_cap, exact_tail_exponent, simulate_tau, Start, TailEstimate};
use restart_rate::experiments::{
    default_family_range, linspace, run_family_sweep, run_phase_transition, run_rate_curve, Format,
    DEFAULT_LANDSCAPES,
};
use restart_rate::profile_gen::{generate, DEFAULT_A, DEFAULT_B, DEFAULT_C};
use restart_rate::rate::{find_p_best_with, xi_crit_with, PStarOptions, Tolerances, DEFAULT_GRID};
use restart_rate::{
    bounds, AlgorithmConfig, DiscreteLandscape, Error, Family, FamilySpec, LandscapeProfile, Mode,
    RestartSet, Result, TrapSplit,
};

#[derive(Parser)]
#[command(name = "restart-rate", version, about = "Convergence rates of restart descent algorithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Profile JSON file.
    #[arg(long, conflicts_with = "landscape")]
    profile: Option<PathBuf>,
    /// Landscape JSON file; the profile is extracted at --epsilon.
    #[arg(long)]
    landscape: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Seed of the random profile used when no file is given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_A)]
    a: usize,
    #[arg(long, default_value_t = DEFAULT_B)]
    b: usize,
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
}

#[derive(Args, Clone)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Critical exponent for one design point.
    XiCrit {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "a2")]
        mode: Mode,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A2 rate across a p-grid next to the G1 rate.
    RateCurve {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Best randomization level over A2 and G1.
    PBest {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean and variance of the A2 rate over random profiles.
    PhaseTransition {
        #[arg(long, default_value_t = DEFAULT_LANDSCAPES)]
        landscapes: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_A)]
        a: usize,
        #[arg(long, default_value_t = DEFAULT_B)]
        b: usize,
        #[arg(long, default_value_t = DEFAULT_C)]
        c: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// p_best across a parametric family.
    FamilySweep {
        #[arg(long, default_value = "exponential")]
        family: Family,
        /// Number of parameter values.
        #[arg(long, default_value_t = 32)]
        points: usize,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        /// p-grid used by the optimizer.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_A)]
        a: usize,
        #[arg(long, default_value_t = DEFAULT_B)]
        b: usize,
        #[arg(long, default_value_t = DEFAULT_C)]
        c: f64,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo survival curve of the hitting time on a landscape.
    Simulate {
        #[arg(long)]
        landscape: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value = "g1")]
        mode: Mode,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 100_000)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest N recorded; defaults to ceil(50/|log rho|).
        #[arg(long)]
        cap: Option<usize>,
        /// csv writes the survival curve, json the tail estimate.
        #[command(flatten)]
        output: Output,
    },
    /// The constants alpha*, gamma* and their product.
    BoundsConstants {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Depth profile of a landscape.
    ExtractProfile {
        #[arg(long)]
        landscape: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value = "g1")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Annealing difficulty D_f and per-minimum barriers.
    CriticalDepth {
        #[arg(long)]
        landscape: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes a random or parametric profile.
    GenProfile {
        #[arg(long, default_value = "random")]
        family: Family,
        #[arg(long, default_value_t = 1.0)]
        steepness: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_A)]
        a: usize,
        #[arg(long, default_value_t = DEFAULT_B)]
        b: usize,
        #[arg(long, default_value_t = DEFAULT_C)]
        c: f64,
        #[arg(long, default_value = "a2")]
        split: TrapSplit,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn restart_set(mode: Mode) -> Result<RestartSet> {
    match mode {
        Mode::G1 => Ok(RestartSet::G1),
        Mode::A2 => Ok(RestartSet::A2),
        Mode::General => Err(Error::Input(
            "landscape commands need --mode g1 or a2".into(),
        )),
    }
}

fn tolerances(tol: Option<f64>) -> Result<Tolerances> {
    let mut t = Tolerances::default();
    if let Some(x) = tol {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Input(format!("--tol {x} must be positive")));
        }
        t.residual = x;
        t.optimizer = x;
    }
    Ok(t)
}

fn load_profile(source: &Source, mode: Mode) -> Result<LandscapeProfile> {
    if let Some(path) = &source.profile {
        return LandscapeProfile::load(path);
    }
    if let Some(path) = &source.landscape {
        let set = match mode {
            Mode::General => RestartSet::A2,
            m => restart_set(m)?,
        };
        return DiscreteLandscape::load(path)?.extract_profile(source.epsilon, &set);
    }
    generate(&FamilySpec::random(source.seed).with_shape(source.a, source.b, source.c))
}

fn write(out: &Option<PathBuf>, text: String) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::XiCrit { source, mode, p, tol, out } => {
            let profile = load_profile(&source, mode)?;
            let p = if mode == Mode::G1 { 1.0 } else { p };
            let config = AlgorithmConfig { p, mode };
            let r = xi_crit_with(&config, &profile, &tolerances(tol)?)?;
            write(&out, json(&r)?)
        }
        Command::RateCurve { source, grid, tol, output } => {
            let profile = load_profile(&source, Mode::A2)?;
            let mut t = run_rate_curve(&profile, grid, &tolerances(tol)?)?;
            if source.profile.is_none() && source.landscape.is_none() {
                t.meta("seed", source.seed);
            }
            write(&output.out, t.render(output.format)?)
        }
        Command::PBest { source, grid, tol, out } => {
            let profile = load_profile(&source, Mode::A2)?;
            let opts = PStarOptions { grid, tol: tolerances(tol)? };
            write(&out, json(&find_p_best_with(&profile, &opts)?)?)
        }
        Command::PhaseTransition { landscapes, grid, seed, a, b, c, tol, output } => {
            let t = run_phase_transition(landscapes, grid, seed, (a, b, c), &tolerances(tol)?)?;
            write(&output.out, t.render(output.format)?)
        }
        Command::FamilySweep { family, points, from, to, grid, a, b, c, tol, output } => {
            let (lo, hi) = default_family_range(family)?;
            let params = linspace(from.unwrap_or(lo), to.unwrap_or(hi), points);
            let opts = PStarOptions { grid, tol: tolerances(tol)? };
            let t = run_family_sweep(family, &params, (a, b, c), &opts)?;
            write(&output.out, t.render(output.format)?)
        }
        Command::Simulate { landscape, epsilon, mode, p, runs, seed, cap, output } => {
            let l = DiscreteLandscape::load(landscape)?;
            let kernel = build_kernel(&l, p, &restart_set(mode)?)?;
            let exact = exact_tail_exponent(&kernel, epsilon)?;
            let cap = cap.unwrap_or_else(|| default_cap(Some(exact)));
            let curve = simulate_tau(&kernel, epsilon, Start::Restart, runs, seed, cap)?;
            match output.format {
                Format::Csv => write(&output.out, curve.to_csv()),
                Format::Json => {
                    let (mc, window) = curve.fit(None)?;
                    let est = TailEstimate {
                        exact_log_rho: exact,
                        mc_exponent: mc,
                        n_runs: runs,
                        fit_window: window,
                    };
                    write(&output.out, json(&est)?)
                }
                Format::Svg => Err(Error::Input("simulate writes csv or json".into())),
            }
        }
        Command::BoundsConstants { out } => write(&out, json(&bounds::solve_alpha_gamma()?)?),
        Command::ExtractProfile { landscape, epsilon, mode, out } => {
            let l = DiscreteLandscape::load(landscape)?;
            let profile = l.extract_profile(epsilon, &restart_set(mode)?)?;
            write(&out, profile.to_json()? + "\n")
        }
        Command::CriticalDepth { landscape, out } => {
            let l = DiscreteLandscape::load(landscape)?;
            write(&out, json(&l.critical_depth()?)?)
        }
        Command::GenProfile { family, steepness, seed, a, b, c, split, out } => {
            let spec = FamilySpec {
                family,
                steepness,
                a,
                b,
                c,
                seed,
                split,
            };
            write(&out, generate(&spec)?.to_json()? + "\n")
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
