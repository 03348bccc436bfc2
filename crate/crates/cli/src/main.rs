use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qdist_cli::{
    exit_code, parse_state_descriptor, parse_state_pair, parse_window, EXIT_CHECK_FAILED,
    EXIT_USAGE,
};
use qdist_core::acceptance;
use qdist_core::dist::{
    bhattacharyya_discrete, emd_oracle, kl_discrete, mean_shortcut_w1, wasserstein1_discrete,
};
use qdist_core::error::{Error, Result};
use qdist_core::experiments::{run, ExperimentSpec, ExperimentTable, OutputFormat};
use qdist_core::photon::PhotonState;

/// Distances between quantum-mechanical probability distributions.
///
/// Scan subcommands write a table (CSV or JSON) to --out or stdout. Exit
/// status: 0 on success, 1 when a tolerance or consistency check fails, 2 on
/// a usage error. QDIST_THREADS (integer >= 1) caps the worker threads.
#[derive(Parser, Debug)]
#[command(name = "qdist", version, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Particle-in-a-box W1 scans against the classical density or a fixed state m.
    Pbox(PboxArgs),
    /// Oscillator W1, KL and Bhattacharyya from the ground state, with fits.
    Osc(OscArgs),
    /// Photon-number distance table for state pairs.
    Photon(PhotonArgs),
    /// Blackbody W1 over temperature pairs in both representations.
    Blackbody(BlackbodyArgs),
    /// One distance between two photon states, printed to stdout.
    Dist(DistArgs),
    /// Runs every acceptance criterion; exits 0 only if all pass.
    Selftest,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the run's tolerance on |numeric - analytic|.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BoxMode {
    /// W1(F_cl, G_n), compared with 1/(n pi^2).
    Classical,
    /// W1(G_m, G_n) for the state given by --m.
    Pair,
}

#[derive(Args, Debug)]
struct PboxArgs {
    #[arg(long, value_enum, default_value_t = BoxMode::Classical)]
    mode: BoxMode,
    /// Reference quantum number in pair mode.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 1)]
    n_min: u64,
    #[arg(long, default_value_t = 20)]
    n_max: u64,
    #[arg(long, default_value_t = 1)]
    n_step: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OscArgs {
    #[arg(long, default_value_t = 1)]
    n_min: u64,
    #[arg(long, default_value_t = 400)]
    n_max: u64,
    #[arg(long, default_value_t = 1)]
    n_step: u64,
    /// Window lo:hi of the power-law fit to W1 [default: 50:400].
    #[arg(long, value_parser = window)]
    fit_window: Option<(u64, u64)>,
    /// Window lo:hi of the logarithmic KL and Bhattacharyya fits [default: 10:200].
    #[arg(long, value_parser = window)]
    log_fit_window: Option<(u64, u64)>,
    /// Report the fits without enforcing the exponent and residual thresholds.
    #[arg(long)]
    no_check_fits: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct PhotonArgs {
    /// State pair A/B, repeatable, e.g. --pair vacuum/thermal:2. Defaults to
    /// the vacuum against each family plus two coherent and two Fock pairs.
    #[arg(long = "pair", value_parser = state_pair)]
    pairs: Vec<(PhotonState, PhotonState)>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct BlackbodyArgs {
    /// Temperatures in K, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "100,200,300,500")]
    temperatures: Vec<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Measure {
    /// Area between the CDFs.
    W1,
    /// D_KL(a || b); prints inf when b misses mass of a.
    Kl,
    /// Bhattacharyya distance.
    Bhatt,
    /// |mean(a) - mean(b)|, refused unless one CDF dominates.
    W1Shortcut,
    /// W1 by the monotone transport coupling.
    Emd,
}

#[derive(Args, Debug)]
struct DistArgs {
    /// First state: vacuum | fock:j | coherent:mean | squeezed:r | thermal:nbar | glauber_lachs:mean,nbar
    #[arg(long, value_parser = state)]
    a: PhotonState,
    /// Second state, same grammar as --a.
    #[arg(long, value_parser = state)]
    b: PhotonState,
    #[arg(long, value_enum, default_value_t = Measure::W1)]
    measure: Measure,
}

fn state(s: &str) -> std::result::Result<PhotonState, String> {
    parse_state_descriptor(s).map_err(|e| e.to_string())
}

fn state_pair(s: &str) -> std::result::Result<(PhotonState, PhotonState), String> {
    parse_state_pair(s).map_err(|e| e.to_string())
}

fn window(s: &str) -> std::result::Result<(u64, u64), String> {
    parse_window(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("qdist: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qdist: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn init_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("QDIST_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("QDIST_THREADS must be an integer >= 1, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Pbox(a) => {
            let spec = match (a.mode, a.m) {
                (BoxMode::Classical, None) => ExperimentSpec::pbox_classical(a.n_max),
                (BoxMode::Classical, Some(_)) => {
                    return Err(Error::InvalidSpec("--m only applies to --mode pair".into()))
                }
                (BoxMode::Pair, Some(m)) => ExperimentSpec::pbox_pair(m, a.n_max),
                (BoxMode::Pair, None) => {
                    return Err(Error::InvalidSpec("--mode pair needs --m".into()))
                }
            };
            scan(spec.with_n_range(a.n_min, a.n_max, a.n_step), &a.output)
        }
        Command::Osc(a) => {
            let mut spec = ExperimentSpec::osc(a.n_max)
                .with_n_range(a.n_min, a.n_max, a.n_step)
                .with_check_fits(!a.no_check_fits);
            spec.fit_window = a.fit_window;
            spec.log_fit_window = a.log_fit_window;
            scan(spec, &a.output)
        }
        Command::Photon(a) => {
            let spec = if a.pairs.is_empty() {
                ExperimentSpec::photon_default()
            } else {
                ExperimentSpec::photon(a.pairs)
            };
            scan(spec, &a.output)
        }
        Command::Blackbody(a) => scan(ExperimentSpec::blackbody(a.temperatures), &a.output),
        Command::Dist(a) => {
            let v = distance(&a.a, &a.b, a.measure)?;
            println!("{v}");
            Ok(0)
        }
        Command::Selftest => {
            let mut reports = Vec::new();
            let mut out = std::io::stdout().lock();
            for id in acceptance::criterion_ids() {
                if let Some(r) = acceptance::run_criterion(id) {
                    writeln!(out, "{r}")?;
                    out.flush()?;
                    reports.push(r);
                }
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            writeln!(out, "{passed}/{} criteria passed", reports.len())?;
            Ok(if acceptance::all_passed(&reports) { 0 } else { EXIT_CHECK_FAILED })
        }
    }
}

fn scan(mut spec: ExperimentSpec, output: &OutputArgs) -> Result<u8> {
    spec.tolerance = output.tolerance;
    let table = run(&spec)?;
    emit(&table, output)?;
    Ok(0)
}

fn emit(table: &ExperimentTable, output: &OutputArgs) -> Result<()> {
    let format = match output.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    match &output.out {
        Some(path) => table.write(path, format),
        None => {
            std::io::stdout().write_all(table.render(format)?.as_bytes())?;
            Ok(())
        }
    }
}

fn distance(a: &PhotonState, b: &PhotonState, measure: Measure) -> Result<f64> {
    let len = a.pmf()?.len().max(b.pmf()?.len());
    let p = a.pmf_min_len(len)?;
    let q = b.pmf_min_len(len)?;
    Ok(match measure {
        Measure::W1 => wasserstein1_discrete(&p, &q),
        Measure::Kl => kl_discrete(&p, &q)?.value(),
        Measure::Bhatt => bhattacharyya_discrete(&p, &q).value(),
        Measure::W1Shortcut => mean_shortcut_w1(&p, &q)?,
        Measure::Emd => emd_oracle(&p, &q),
    })
}
