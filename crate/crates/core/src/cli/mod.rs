//! Command-line front end. Exit codes: 0 success, 1 detection or verification failure,
//! 2 usage or configuration error.

mod benchmark;
mod output;
mod sweep;
mod synth;
mod verify;

use crate::chirplet::{bandwidth_to_cutoff, classic_to_modern, ChirpletParams, ClassicAltesParams};
use crate::error::AltesError;
use clap::{Args, Parser, Subcommand};
use std::f64::consts::PI;
use std::ffi::OsString;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping worker threads; 0 or unset means one per core.
pub const THREADS_ENV: &str = "ALTES_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "altes",
    version,
    about = "Altes chirplets and the hyperbolic chirplet transform"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize one chirplet: spectrum, time series and property summary.
    Synth(synth::SynthArgs),
    /// Sweep the parameter space and extract the localization frontier.
    Sweep(sweep::SweepArgs),
    /// Run the three-chirp detection benchmark through STFT, Morlet CWT and HCT.
    Benchmark(benchmark::BenchmarkArgs),
    /// Check the numerical invariants for one parameter set and print a JSON report.
    Verify(verify::VerifyArgs),
}

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Config(AltesError),
    /// The command ran but its checks did not pass; outputs are kept.
    Check(String),
}

impl From<AltesError> for Failure {
    fn from(e: AltesError) -> Self {
        Failure::Config(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Config(e.into())
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Check(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Config(e) => write!(f, "error: {e}"),
            Failure::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

pub type CmdResult = std::result::Result<(), Failure>;

/// Chirplet parameters as given on the command line, in either parameterization.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Center frequency w0 in rad/sample.
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<f64>,
    /// Upper -K_c cutoff w_c in rad/sample.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "bandwidth")]
    omega_c: Option<f64>,
    /// -K_c bandwidth B, used instead of --omega-c.
    #[arg(long, allow_negative_numbers = true)]
    bandwidth: Option<f64>,
    /// Chirp rate lambda (positive, not 1).
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Cutoff level in dB, 20 log10 K_c.
    #[arg(long, default_value_t = -40.0, allow_negative_numbers = true)]
    kc_db: f64,
    /// Read --omega0, --omega-c and --bandwidth as multiples of pi.
    #[arg(long)]
    pi_units: bool,
    /// Take the classic {nu, k, c} parameters instead.
    #[arg(long, requires_all = ["nu", "k", "c"], conflicts_with_all = ["omega0", "omega_c", "bandwidth", "lambda"])]
    classic: bool,
    /// Classic exponent nu.
    #[arg(long, allow_negative_numbers = true, requires = "classic")]
    nu: Option<f64>,
    /// Classic intrinsic scaling ratio k (> 1).
    #[arg(long, allow_negative_numbers = true, requires = "classic")]
    k: Option<f64>,
    /// Classic chirp coefficient c.
    #[arg(long, allow_negative_numbers = true, requires = "classic")]
    c: Option<f64>,
}

impl ParamArgs {
    pub fn kc_level(&self) -> std::result::Result<f64, Failure> {
        if !(self.kc_db < 0.0 && self.kc_db.is_finite()) {
            return Err(Failure::Usage(format!("--kc-db must be negative, got {}", self.kc_db)));
        }
        Ok(10f64.powf(self.kc_db / 20.0))
    }

    /// Resolves to modern parameters, falling back to `defaults` for omitted values.
    pub fn resolve(&self, defaults: Option<(f64, f64, f64)>) -> std::result::Result<ChirpletParams, Failure> {
        let kc = self.kc_level()?;
        if self.classic {
            let (Some(nu), Some(k), Some(c)) = (self.nu, self.k, self.c) else {
                return Err(Failure::Usage("--classic needs --nu, --k and --c".into()));
            };
            return Ok(classic_to_modern(&ClassicAltesParams::new(nu, k, c)?, kc)?);
        }
        let unit = if self.pi_units { PI } else { 1.0 };
        let missing = |flag: &str| Failure::Usage(format!("missing required flag {flag}"));
        let omega0 = match (self.omega0, defaults) {
            (Some(v), _) => v * unit,
            (None, Some(d)) => d.0,
            (None, None) => return Err(missing("--omega0")),
        };
        let omega_c = match (self.omega_c, self.bandwidth, defaults) {
            (Some(v), _, _) => v * unit,
            (None, Some(b), _) => bandwidth_to_cutoff(omega0, b * unit)?,
            (None, None, Some(d)) => d.1,
            (None, None, None) => return Err(missing("--omega-c or --bandwidth")),
        };
        let lambda = match (self.lambda, defaults) {
            (Some(v), _) => v,
            (None, Some(d)) => d.2,
            (None, None) => return Err(missing("--lambda")),
        };
        Ok(ChirpletParams::with_level(omega0, omega_c, lambda, kc)?)
    }
}

/// Analyzing parameters of the benchmark and the default for `verify`.
pub const REFERENCE_PARAMS: (f64, f64, f64) = (PI / 5.0, PI, 0.5);

fn configure_threads() -> std::result::Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a non-negative integer, got {raw:?}")))?;
    if n > 0 {
        // a second call in the same process (tests) finds the pool already built
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = configure_threads().and_then(|_| match &cli.command {
        Command::Synth(a) => synth::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Benchmark(a) => benchmark::run(a),
        Command::Verify(a) => verify::run(a),
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("{f}");
            f.exit_code()
        }
    }
}
