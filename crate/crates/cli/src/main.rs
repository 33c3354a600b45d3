//! `starprod`: compute symbols, tomograms and kernels, and run verification suites.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use starprod_core::io::Format;
use starprod_core::Axis;

#[derive(Parser, Debug)]
#[command(name = "starprod", version, about = "Star-product quantization over a truncated Fock space")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Fock cutoff (default 32; verify suites keep their own unless set).
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Tolerance for accuracy checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Turn accuracy warnings into exit code 3.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Output format; defaults to the output file extension, then csv.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wigner function of a state on a phase-space grid.
    Wigner {
        /// fock:m, coherent:re,im, or a JSON state file.
        #[arg(long)]
        state: String,
        #[arg(long, default_value = "-4:4:129", allow_hyphen_values = true)]
        q: Axis,
        #[arg(long, default_value = "-4:4:129", allow_hyphen_values = true)]
        p: Axis,
    },
    /// Tomograms of a state.
    #[command(subcommand)]
    Tomogram(TomogramCmd),
    /// Star-product kernels: closed form next to the trace oracle.
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Maps between tomographic representations.
    #[command(subcommand)]
    Map(MapCmd),
    /// Commutative sector: Radon transform and its inverse.
    #[command(subcommand)]
    Classical(ClassicalCmd),
    /// Quantize a symbol file back to an operator matrix.
    Quantize {
        #[arg(long)]
        input: PathBuf,
        /// Photon-number scheme parameter, used for photon labels.
        #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
        s: f64,
    },
    /// Run a verification suite and print its report.
    Verify {
        suite: String,
        /// Kernel family for the associativity suite.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Symplectic frames: one frame `(mu, nu)` over the `X` axis, or a polar
/// grid `radial:radius:angles` with `X` as the scaled coordinate.
#[derive(Args, Debug, Clone)]
pub struct Frames {
    #[arg(long = "X", default_value = "-6:6:241", allow_hyphen_values = true)]
    pub x: Axis,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub nu: f64,
    #[arg(long)]
    pub polar: Option<String>,
}

#[derive(Subcommand, Debug)]
enum TomogramCmd {
    Symplectic {
        #[arg(long)]
        state: String,
        #[command(flatten)]
        frames: Frames,
    },
    Optical {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long = "X", default_value = "-6:6:241", allow_hyphen_values = true)]
        x: Axis,
    },
    Photon {
        #[arg(long)]
        state: String,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
}

#[derive(Subcommand, Debug)]
enum KernelCmd {
    /// Labels are `q,p`.
    Wigner {
        #[arg(long, allow_hyphen_values = true)]
        x1: String,
        #[arg(long, allow_hyphen_values = true)]
        x2: String,
        #[arg(long, allow_hyphen_values = true)]
        x3: String,
    },
    /// Labels are `X,mu,nu`; prints the smooth factors on the constraint.
    Symplectic {
        #[arg(long, allow_hyphen_values = true)]
        x1: String,
        #[arg(long, allow_hyphen_values = true)]
        x2: String,
        #[arg(long, allow_hyphen_values = true)]
        x3: String,
    },
    /// Labels are `n,re,im`.
    Photon {
        #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        x1: String,
        #[arg(long, allow_hyphen_values = true)]
        x2: String,
        #[arg(long, allow_hyphen_values = true)]
        x3: String,
    },
}

#[derive(Subcommand, Debug)]
enum MapCmd {
    OpticalToPhoton {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
    SymplecticToPhoton {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ClassicalCmd {
    /// Tomogram of a nonnegative phase-space distribution file.
    Radon {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        frames: Frames,
    },
    /// Phase-space distribution from a symplectic tomogram file.
    Inverse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "-3:3:61", allow_hyphen_values = true)]
        q: Axis,
        #[arg(long, default_value = "-3:3:61", allow_hyphen_values = true)]
        p: Axis,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::init(&cli.global).and_then(|()| dispatch(&cli)) {
        Ok(outcome) => outcome.exit_code(cli.global.strict),
        Err(starprod_core::Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> commands::Result {
    let g = &cli.global;
    match &cli.command {
        Command::Wigner { state, q, p } => commands::wigner(g, state, *q, *p),
        Command::Tomogram(TomogramCmd::Symplectic { state, frames }) => commands::tomogram_symplectic(g, state, frames),
        Command::Tomogram(TomogramCmd::Optical { state, theta, x }) => commands::tomogram_optical(g, state, *theta, *x),
        Command::Tomogram(TomogramCmd::Photon { state, alpha, nmax }) => commands::tomogram_photon(g, state, alpha, *nmax),
        Command::Kernel(KernelCmd::Wigner { x1, x2, x3 }) => commands::kernel_wigner(g, [x1, x2, x3]),
        Command::Kernel(KernelCmd::Symplectic { x1, x2, x3 }) => commands::kernel_symplectic(g, [x1, x2, x3]),
        Command::Kernel(KernelCmd::Photon { s, x1, x2, x3 }) => commands::kernel_photon(g, *s, [x1, x2, x3]),
        Command::Map(MapCmd::OpticalToPhoton { input, alpha, nmax }) => commands::map_optical(g, input, alpha, *nmax),
        Command::Map(MapCmd::SymplecticToPhoton { input, alpha, nmax }) => {
            commands::map_symplectic(g, input, alpha, *nmax)
        }
        Command::Classical(ClassicalCmd::Radon { input, frames }) => commands::classical_radon(g, input, frames),
        Command::Classical(ClassicalCmd::Inverse { input, q, p }) => commands::classical_inverse(g, input, *q, *p),
        Command::Quantize { input, s } => commands::quantize(g, input, *s),
        Command::Verify { suite, scheme, seed } => commands::verify(g, suite, scheme.as_deref(), *seed),
    }
}
