//! Star-product quantization over a truncated Fock space.
//!
//! A scheme is a pair of operator families: the dequantizer `U(x)` maps an
//! operator to its symbol `f(x) = Tr(A·U(x))` and the quantizer `Q(x)` maps it
//! back, `A = ∫ f(x) Q(x) dx`. The crate implements the Wigner–Weyl,
//! symplectic-tomographic and photon-number schemes, the transforms between
//! tomograms, a commutative classical sector and a set of verification suites.

pub mod classical;
pub mod error;
pub mod fock;
pub mod io;
pub mod maps;
pub mod photon;
pub mod quadrature;
pub mod scheme;
pub mod special;
pub mod symplectic;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{FockOperator, QuantumState};
pub use num_complex::Complex64 as C64;
pub use photon::{PhotonConfig, PhotonGrid, PhotonScheme};
pub use quadrature::Axis;
pub use scheme::{LabelPoint, Measure, Scheme, SymbolGrid};
pub use symplectic::{SymplecticGrid, SymplecticScheme};
pub use verify::{run_suite, Report, Suite, VerifyOptions};
pub use wigner::{PhaseGrid, WignerScheme};

/// Environment variable that caps the number of worker threads.
pub const THREADS_ENV: &str = "STARPROD_THREADS";

/// Size the global rayon pool from `STARPROD_THREADS` when it is set.
/// Returns the cap that was applied, if any. Calling it after the pool has
/// been initialized leaves the existing pool in place.
pub fn init_thread_pool_from_env() -> Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidConfig(format!("{THREADS_ENV}={raw} is not a positive integer")))?;
    if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
        log::warn!("thread pool already initialized; {THREADS_ENV} ignored");
    }
    Ok(Some(n))
}
