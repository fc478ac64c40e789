//! Secrecy performance of a two-hop mixed RF / underwater-wireless-optical
//! (UWOC) link with a fixed-gain amplify-and-forward relay.
//!
//! The crate provides:
//!
//! * [`mellin`] — a numerical Fox H-function engine (univariate and
//!   bivariate Mellin–Barnes contour quadrature) plus the scalar special
//!   functions the closed forms need (complex log-gamma, incomplete gamma,
//!   exponential integrals).
//! * [`channels`] — the α-μ RF fading model and the mixture
//!   exponential–generalized-Gamma (EGG) underwater optical turbulence
//!   model: densities, distribution functions and seeded samplers.
//! * [`e2e`] — end-to-end SNR statistics of the relayed link: the SNR
//!   combining rule, the fixed-gain constant, and closed-form CDF/PDF.
//! * [`secrecy`] — secrecy outage probability (lower bound and two
//!   asymptotics), probability of non-zero secrecy capacity (exact and two
//!   asymptotics), and the Rayleigh/thermally-uniform special case.
//! * [`montecarlo`] — an independent, reproducible Monte Carlo oracle.
//! * [`optimizer`] — minimal main-link SNR achieving a target SOP/PNZ.
//! * [`scenario`] / [`sweep`] — JSON scenario files, parameter sweeps and
//!   CSV output backing the command-line front end.

pub mod channels;
pub mod e2e;
pub mod error;
pub mod mellin;
pub mod montecarlo;
pub mod optimizer;
pub mod scenario;
pub mod secrecy;
pub mod selftest;
pub mod sweep;

pub use error::{Error, Result};

/// Tolerances and budgets threaded through the analytic evaluators.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    /// Relative tolerance for univariate contour integrals.
    pub rel_tol_univariate: f64,
    /// Relative tolerance for bivariate (nested) contour integrals.
    pub rel_tol_bivariate: f64,
    /// Node budget per contour axis.
    pub max_nodes: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            rel_tol_univariate: 1e-9,
            rel_tol_bivariate: 1e-7,
            max_nodes: 200_000,
        }
    }
}

impl EvalOptions {
    /// Uniform tolerance override (used by the CLI `--tol` flag).
    pub fn with_rel_tol(tol: f64) -> Self {
        Self {
            rel_tol_univariate: tol.min(1e-9),
            rel_tol_bivariate: tol,
            ..Self::default()
        }
    }
}

/// Convert a dB value to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear value to dB.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
