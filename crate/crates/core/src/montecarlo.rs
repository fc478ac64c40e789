//! Reproducible Monte Carlo oracle for the analytic expressions: simulates
//! the two-hop link and the eavesdropper, estimating SOP (exact and
//! lower-bound variants), PNZ and the end-to-end CDF with standard errors.
//!
//! Trials are partitioned over ChaCha streams derived deterministically
//! from `(master_seed, stream index)`, so estimates are bit-identical for
//! a given configuration regardless of how many worker threads execute the
//! streams. The exact-SOP and lower-bound-SOP estimators share draws
//! (common random numbers), which makes the pathwise containment
//! `lower ≤ exact` testable without Monte Carlo slack.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{alpha_mu_sample, egg_sample};
use crate::e2e::{gamma_eq, LinkPair, RelayConfig};
use crate::error::{Error, Result};
use crate::secrecy::{EveParams, SecrecyConfig};

/// Trial budget and stream layout of one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub master_seed: u64,
    pub stream_count: u32,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { trials: 1_000_000, master_seed: 0x5eed, stream_count: 64 }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1_000 {
            return Err(Error::config(format!(
                "at least 1000 trials required for a reported estimate, got {}",
                self.trials
            )));
        }
        if self.stream_count == 0 {
            return Err(Error::config("stream_count must be positive"));
        }
        Ok(())
    }

    /// Trials assigned to stream `idx` (remainder spread over the first
    /// streams).
    fn stream_trials(&self, idx: u32) -> u64 {
        let base = self.trials / self.stream_count as u64;
        let rem = self.trials % self.stream_count as u64;
        base + if (idx as u64) < rem { 1 } else { 0 }
    }

    fn stream_rng(&self, idx: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(idx as u64);
        rng
    }
}

/// A Bernoulli estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl McEstimate {
    fn from_count(hits: u64, trials: u64) -> Self {
        let value = hits as f64 / trials as f64;
        Self {
            value,
            std_error: (value * (1.0 - value) / trials as f64).sqrt(),
            trials,
        }
    }
}

/// Count trials satisfying a predicate of (γ_eq, γₑ), drawing
/// (γ₁, γ₂, γₑ) per trial in that fixed order.
fn count_secrecy_events<F>(
    links: &LinkPair,
    eve: &EveParams,
    c_const: f64,
    mc: &McConfig,
    event: F,
) -> u64
where
    F: Fn(f64, f64) -> bool + Sync,
{
    (0..mc.stream_count)
        .into_par_iter()
        .map(|idx| {
            let mut rng = mc.stream_rng(idx);
            let n = mc.stream_trials(idx);
            let mut hits = 0u64;
            for _ in 0..n {
                let g1 = alpha_mu_sample(&links.rf, &mut rng);
                let g2 = egg_sample(&links.uwoc, &mut rng);
                let ge = alpha_mu_sample(eve.params(), &mut rng);
                if event(gamma_eq(g1, g2, c_const), ge) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

/// Exact-SOP estimator: fraction of trials with γ_eq ≤ Θγₑ + Θ − 1.
pub fn mc_sop_exact(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    mc: &McConfig,
) -> Result<McEstimate> {
    mc.validate()?;
    let c_const = relay.fixed_gain_constant(&links.rf)?;
    let theta = sc.theta();
    let hits = count_secrecy_events(links, eve, c_const, mc, |geq, ge| {
        geq <= theta * ge + theta - 1.0
    });
    Ok(McEstimate::from_count(hits, mc.trials))
}

/// Lower-bound-SOP estimator: fraction of trials with γ_eq ≤ Θγₑ. Shares
/// its random streams with [`mc_sop_exact`].
pub fn mc_sop_lower(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    mc: &McConfig,
) -> Result<McEstimate> {
    mc.validate()?;
    let c_const = relay.fixed_gain_constant(&links.rf)?;
    let theta = sc.theta();
    let hits = count_secrecy_events(links, eve, c_const, mc, |geq, ge| geq <= theta * ge);
    Ok(McEstimate::from_count(hits, mc.trials))
}

/// PNZ estimator: fraction of trials with γ_eq > γₑ.
pub fn mc_pnz(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    mc: &McConfig,
) -> Result<McEstimate> {
    mc.validate()?;
    let c_const = relay.fixed_gain_constant(&links.rf)?;
    let hits = count_secrecy_events(links, eve, c_const, mc, |geq, ge| geq > ge);
    Ok(McEstimate::from_count(hits, mc.trials))
}

/// Empirical end-to-end CDF at each grid point.
pub fn mc_cdf_gamma_eq(
    links: &LinkPair,
    relay: &RelayConfig,
    gamma_grid: &[f64],
    mc: &McConfig,
) -> Result<Vec<McEstimate>> {
    mc.validate()?;
    let c_const = relay.fixed_gain_constant(&links.rf)?;
    let counts: Vec<u64> = (0..mc.stream_count)
        .into_par_iter()
        .map(|idx| {
            let mut rng = mc.stream_rng(idx);
            let n = mc.stream_trials(idx);
            let mut counts = vec![0u64; gamma_grid.len()];
            for _ in 0..n {
                let g1 = alpha_mu_sample(&links.rf, &mut rng);
                let g2 = egg_sample(&links.uwoc, &mut rng);
                let geq = gamma_eq(g1, g2, c_const);
                for (k, &g) in gamma_grid.iter().enumerate() {
                    if geq <= g {
                        counts[k] += 1;
                    }
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; gamma_grid.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(counts
        .into_iter()
        .map(|hits| McEstimate::from_count(hits, mc.trials))
        .collect())
}

/// Empirical quantiles of the end-to-end SNR (used to place comparison
/// grids where the distribution actually lives).
pub fn mc_gamma_eq_quantiles(
    links: &LinkPair,
    relay: &RelayConfig,
    probs: &[f64],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<f64>> {
    let c_const = relay.fixed_gain_constant(&links.rf)?;
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    let mut draws: Vec<f64> = (0..trials)
        .map(|_| {
            let g1 = alpha_mu_sample(&links.rf, &mut rng);
            let g2 = egg_sample(&links.uwoc, &mut rng);
            gamma_eq(g1, g2, c_const)
        })
        .collect();
    draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(probs
        .iter()
        .map(|&p| {
            let i = ((draws.len() as f64 - 1.0) * p).round() as usize;
            draws[i.min(draws.len() - 1)]
        })
        .collect())
}
