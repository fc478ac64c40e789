//! Minimal main-link average SNR (transmit-power proxy) achieving a target
//! secrecy metric, plus the saturation-floor diagnostic.
//!
//! The metric is monotone along the γ̄₁ axis, so the search is a bisection:
//! the cheap univariate asymptote brackets the crossing first, then the
//! exact (bivariate) expression refines it to the requested dB tolerance.
//! "Power" is expressed as γ̄₁ in dB; mapping to watts is left to the
//! caller (linear proportionality between P₁ and γ̄₁ assumed).

use serde::{Deserialize, Serialize};

use crate::db_to_linear;
use crate::e2e::{LinkPair, RelayConfig};
use crate::error::{Error, Result};
use crate::secrecy::{
    pnz_asymptotic_high_main, pnz_exact, sop_asymptotic_high_main, sop_lower_bound, EveParams,
    SecrecyConfig,
};
use crate::EvalOptions;

/// Metric the power search targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetMetric {
    /// Secrecy outage probability (lower bound); target is an upper bound.
    Sop,
    /// Probability of non-zero secrecy capacity; target is a lower bound.
    Pnz,
}

/// Search configuration for [`min_power_for_target`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTarget {
    pub metric: TargetMetric,
    pub target: f64,
    pub search_lo_db: f64,
    pub search_hi_db: f64,
    pub tol_db: f64,
}

impl PowerTarget {
    pub fn validate(&self) -> Result<()> {
        if !(self.target > 0.0 && self.target < 1.0) {
            return Err(Error::config(format!(
                "target must lie in (0,1), got {}",
                self.target
            )));
        }
        if !(self.search_lo_db < self.search_hi_db) {
            return Err(Error::config("search_lo_db must be below search_hi_db"));
        }
        if !(self.tol_db > 0.0) {
            return Err(Error::config("tol_db must be positive"));
        }
        Ok(())
    }
}

fn exact_metric(
    metric: TargetMetric,
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    opts: &EvalOptions,
    g1_db: f64,
) -> Result<f64> {
    let links = LinkPair {
        rf: links.rf.with_mean_snr(db_to_linear(g1_db)),
        uwoc: links.uwoc,
    };
    match metric {
        TargetMetric::Sop => sop_lower_bound(&links, eve, relay, sc, opts),
        TargetMetric::Pnz => pnz_exact(&links, eve, relay, opts),
    }
}

fn asym_metric(
    metric: TargetMetric,
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    opts: &EvalOptions,
    g1_db: f64,
) -> Result<f64> {
    let links = LinkPair {
        rf: links.rf.with_mean_snr(db_to_linear(g1_db)),
        uwoc: links.uwoc,
    };
    match metric {
        TargetMetric::Sop => sop_asymptotic_high_main(&links, eve, relay, sc, opts),
        TargetMetric::Pnz => pnz_asymptotic_high_main(&links, eve, relay, opts),
    }
}

fn satisfied(metric: TargetMetric, value: f64, target: f64) -> bool {
    match metric {
        TargetMetric::Sop => value <= target,
        TargetMetric::Pnz => value >= target,
    }
}

/// Smallest γ̄₁ (dB, within `tol_db`) meeting the target.
///
/// The returned point satisfies the target under the exact expression and
/// the point one tolerance below it does not. Raises
/// [`Error::Infeasible`] when the saturation floor at `search_hi_db`
/// violates the target, or when the target is already met at
/// `search_lo_db` (no bracket).
pub fn min_power_for_target(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    t: &PowerTarget,
    opts: &EvalOptions,
) -> Result<f64> {
    t.validate()?;
    let exact =
        |g: f64| -> Result<f64> { exact_metric(t.metric, links, eve, relay, sc, opts, g) };
    let asym = |g: f64| -> Result<f64> { asym_metric(t.metric, links, eve, relay, sc, opts, g) };

    let lo_v = exact(t.search_lo_db)?;
    let hi_v = exact(t.search_hi_db)?;
    if !satisfied(t.metric, hi_v, t.target) {
        return Err(Error::Infeasible {
            reason: format!(
                "metric saturates at {hi_v:.6} at the top of the search range; \
                 target {} is below the saturation floor",
                t.target
            ),
        });
    }
    if satisfied(t.metric, lo_v, t.target) {
        return Err(Error::Infeasible {
            reason: format!(
                "target {} already met at search_lo ({lo_v:.6}); endpoints do not bracket",
                t.target
            ),
        });
    }

    // Coarse bracket with the asymptotic expression (cheap univariate
    // contour integrals), then exact refinement.
    let mut lo = t.search_lo_db;
    let mut hi = t.search_hi_db;
    let coarse_width = (4.0 * t.tol_db).max(2.0);
    let asym_brackets = satisfied(t.metric, asym(hi)?, t.target)
        && !satisfied(t.metric, asym(lo)?, t.target);
    if asym_brackets {
        let (mut alo, mut ahi) = (lo, hi);
        while ahi - alo > coarse_width {
            let mid = 0.5 * (alo + ahi);
            if satisfied(t.metric, asym(mid)?, t.target) {
                ahi = mid;
            } else {
                alo = mid;
            }
        }
        // Accept the coarse bracket only if the exact metric still
        // straddles it (the asymptote is unreliable at low SNR).
        if !satisfied(t.metric, exact(alo)?, t.target)
            && satisfied(t.metric, exact(ahi)?, t.target)
        {
            lo = alo;
            hi = ahi;
        }
    }

    while hi - lo > t.tol_db {
        let mid = 0.5 * (lo + hi);
        if satisfied(t.metric, exact(mid)?, t.target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Re-evaluation guard of the bisection postcondition.
    if !satisfied(t.metric, exact(hi)?, t.target) {
        return Err(Error::Convergence {
            context: "power search result failed re-evaluation".into(),
            axis: None,
            nodes: 0,
        });
    }
    Ok(hi)
}

/// Saturation diagnostics along the γ̄₁ axis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SaturationReport {
    /// Exact metric at the top of the search range (floor estimate).
    pub floor: f64,
    /// Asymptotic expression at the same point, reported alongside.
    pub asymptotic_floor: f64,
    /// First grid point whose metric is within 5% of the floor — the
    /// saturation onset (two numbers rather than one, since "where
    /// saturation starts" has no canonical definition).
    pub onset_db: f64,
}

pub fn saturation_floor(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    metric: TargetMetric,
    search_lo_db: f64,
    search_hi_db: f64,
    opts: &EvalOptions,
) -> Result<SaturationReport> {
    if !(search_lo_db < search_hi_db) {
        return Err(Error::config("search_lo_db must be below search_hi_db"));
    }
    let floor = exact_metric(metric, links, eve, relay, sc, opts, search_hi_db)?;
    let asymptotic_floor = asym_metric(metric, links, eve, relay, sc, opts, search_hi_db)?;
    // Onset scan uses the asymptote (the saturated region is exactly where
    // it is reliable).
    let points = 41;
    let mut onset_db = search_hi_db;
    for i in 0..points {
        let g = search_lo_db + (search_hi_db - search_lo_db) * i as f64 / (points - 1) as f64;
        let v = asym_metric(metric, links, eve, relay, sc, opts, g)?;
        if (v - floor).abs() <= 0.05 * floor.abs().max(1e-300) {
            onset_db = g;
            break;
        }
    }
    Ok(SaturationReport { floor, asymptotic_floor, onset_db })
}
