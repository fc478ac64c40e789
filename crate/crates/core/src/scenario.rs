//! JSON scenario files: one operating point of the system (both RF links,
//! the UWOC leg, relay and secrecy configuration), an optional sweep axis
//! and an optional Monte Carlo block. SNR fields are in dB, matching how
//! link budgets are quoted; they are converted to linear scale on
//! resolution.

use serde::{Deserialize, Serialize};

use crate::channels::{resolve_preset, AlphaMuParams, ChannelPreset, DetectionOrder, EggParams};
use crate::db_to_linear;
use crate::e2e::{LinkPair, RelayConfig};
use crate::error::{Error, Result};
use crate::montecarlo::McConfig;
use crate::secrecy::{EveParams, SecrecyConfig};

/// One α-μ link entry.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RfEntry {
    pub alpha: f64,
    pub mu: f64,
    pub mean_snr_db: f64,
}

impl RfEntry {
    fn resolve(&self) -> Result<AlphaMuParams> {
        AlphaMuParams::new(self.alpha, self.mu, db_to_linear(self.mean_snr_db))
    }
}

/// Inline EGG parameters (without the SNR scale, which comes from
/// `mean_snr_db`).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EggEntry {
    pub omega: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r: DetectionOrder,
}

/// UWOC leg: either a preset label resolved against the registry, or
/// inline parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UwocSource {
    Preset { preset: String },
    Inline { params: EggEntry },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UwocEntry {
    #[serde(flatten)]
    pub source: UwocSource,
    pub mean_snr_db: f64,
}

impl UwocEntry {
    fn resolve(&self, registry: &[ChannelPreset]) -> Result<EggParams> {
        let mu_r = db_to_linear(self.mean_snr_db);
        match &self.source {
            UwocSource::Preset { preset } => resolve_preset(registry, preset)?.params(mu_r),
            UwocSource::Inline { params } => EggParams::new(
                params.omega,
                params.lambda,
                params.a,
                params.b,
                params.c,
                params.r,
                mu_r,
            ),
        }
    }
}

/// Sweep axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Main-link average SNR γ̄₁.
    Gamma1Db,
    /// Eavesdropper average SNR γ̄ₑ.
    GammaEDb,
    /// UWOC electrical SNR scale γ̄₂ (μ_r).
    Gamma2Db,
}

impl SweepVariable {
    pub fn column_name(&self) -> &'static str {
        match self {
            SweepVariable::Gamma1Db => "gamma1_db",
            SweepVariable::GammaEDb => "gamma_e_db",
            SweepVariable::Gamma2Db => "gamma2_db",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SweepAxis {
    pub variable: SweepVariable,
    pub start_db: f64,
    pub stop_db: f64,
    pub points: u32,
}

impl SweepAxis {
    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::config("sweep needs at least one point"));
        }
        if self.points > 1 && !(self.start_db < self.stop_db) {
            return Err(Error::config("sweep start_db must be below stop_db"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start_db];
        }
        (0..self.points)
            .map(|i| {
                self.start_db
                    + (self.stop_db - self.start_db) * i as f64 / (self.points - 1) as f64
            })
            .collect()
    }
}

/// A complete scenario file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub rf_main: RfEntry,
    pub rf_eve: RfEntry,
    pub uwoc: UwocEntry,
    pub relay: RelayConfig,
    pub secrecy: SecrecyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McConfig>,
}

/// A scenario with every reference resolved and validated.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub links: LinkPair,
    pub eve: EveParams,
    pub relay: RelayConfig,
    pub secrecy: SecrecyConfig,
    pub sweep: Option<SweepAxis>,
    pub mc: Option<McConfig>,
}

impl Scenario {
    /// Parse a scenario from JSON, reporting the line/column of syntax or
    /// schema errors.
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| {
            Error::config(format!(
                "scenario parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn resolve(&self, registry: &[ChannelPreset]) -> Result<ResolvedScenario> {
        let rf = self.rf_main.resolve()?;
        let eve = EveParams::new(self.rf_eve.resolve()?)?;
        let uwoc = self.uwoc.resolve(registry)?;
        self.relay.validate()?;
        SecrecyConfig::new(self.secrecy.rate_rs, self.secrecy.base)?;
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        if let Some(mc) = &self.mc {
            mc.validate()?;
        }
        Ok(ResolvedScenario {
            links: LinkPair::new(rf, uwoc)?,
            eve,
            relay: self.relay,
            secrecy: self.secrecy,
            sweep: self.sweep,
            mc: self.mc,
        })
    }
}

impl ResolvedScenario {
    /// The scenario shifted to one sweep-axis value.
    pub fn at_axis(&self, variable: SweepVariable, value_db: f64) -> ResolvedScenario {
        let mut out = self.clone();
        match variable {
            SweepVariable::Gamma1Db => {
                out.links.rf = out.links.rf.with_mean_snr(db_to_linear(value_db));
            }
            SweepVariable::GammaEDb => {
                out.eve = out.eve.with_mean_snr(db_to_linear(value_db));
            }
            SweepVariable::Gamma2Db => {
                out.links.uwoc = out.links.uwoc.with_mu_r(db_to_linear(value_db));
            }
        }
        out
    }
}
