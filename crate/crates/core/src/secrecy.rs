//! Secrecy metrics of the relayed link: the SOP lower bound and its two
//! high-SNR asymptotics, the thermally-uniform (Rayleigh) special case, the
//! exact PNZ and its two asymptotics.

use serde::{Deserialize, Serialize};

use crate::channels::AlphaMuParams;
use crate::e2e::{
    clamp_unit, egg_arguments, egg_exp_block, egg_gg_block, eval_biv_term, joint_row, LinkPair,
    RelayConfig, TermDiagnostics,
};
use crate::error::{Error, Result};
use crate::mellin::{
    choose_contour_with, eval_fox_h_detailed, exp_integral_e1, exp_integral_e_nu, gamma_real,
    BivariateFoxHSpec, FoxHSpec, GammaTerm,
};
use crate::EvalOptions;

/// Base of the secrecy-rate exponent defining the threshold Θ = base^{R_s}.
///
/// The source analyses define the outage event through a log₂ capacity gap
/// yet set Θ = e^{R_s}; the natural base reproduces their numbers and is
/// the default, with the binary base available for consistency studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdBase {
    #[default]
    Natural,
    Binary,
}

/// Target secrecy rate and derived threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyConfig {
    pub rate_rs: f64,
    #[serde(default)]
    pub base: ThresholdBase,
}

impl SecrecyConfig {
    pub fn new(rate_rs: f64, base: ThresholdBase) -> Result<Self> {
        if !(rate_rs >= 0.0 && rate_rs.is_finite()) {
            return Err(Error::config(format!(
                "secrecy rate must be non-negative, got {rate_rs}"
            )));
        }
        Ok(Self { rate_rs, base })
    }

    /// Θ = base^{R_s} ≥ 1, with Θ = 1 exactly when R_s = 0.
    pub fn theta(&self) -> f64 {
        match self.base {
            ThresholdBase::Natural => self.rate_rs.exp(),
            ThresholdBase::Binary => 2f64.powf(self.rate_rs),
        }
    }
}

/// α-μ parameters of the eavesdropper link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveParams(pub AlphaMuParams);

impl EveParams {
    pub fn new(p: AlphaMuParams) -> Result<Self> {
        p.validate()?;
        Ok(Self(p))
    }

    pub fn params(&self) -> &AlphaMuParams {
        &self.0
    }

    pub fn with_mean_snr(&self, mean_snr: f64) -> Self {
        Self(self.0.with_mean_snr(mean_snr))
    }
}

/// χ(w) = Γ((1+hₑμₑ)/hₑ + w/hₑ) Γ(μ−1/h−w/h) / Γ(−w): the RF block of the
/// SOP/PNZ arrangement, carrying both the main and eavesdropper gammas.
fn rf_secrecy_block(rf: &AlphaMuParams, eve: &EveParams) -> Result<FoxHSpec> {
    let h = rf.h_alpha();
    let he = eve.params().h_alpha();
    let mue = eve.params().mu;
    FoxHSpec::new(
        1,
        1,
        vec![GammaTerm::new(1.0 + 1.0 / h - rf.mu, 1.0 / h)],
        vec![
            GammaTerm::new((1.0 + he * mue) / he, 1.0 / he),
            GammaTerm::new(1.0, 1.0),
        ],
    )
}

/// The two bivariate terms shared by the SOP lower bound and the exact PNZ
/// (which are complementary at Θ = 1). `rf_first` selects the printed axis
/// order: the SOP arrangement iterates the RF axis outermost, the PNZ
/// arrangement the EGG axis.
fn secrecy_bivariate_terms(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    theta: f64,
    rf_first: bool,
    opts: &EvalOptions,
) -> Result<(f64, TermDiagnostics)> {
    let rf = &links.rf;
    let egg = &links.uwoc;
    let ep = eve.params();
    let c_const = relay.fixed_gain_constant(rf)?;
    let (z_gg, z_exp) = egg_arguments(egg, c_const);
    let z_rf = ep.big_lambda() / (theta * rf.big_lambda());
    let rf_block = rf_secrecy_block(rf, eve)?;
    let lambda_e = ep.big_lambda();
    let pref_shared = theta * rf.kappa() * ep.kappa() / (lambda_e * lambda_e);
    let mut diag = TermDiagnostics::default();

    let mut sum = 0.0;
    if egg.omega < 1.0 {
        let h = if rf_first {
            let spec = BivariateFoxHSpec::new(joint_row(), rf_block.clone(), egg_gg_block(egg)?)?;
            eval_biv_term(&spec, z_rf, z_gg, opts, &mut diag, "secrecy term 1")?
        } else {
            let spec = BivariateFoxHSpec::new(joint_row(), egg_gg_block(egg)?, rf_block.clone())?;
            eval_biv_term(&spec, z_gg, z_rf, opts, &mut diag, "secrecy term 1")?
        };
        sum += pref_shared * (1.0 - egg.omega) / gamma_real(egg.a)? * h;
    }
    if egg.omega > 0.0 {
        let h = if rf_first {
            let spec = BivariateFoxHSpec::new(joint_row(), rf_block, egg_exp_block(egg)?)?;
            eval_biv_term(&spec, z_rf, z_exp, opts, &mut diag, "secrecy term 2")?
        } else {
            let spec = BivariateFoxHSpec::new(joint_row(), egg_exp_block(egg)?, rf_block)?;
            eval_biv_term(&spec, z_exp, z_rf, opts, &mut diag, "secrecy term 2")?
        };
        sum += pref_shared * egg.rf() * egg.omega * h;
    }
    Ok((sum, diag))
}

/// Tight lower bound of the secrecy outage probability.
pub fn sop_lower_bound(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    opts: &EvalOptions,
) -> Result<f64> {
    sop_lower_bound_detailed(links, eve, relay, sc, opts).map(|(v, _)| v)
}

pub fn sop_lower_bound_detailed(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    opts: &EvalOptions,
) -> Result<(f64, TermDiagnostics)> {
    let (sum, diag) = secrecy_bivariate_terms(links, eve, relay, sc.theta(), true, opts)?;
    let slack = 10.0 * opts.rel_tol_bivariate * (1.0 + sum.abs());
    Ok((clamp_unit(1.0 - sum, slack, "SOP lower bound")?, diag))
}

/// Exact probability of non-zero secrecy capacity.
pub fn pnz_exact(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    opts: &EvalOptions,
) -> Result<f64> {
    pnz_exact_detailed(links, eve, relay, opts).map(|(v, _)| v)
}

pub fn pnz_exact_detailed(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    opts: &EvalOptions,
) -> Result<(f64, TermDiagnostics)> {
    let (sum, diag) = secrecy_bivariate_terms(links, eve, relay, 1.0, false, opts)?;
    let slack = 10.0 * opts.rel_tol_bivariate * (1.0 + sum.abs());
    Ok((clamp_unit(sum, slack, "PNZ")?, diag))
}

/// The two univariate H-terms of the γ̄₁ → ∞ asymptote. Returns their
/// prefactored sum (so SOP_a = 1 − sum, PNZ_a = sum at Θ = 1).
fn asym_main_terms(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    theta: f64,
    opts: &EvalOptions,
) -> Result<f64> {
    let rf = &links.rf;
    let egg = &links.uwoc;
    let ep = eve.params();
    let h = rf.h_alpha();
    let he = ep.h_alpha();
    let c_const = relay.fixed_gain_constant(rf)?;
    let r = egg.rf();
    let scale = theta * rf.big_lambda() / ep.big_lambda();
    let norm = gamma_real(rf.mu)? * gamma_real(ep.mu)?;

    let mut sum = 0.0;
    if egg.omega < 1.0 {
        // H^{1,3}_{3,2}[b^r Λₑ μ_r/(C Θ Λ) | (1,1),(1−a, r/c),(1−μ, 1/h);
        //                                     (μₑ, 1/hₑ), (0,1)]
        let spec = FoxHSpec::new(
            1,
            3,
            vec![
                GammaTerm::new(1.0, 1.0),
                GammaTerm::new(1.0 - egg.a, r / egg.c),
                GammaTerm::new(1.0 - rf.mu, 1.0 / h),
            ],
            vec![
                GammaTerm::new(ep.mu, 1.0 / he),
                GammaTerm::new(0.0, 1.0),
            ],
        )?;
        let z = egg.b.powf(r) * egg.mu_r / (c_const * scale);
        let contour = choose_contour_with(&spec, z, opts.rel_tol_univariate, opts.max_nodes)?;
        let e = eval_fox_h_detailed(&spec, z, &contour)?;
        sum += (1.0 - egg.omega) / (norm * gamma_real(egg.a)?) * e.value;
    }
    if egg.omega > 0.0 {
        // H^{1,2}_{2,1}[λ^r Λₑ μ_r/(C Θ Λ) | (1, r),(1−μ, 1/h); (μₑ, 1/hₑ)]
        let spec = FoxHSpec::new(
            1,
            2,
            vec![
                GammaTerm::new(1.0, r),
                GammaTerm::new(1.0 - rf.mu, 1.0 / h),
            ],
            vec![GammaTerm::new(ep.mu, 1.0 / he)],
        )?;
        let z = egg.lambda.powf(r) * egg.mu_r / (c_const * scale);
        let contour = choose_contour_with(&spec, z, opts.rel_tol_univariate, opts.max_nodes)?;
        let e = eval_fox_h_detailed(&spec, z, &contour)?;
        sum += r * egg.omega / norm * e.value;
    }
    Ok(sum)
}

/// The two univariate H-terms of the γ̄ₑ → ∞ asymptote (prefactored sum).
fn asym_eve_terms(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    theta: f64,
    opts: &EvalOptions,
) -> Result<f64> {
    let rf = &links.rf;
    let egg = &links.uwoc;
    let ep = eve.params();
    let h = rf.h_alpha();
    let he = ep.h_alpha();
    let c_const = relay.fixed_gain_constant(rf)?;
    let r = egg.rf();
    let heme = he * ep.mu;
    let norm = gamma_real(rf.mu)? * gamma_real(ep.mu)?;
    // Shared residue prefactor of the closest-pole expansion.
    let shared = he * gamma_real(rf.mu + heme / h)?
        * (ep.big_lambda() / (theta * rf.big_lambda())).powf(heme)
        / gamma_real(heme + 1.0)?;

    let mut sum = 0.0;
    if egg.omega < 1.0 {
        // H^{1,2}_{2,1}[b^r μ_r/C | (1,1),(1−a, r/c); (hₑμₑ, 1)]
        let spec = FoxHSpec::new(
            1,
            2,
            vec![
                GammaTerm::new(1.0, 1.0),
                GammaTerm::new(1.0 - egg.a, r / egg.c),
            ],
            vec![GammaTerm::new(heme, 1.0)],
        )?;
        let z = egg.b.powf(r) * egg.mu_r / c_const;
        let contour = choose_contour_with(&spec, z, opts.rel_tol_univariate, opts.max_nodes)?;
        let e = eval_fox_h_detailed(&spec, z, &contour)?;
        sum += (1.0 - egg.omega) * shared / (norm * gamma_real(egg.a)?) * e.value;
    }
    if egg.omega > 0.0 {
        // H^{1,2}_{2,1}[λ^r μ_r/C | (0,1),(1, r); (hₑμₑ, 1)]
        let spec = FoxHSpec::new(
            1,
            2,
            vec![GammaTerm::new(0.0, 1.0), GammaTerm::new(1.0, r)],
            vec![GammaTerm::new(heme, 1.0)],
        )?;
        let z = egg.lambda.powf(r) * egg.mu_r / c_const;
        let contour = choose_contour_with(&spec, z, opts.rel_tol_univariate, opts.max_nodes)?;
        let e = eval_fox_h_detailed(&spec, z, &contour)?;
        sum += r * egg.omega * shared / norm * e.value;
    }
    Ok(sum)
}

/// SOP asymptote for γ̄₁ → ∞ (clamped to [0, 1]; the expression is only
/// meaningful in its high-SNR regime).
pub fn sop_asymptotic_high_main(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    opts: &EvalOptions,
) -> Result<f64> {
    let sum = asym_main_terms(links, eve, relay, sc.theta(), opts)?;
    Ok((1.0 - sum).clamp(0.0, 1.0))
}

/// SOP asymptote for γ̄ₑ → ∞ (clamped to [0, 1]).
pub fn sop_asymptotic_high_eve(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    opts: &EvalOptions,
) -> Result<f64> {
    let sum = asym_eve_terms(links, eve, relay, sc.theta(), opts)?;
    Ok((1.0 - sum).clamp(0.0, 1.0))
}

/// PNZ asymptote for γ̄₁ → ∞.
pub fn pnz_asymptotic_high_main(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    opts: &EvalOptions,
) -> Result<f64> {
    Ok(asym_main_terms(links, eve, relay, 1.0, opts)?.clamp(0.0, 1.0))
}

/// PNZ asymptote for γ̄ₑ → ∞.
pub fn pnz_asymptotic_high_eve(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    opts: &EvalOptions,
) -> Result<f64> {
    Ok(asym_eve_terms(links, eve, relay, 1.0, opts)?.clamp(0.0, 1.0))
}

/// Elementary-function SOP asymptote for Rayleigh RF links and a thermally
/// uniform UWOC channel.
///
/// Valid when both RF links are Rayleigh (α = 2, μ = 1, i.e. exponential
/// SNR), the generalized-Gamma exponent is c = 1 and detection is
/// heterodyne (r = 1). Under that reduction κ = Λ on both RF links and the
/// γ̄₁ → ∞ asymptote collapses to
///
/// ```text
/// (1−ω)·[1 − a e^{x₁} E_{a+1}(x₁)] + ω x₂ e^{x₂} E₁(x₂)
/// ```
///
/// with x₁ = CΘΛ/(bΛₑμ_r) and x₂ = CΘΛ/(λΛₑμ_r).
pub fn sop_rayleigh_special(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
) -> Result<f64> {
    let rf = &links.rf;
    let egg = &links.uwoc;
    let ep = eve.params();
    let close = |x: f64, y: f64| (x - y).abs() < 1e-12;
    if !(close(rf.alpha, 2.0) && close(rf.mu, 1.0) && close(ep.alpha, 2.0) && close(ep.mu, 1.0)) {
        return Err(Error::domain(
            "thermally-uniform special case requires Rayleigh RF links (alpha = 2, mu = 1) \
             on both the main and eavesdropper channels"
                .to_string(),
        ));
    }
    if !close(egg.c, 1.0) || egg.r != 1 {
        return Err(Error::domain(
            "thermally-uniform special case requires c = 1 and heterodyne detection (r = 1)"
                .to_string(),
        ));
    }
    let theta = sc.theta();
    let c_const = relay.fixed_gain_constant(rf)?;
    let base = c_const * theta * rf.big_lambda() / (ep.big_lambda() * egg.mu_r);
    let x1 = base / egg.b;
    let x2 = base / egg.lambda;
    let gg = if egg.omega < 1.0 {
        (1.0 - egg.omega) * (1.0 - egg.a * x1.exp() * exp_integral_e_nu(egg.a + 1.0, x1)?)
    } else {
        0.0
    };
    let ex = if egg.omega > 0.0 {
        egg.omega * x2 * x2.exp() * exp_integral_e1(x2)?
    } else {
        0.0
    };
    Ok((gg + ex).clamp(0.0, 1.0))
}

/// All six analytic metrics at one operating point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SecrecyMetrics {
    pub sop_lower: f64,
    pub sop_asym_main: f64,
    pub sop_asym_eve: f64,
    pub pnz: f64,
    pub pnz_asym_main: f64,
    pub pnz_asym_eve: f64,
}

pub fn metrics(
    links: &LinkPair,
    eve: &EveParams,
    relay: &RelayConfig,
    sc: &SecrecyConfig,
    opts: &EvalOptions,
) -> Result<(SecrecyMetrics, TermDiagnostics)> {
    let mut diag = TermDiagnostics::default();
    let (sop_lower, d1) = sop_lower_bound_detailed(links, eve, relay, sc, opts)?;
    let (pnz, d2) = pnz_exact_detailed(links, eve, relay, opts)?;
    diag.absorb(d1.nodes, d1.max_abs_err, d1.max_imag_residual);
    diag.absorb(d2.nodes, d2.max_abs_err, d2.max_imag_residual);
    Ok((
        SecrecyMetrics {
            sop_lower,
            sop_asym_main: sop_asymptotic_high_main(links, eve, relay, sc, opts)?,
            sop_asym_eve: sop_asymptotic_high_eve(links, eve, relay, sc, opts)?,
            pnz,
            pnz_asym_main: pnz_asymptotic_high_main(links, eve, relay, opts)?,
            pnz_asym_eve: pnz_asymptotic_high_eve(links, eve, relay, opts)?,
        },
        diag,
    ))
}
