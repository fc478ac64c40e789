//! End-to-end SNR statistics of the fixed-gain AF two-hop link: the SNR
//! combining rule, the fixed-gain constant, and the closed-form CDF/PDF in
//! terms of bivariate H-functions.

use serde::{Deserialize, Serialize};

use crate::channels::{AlphaMuParams, EggParams};
use crate::error::{Error, Result};
use crate::mellin::{
    choose_bivariate_contours, choose_contour_with, eval_bivariate_fox_h_detailed, eval_fox_h,
    gamma_real, BivariateFoxHSpec, FoxHSpec, GammaTerm, JointGamma,
};
use crate::EvalOptions;

/// Fixed-gain relay configuration: either the amplifying constant C
/// directly, or the powers it derives from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RelayConfig {
    /// Use the given constant as-is.
    ExplicitC { c: f64 },
    /// C = N₁ / (N₀ P₂ E[1/(1+γ₁)]): the relay gain uses statistical CSI
    /// of the first hop, so the constant tracks the first-hop fading
    /// parameters. P₁ enters only through the mean SNR of those
    /// parameters.
    FromPowers { p1: f64, p2: f64, n0: f64, n1: f64 },
}

impl RelayConfig {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RelayConfig::ExplicitC { c } => {
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::config(format!("relay constant must be positive, got {c}")));
                }
            }
            RelayConfig::FromPowers { p1, p2, n0, n1 } => {
                for (name, v) in [("p1", p1), ("p2", p2), ("n0", n0), ("n1", n1)] {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(Error::config(format!("{name} must be positive, got {v}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Resolve the fixed-gain constant for the given first-hop fading law.
    pub fn fixed_gain_constant(&self, rf: &AlphaMuParams) -> Result<f64> {
        self.validate()?;
        match *self {
            RelayConfig::ExplicitC { c } => Ok(c),
            RelayConfig::FromPowers { p2, n0, n1, .. } => {
                let e = expected_inv_one_plus_snr(rf)?;
                Ok(n1 / (n0 * p2 * e))
            }
        }
    }
}

/// The two hops of the relayed link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkPair {
    /// Source → relay RF fading.
    pub rf: AlphaMuParams,
    /// Relay → destination UWOC turbulence.
    pub uwoc: EggParams,
}

impl LinkPair {
    pub fn new(rf: AlphaMuParams, uwoc: EggParams) -> Result<Self> {
        rf.validate()?;
        uwoc.validate()?;
        Ok(Self { rf, uwoc })
    }
}

/// Instantaneous end-to-end SNR γ₁γ₂/(γ₂ + C) of the fixed-gain relay.
pub fn gamma_eq(gamma1: f64, gamma2: f64, c: f64) -> f64 {
    if gamma1 <= 0.0 || gamma2 <= 0.0 {
        return 0.0;
    }
    gamma1 * gamma2 / (gamma2 + c)
}

/// E[1/(1+γ)] for an α-μ SNR, through the H^{2,1}_{1,2}[Λ | ...] contour
/// form encoding the statistical-CSI gain expectation.
pub fn expected_inv_one_plus_snr(rf: &AlphaMuParams) -> Result<f64> {
    rf.validate()?;
    let h = rf.h_alpha();
    let spec = FoxHSpec::new(
        2,
        1,
        vec![GammaTerm::new(0.0, 1.0)],
        vec![
            GammaTerm::new(0.0, 1.0),
            GammaTerm::new(rf.mu - 1.0 / h, 1.0 / h),
        ],
    )?;
    let z = rf.big_lambda();
    let contour = choose_contour_with(&spec, z, 1e-11, 200_000)?;
    let v = rf.kappa() * eval_fox_h(&spec, z, &contour)?;
    Ok(v.clamp(0.0, 1.0))
}

// --- bivariate kernel blocks shared with the secrecy module -----------------

/// χ(w) = Γ(w) Γ(a + r w / c): the generalized-Gamma branch block.
pub(crate) fn egg_gg_block(egg: &EggParams) -> Result<FoxHSpec> {
    FoxHSpec::new(
        2,
        0,
        vec![],
        vec![GammaTerm::new(0.0, 1.0), GammaTerm::new(egg.a, egg.rf() / egg.c)],
    )
}

/// χ(w) = Γ(1 + w) Γ(r w): the exponential branch block.
pub(crate) fn egg_exp_block(egg: &EggParams) -> Result<FoxHSpec> {
    FoxHSpec::new(
        2,
        0,
        vec![],
        vec![GammaTerm::new(1.0, 1.0), GammaTerm::new(0.0, egg.rf())],
    )
}

/// χ(w) = Γ(μ − 1/h − w/h) / Γ(−w): RF block of the CDF arrangement.
pub(crate) fn rf_cdf_block(rf: &AlphaMuParams) -> Result<FoxHSpec> {
    let h = rf.h_alpha();
    FoxHSpec::new(
        0,
        1,
        vec![GammaTerm::new(1.0 + 1.0 / h - rf.mu, 1.0 / h)],
        vec![GammaTerm::new(1.0, 1.0)],
    )
}

/// χ(w) = Γ(μ − 1/h − w/h) / Γ(−1 − w): RF block of the PDF arrangement.
pub(crate) fn rf_pdf_block(rf: &AlphaMuParams) -> Result<FoxHSpec> {
    let h = rf.h_alpha();
    FoxHSpec::new(
        0,
        1,
        vec![GammaTerm::new(1.0 + 1.0 / h - rf.mu, 1.0 / h)],
        vec![GammaTerm::new(2.0, 1.0)],
    )
}

/// The (2,1,1) joint row shared by every bivariate form in this crate:
/// Γ(−1 − w₁ − w₂).
pub(crate) fn joint_row() -> Vec<JointGamma> {
    vec![JointGamma::new(-1.0, 1.0, 1.0)]
}

/// First-axis arguments of the EGG branch pair: C b^{−r}/μ_r and
/// C λ^{−r}/μ_r.
pub(crate) fn egg_arguments(egg: &EggParams, c_const: f64) -> (f64, f64) {
    let r = egg.rf();
    (
        c_const * egg.b.powf(-r) / egg.mu_r,
        c_const * egg.lambda.powf(-r) / egg.mu_r,
    )
}

/// Diagnostics accumulated over the bivariate terms of one metric.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct TermDiagnostics {
    pub nodes: u64,
    pub max_abs_err: f64,
    pub max_imag_residual: f64,
}

impl TermDiagnostics {
    pub(crate) fn absorb(&mut self, nodes: u64, abs_err: f64, imag: f64) {
        self.nodes += nodes;
        self.max_abs_err = self.max_abs_err.max(abs_err);
        self.max_imag_residual = self.max_imag_residual.max(imag);
    }
}

pub(crate) fn eval_biv_term(
    spec: &BivariateFoxHSpec,
    z1: f64,
    z2: f64,
    opts: &EvalOptions,
    diag: &mut TermDiagnostics,
    context: &str,
) -> Result<f64> {
    let contours =
        choose_bivariate_contours(spec, z1, z2, opts.rel_tol_bivariate, opts.max_nodes)?;
    let e = eval_bivariate_fox_h_detailed(spec, z1, z2, &contours).map_err(|err| match err {
        Error::Convergence { context: c, axis, nodes } => Error::Convergence {
            context: format!("{context}: {c}"),
            axis,
            nodes,
        },
        other => other,
    })?;
    diag.absorb(e.nodes, e.abs_err, e.imag_residual);
    Ok(e.value)
}

/// Clamp a probability-like value, tolerating excursions up to `slack`
/// beyond [0, 1] as quadrature noise and rejecting anything larger.
pub(crate) fn clamp_unit(x: f64, slack: f64, context: &str) -> Result<f64> {
    if x < -slack || x > 1.0 + slack {
        return Err(Error::Convergence {
            context: format!("{context}: value {x} outside [0,1] beyond noise slack {slack}"),
            axis: None,
            nodes: 0,
        });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// CDF of the end-to-end SNR (two bivariate H-terms subtracted from 1).
pub fn cdf_gamma_eq(
    links: &LinkPair,
    relay: &RelayConfig,
    gamma: f64,
    opts: &EvalOptions,
) -> Result<f64> {
    cdf_gamma_eq_detailed(links, relay, gamma, opts).map(|(v, _)| v)
}

pub fn cdf_gamma_eq_detailed(
    links: &LinkPair,
    relay: &RelayConfig,
    gamma: f64,
    opts: &EvalOptions,
) -> Result<(f64, TermDiagnostics)> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("CDF argument must be > 0, got {gamma}")));
    }
    let rf = &links.rf;
    let egg = &links.uwoc;
    // γ_eq ≤ γ₁ pathwise, so 1 − F(γ) ≤ 1 − F₁(γ); when the first hop
    // alone pins the CDF at 1 beyond f64 resolution, skip the contour
    // machinery (whose relative targets become meaningless there).
    let first_hop_tail =
        crate::mellin::reg_gamma_upper(rf.mu, rf.mu * (gamma / rf.mean_snr).powf(rf.h_alpha()))?;
    if first_hop_tail < 1e-13 {
        return Ok((1.0, TermDiagnostics::default()));
    }
    let c_const = relay.fixed_gain_constant(rf)?;
    let (z_gg, z_exp) = egg_arguments(egg, c_const);
    let z2 = 1.0 / (gamma * rf.big_lambda());
    let kernel2 = rf_cdf_block(rf)?;
    let mut diag = TermDiagnostics::default();

    let mut sum = 0.0;
    if egg.omega < 1.0 {
        let spec = BivariateFoxHSpec::new(joint_row(), egg_gg_block(egg)?, kernel2.clone())?;
        let h = eval_biv_term(&spec, z_gg, z2, opts, &mut diag, "end-to-end CDF term 1")?;
        sum += gamma * rf.kappa() * (1.0 - egg.omega) / gamma_real(egg.a)? * h;
    }
    if egg.omega > 0.0 {
        let spec = BivariateFoxHSpec::new(joint_row(), egg_exp_block(egg)?, kernel2)?;
        let h = eval_biv_term(&spec, z_exp, z2, opts, &mut diag, "end-to-end CDF term 2")?;
        sum += gamma * rf.kappa() * egg.rf() * egg.omega * h;
    }
    let slack = 10.0 * opts.rel_tol_bivariate * (1.0 + sum.abs());
    let v = clamp_unit(1.0 - sum, slack, "end-to-end CDF")?;
    Ok((v, diag))
}

/// PDF of the end-to-end SNR (two bivariate H-terms).
pub fn pdf_gamma_eq(
    links: &LinkPair,
    relay: &RelayConfig,
    gamma: f64,
    opts: &EvalOptions,
) -> Result<f64> {
    pdf_gamma_eq_detailed(links, relay, gamma, opts).map(|(v, _)| v)
}

pub fn pdf_gamma_eq_detailed(
    links: &LinkPair,
    relay: &RelayConfig,
    gamma: f64,
    opts: &EvalOptions,
) -> Result<(f64, TermDiagnostics)> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("PDF argument must be > 0, got {gamma}")));
    }
    let rf = &links.rf;
    let egg = &links.uwoc;
    let c_const = relay.fixed_gain_constant(rf)?;
    let (z_gg, z_exp) = egg_arguments(egg, c_const);
    let z1 = 1.0 / (gamma * rf.big_lambda());
    let kernel1 = rf_pdf_block(rf)?;
    let mut diag = TermDiagnostics::default();

    let mut sum = 0.0;
    if egg.omega < 1.0 {
        let spec = BivariateFoxHSpec::new(joint_row(), kernel1.clone(), egg_gg_block(egg)?)?;
        let h = eval_biv_term(&spec, z1, z_gg, opts, &mut diag, "end-to-end PDF term 1")?;
        sum += rf.kappa() * (1.0 - egg.omega) / gamma_real(egg.a)? * h;
    }
    if egg.omega > 0.0 {
        let spec = BivariateFoxHSpec::new(joint_row(), kernel1, egg_exp_block(egg)?)?;
        let h = eval_biv_term(&spec, z1, z_exp, opts, &mut diag, "end-to-end PDF term 2")?;
        sum += rf.kappa() * egg.rf() * egg.omega * h;
    }
    // Densities are non-negative; tolerate quadrature noise around zero.
    if sum < 0.0 {
        let slack = 10.0 * opts.rel_tol_bivariate * (1.0 + sum.abs());
        if sum < -slack {
            return Err(Error::Convergence {
                context: format!("end-to-end PDF: negative density {sum}"),
                axis: None,
                nodes: diag.nodes,
            });
        }
        sum = 0.0;
    }
    Ok((sum, diag))
}
