//! Built-in invariant suite behind the `selftest` CLI subcommand: quick
//! reductions of the H-function engine, channel-law consistency checks and
//! one Monte Carlo smoke comparison. Designed to finish in well under a
//! minute.

use crate::channels::{
    alpha_mu_cdf, builtin_presets, egg_ccdf, reference, AlphaMuParams, EggParams,
};
use crate::db_to_linear;
use crate::e2e::{LinkPair, RelayConfig};
use crate::error::Result;
use crate::mellin::{
    choose_bivariate_contours, choose_contour, eval_bivariate_fox_h, eval_fox_h,
    BivariateFoxHSpec, FoxHSpec, GammaTerm,
};
use crate::montecarlo::{mc_sop_lower, McConfig};
use crate::secrecy::{pnz_exact, sop_lower_bound, EveParams, SecrecyConfig, ThresholdBase};
use crate::EvalOptions;

/// Tolerances of the individual checks; the defaults match the library's
/// accuracy contracts.
#[derive(Debug, Clone, Copy)]
pub struct SelftestTolerances {
    pub exp_reduction: f64,
    pub power_exp_reduction: f64,
    pub alpha_mu_exponential: f64,
    pub alpha_mu_closed_form: f64,
    pub egg_exponential: f64,
    pub bivariate_separable: f64,
    pub contour_independence_factor: f64,
    pub theta_identity: f64,
    pub mc_sigmas: f64,
}

impl Default for SelftestTolerances {
    fn default() -> Self {
        Self {
            exp_reduction: 1e-10,
            power_exp_reduction: 1e-9,
            alpha_mu_exponential: 1e-10,
            alpha_mu_closed_form: 1e-8,
            egg_exponential: 1e-9,
            bivariate_separable: 1e-8,
            contour_independence_factor: 10.0,
            theta_identity: 1e-6,
            mc_sigmas: 4.0,
        }
    }
}

/// Outcome of one named invariant.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Full selftest report.
#[derive(Debug, Clone)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, out: &mut Vec<Check>, body: impl FnOnce() -> Result<(bool, String)>) {
    let (passed, detail) = match body() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    out.push(Check { name, passed, detail });
}

/// Run the invariant suite with the given tolerances.
pub fn run(tols: &SelftestTolerances) -> Report {
    let mut checks = Vec::new();
    let opts = EvalOptions::default();

    check("fox-h-exp-reduction", &mut checks, || {
        let spec = FoxHSpec::new(1, 0, vec![], vec![GammaTerm::new(0.0, 1.0)])?;
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let z = 10f64.powf(-3.0 + 4.477 * i as f64 / 19.0); // 1e-3 ..= 30
            let contour = choose_contour(&spec, z)?;
            worst = worst.max((eval_fox_h(&spec, z, &contour)? - (-z).exp()).abs());
        }
        Ok((worst <= tols.exp_reduction, format!("max |H - exp(-z)| = {worst:.3e}")))
    });

    check("fox-h-power-exp-reduction", &mut checks, || {
        let mut worst: f64 = 0.0;
        for &b in &[0.5, 1.0, 2.7] {
            let spec = FoxHSpec::new(1, 0, vec![], vec![GammaTerm::new(b, 1.0)])?;
            for &z in &[0.1, 1.0, 10.0] {
                let contour = choose_contour(&spec, z)?;
                let want = z.powf(b) * (-z).exp();
                worst = worst.max((eval_fox_h(&spec, z, &contour)? - want).abs());
            }
        }
        Ok((
            worst <= tols.power_exp_reduction,
            format!("max |H - z^b exp(-z)| = {worst:.3e}"),
        ))
    });

    check("alpha-mu-exponential-reduction", &mut checks, || {
        let p = AlphaMuParams::new(2.0, 1.0, 1.0)?;
        let mut worst: f64 = 0.0;
        for &g in &[0.2, 1.0, 3.0] {
            worst = worst.max((alpha_mu_cdf(&p, g)? - (1.0 - (-g).exp())).abs());
        }
        Ok((worst <= tols.alpha_mu_exponential, format!("max gap {worst:.3e}")))
    });

    check("alpha-mu-cdf-closed-form", &mut checks, || {
        let p = AlphaMuParams::new(1.6, 1.5, 10.0)?;
        let mut worst: f64 = 0.0;
        for &g in &[1.0, 5.0, 20.0] {
            worst = worst.max((alpha_mu_cdf(&p, g)? - reference::alpha_mu_cdf(&p, g)?).abs());
        }
        Ok((worst <= tols.alpha_mu_closed_form, format!("max gap {worst:.3e}")))
    });

    check("egg-exponential-reduction", &mut checks, || {
        let p = EggParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1, 1.0)?;
        let v = egg_ccdf(&p, 2.0)?;
        let gap = (v - (-2.0f64).exp()).abs();
        Ok((gap <= tols.egg_exponential, format!("gap {gap:.3e}")))
    });

    check("bivariate-separable-product", &mut checks, || {
        let k = FoxHSpec::new(1, 0, vec![], vec![GammaTerm::new(0.0, 1.0)])?;
        let spec = BivariateFoxHSpec::new(vec![], k.clone(), k)?;
        let contours = choose_bivariate_contours(&spec, 1.0, 1.0, 1e-9, 200_000)?;
        let v = eval_bivariate_fox_h(&spec, 1.0, 1.0, &contours)?;
        let gap = (v - (-2.0f64).exp()).abs();
        Ok((gap <= tols.bivariate_separable, format!("gap {gap:.3e}")))
    });

    check("contour-independence", &mut checks, || {
        let spec = FoxHSpec::new(
            1,
            1,
            vec![GammaTerm::new(1.0, 1.0)],
            vec![GammaTerm::new(1.5, 0.8), GammaTerm::new(0.0, 1.0)],
        )?;
        let z = 0.7;
        let c1 = choose_contour(&spec, z)?;
        let mut c2 = c1;
        c2.sigma = -0.15;
        let v1 = eval_fox_h(&spec, z, &c1)?;
        let v2 = eval_fox_h(&spec, z, &c2)?;
        let gap = (v1 - v2).abs();
        let bound = tols.contour_independence_factor * c1.rel_tol * v1.abs().max(1.0);
        Ok((gap <= bound, format!("gap {gap:.3e} vs bound {bound:.3e}")))
    });

    let fig2 = || -> Result<(LinkPair, EveParams, RelayConfig, SecrecyConfig)> {
        let presets = builtin_presets();
        let egg = presets[0].params(db_to_linear(10.0))?;
        Ok((
            LinkPair::new(AlphaMuParams::new(1.6, 1.5, db_to_linear(20.0))?, egg)?,
            EveParams::new(AlphaMuParams::new(1.6, 1.5, db_to_linear(10.0))?)?,
            RelayConfig::FromPowers { p1: 1.0, p2: 1.0, n0: 1.0, n1: 1.0 },
            SecrecyConfig::new(0.01, ThresholdBase::Natural)?,
        ))
    };

    check("theta-one-identity", &mut checks, || {
        let (links, eve, relay, _) = fig2()?;
        let sc0 = SecrecyConfig::new(0.0, ThresholdBase::Natural)?;
        let sop = sop_lower_bound(&links, &eve, &relay, &sc0, &opts)?;
        let pnz = pnz_exact(&links, &eve, &relay, &opts)?;
        let gap = (sop + pnz - 1.0).abs();
        Ok((gap <= tols.theta_identity, format!("|SOP + PNZ - 1| = {gap:.3e}")))
    });

    check("mc-smoke-agreement", &mut checks, || {
        let (links, eve, relay, sc) = fig2()?;
        let analytic = sop_lower_bound(&links, &eve, &relay, &sc, &opts)?;
        let mc = McConfig { trials: 200_000, master_seed: 0xACCE55, stream_count: 32 };
        let est = mc_sop_lower(&links, &eve, &relay, &sc, &mc)?;
        let gap = (analytic - est.value).abs();
        let bound = tols.mc_sigmas * est.std_error;
        Ok((
            gap <= bound,
            format!("|analytic - mc| = {gap:.3e} vs {:.1} se = {bound:.3e}", tols.mc_sigmas),
        ))
    });

    Report { checks }
}
