//! Channel models: α-μ RF fading and the mixture exponential–generalized
//! Gamma (EGG) underwater optical turbulence law.
//!
//! Conventions. The α-μ SNR density is
//!
//! ```text
//! f(γ) = (α/2) μ^μ / Γ(μ) · γ̄^{−αμ/2} γ^{αμ/2−1} exp(−μ (γ/γ̄)^{α/2})
//! ```
//!
//! so γ̄ is the scale parameter and a draw is γ = γ̄ (X/μ)^{2/α} with
//! X ~ Gamma(μ, 1). Every H-function representation uses the half
//! exponent `h = α/2` together with β = μ^{1/h}, Λ = β/γ̄ and
//! κ = β/(Γ(μ) γ̄); with those constants the contour forms reproduce the
//! density above exactly.
//!
//! The EGG SNR is γ₂ = μ_r I^r where the irradiance I mixes an
//! exponential branch (weight ω, scale λ) with a generalized Gamma branch
//! (a, b, c). `r` selects the detection scheme (1 = heterodyne,
//! 2 = IM/DD).

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mellin::{
    choose_contour, eval_fox_h, gamma_real, reg_gamma_lower, reg_gamma_upper, FoxHSpec, GammaTerm,
};

/// α-μ fading parameters of one RF link (SNR-domain, linear mean scale).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaMuParams {
    /// Nonlinearity exponent α > 0.
    pub alpha: f64,
    /// Multipath-cluster count μ > 0 (not necessarily integer).
    pub mu: f64,
    /// Scale parameter γ̄ > 0 (linear).
    pub mean_snr: f64,
}

impl AlphaMuParams {
    pub fn new(alpha: f64, mu: f64, mean_snr: f64) -> Result<Self> {
        let p = Self { alpha, mu, mean_snr };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::config(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::config(format!("mu must be positive, got {}", self.mu)));
        }
        if !(self.mean_snr > 0.0 && self.mean_snr.is_finite()) {
            return Err(Error::config(format!(
                "mean SNR must be positive, got {}",
                self.mean_snr
            )));
        }
        let derived = [self.beta(), self.big_lambda(), self.kappa()];
        if derived.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::config(format!(
                "derived constants not finite/positive for alpha={}, mu={}, mean_snr={}",
                self.alpha, self.mu, self.mean_snr
            )));
        }
        Ok(())
    }

    /// Half exponent h = α/2 entering every H-function kernel.
    pub fn h_alpha(&self) -> f64 {
        0.5 * self.alpha
    }

    /// β = μ^{1/h} = μ^{2/α}.
    pub fn beta(&self) -> f64 {
        self.mu.powf(1.0 / self.h_alpha())
    }

    /// Λ = β/γ̄.
    pub fn big_lambda(&self) -> f64 {
        self.beta() / self.mean_snr
    }

    /// κ = β/(Γ(μ) γ̄) = Λ/Γ(μ).
    pub fn kappa(&self) -> f64 {
        self.big_lambda() / gamma_real(self.mu).expect("validated mu > 0")
    }

    /// Replace the mean-SNR scale (used by sweeps).
    pub fn with_mean_snr(&self, mean_snr: f64) -> Self {
        Self { mean_snr, ..*self }
    }
}

/// SNR density of Eq.-(1) form.
pub fn alpha_mu_pdf(p: &AlphaMuParams, gamma: f64) -> f64 {
    if gamma < 0.0 {
        return 0.0;
    }
    let h = p.h_alpha();
    let g = gamma_real(p.mu).expect("validated mu > 0");
    h * p.mu.powf(p.mu) / g / p.mean_snr.powf(h * p.mu)
        * gamma.powf(h * p.mu - 1.0)
        * (-p.mu * (gamma / p.mean_snr).powf(h)).exp()
}

/// SNR distribution function, evaluated through the H^{1,1}_{1,2} contour
/// form (the closed incomplete-gamma route lives in [`reference`]).
pub fn alpha_mu_cdf(p: &AlphaMuParams, gamma: f64) -> Result<f64> {
    if gamma < 0.0 {
        return Err(Error::domain(format!("CDF argument must be >= 0, got {gamma}")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let spec = alpha_mu_cdf_spec(p)?;
    let z = gamma * p.big_lambda();
    let contour = choose_contour(&spec, z)?;
    let h = eval_fox_h(&spec, z, &contour)?;
    let v = p.kappa() / p.big_lambda() * h;
    Ok(v.clamp(0.0, 1.0))
}

/// H^{1,1}_{1,2}[γΛ | (1,1); (μ, 1/h), (0,1)] kernel of the CDF.
pub fn alpha_mu_cdf_spec(p: &AlphaMuParams) -> Result<FoxHSpec> {
    FoxHSpec::new(
        1,
        1,
        vec![GammaTerm::new(1.0, 1.0)],
        vec![
            GammaTerm::new(p.mu, 1.0 / p.h_alpha()),
            GammaTerm::new(0.0, 1.0),
        ],
    )
}

/// Draw one SNR value: γ = γ̄ (X/μ)^{2/α}, X ~ Gamma(μ, 1).
pub fn alpha_mu_sample<R: Rng + ?Sized>(p: &AlphaMuParams, rng: &mut R) -> f64 {
    let x: f64 = Gamma::new(p.mu, 1.0).expect("validated mu > 0").sample(rng);
    p.mean_snr * (x / p.mu).powf(2.0 / p.alpha)
}

/// Optical detection scheme: r = 1 (heterodyne) or r = 2 (IM/DD).
pub type DetectionOrder = u8;

/// EGG turbulence parameters of the UWOC link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EggParams {
    /// Mixture weight ω ∈ [0, 1] of the exponential branch.
    pub omega: f64,
    /// Exponential scale λ > 0.
    pub lambda: f64,
    /// Generalized-Gamma shape a > 0.
    pub a: f64,
    /// Generalized-Gamma scale b > 0.
    pub b: f64,
    /// Generalized-Gamma exponent c > 0.
    pub c: f64,
    /// Detection order r ∈ {1, 2}.
    pub r: DetectionOrder,
    /// Electrical SNR scale μ_r > 0 (linear).
    pub mu_r: f64,
}

impl EggParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega: f64,
        lambda: f64,
        a: f64,
        b: f64,
        c: f64,
        r: DetectionOrder,
        mu_r: f64,
    ) -> Result<Self> {
        let p = Self { omega, lambda, a, b, c, r, mu_r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(Error::config(format!("omega must lie in [0,1], got {}", self.omega)));
        }
        for (name, v) in [
            ("lambda", self.lambda),
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("mu_r", self.mu_r),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.r != 1 && self.r != 2 {
            return Err(Error::config(format!("r must be 1 or 2, got {}", self.r)));
        }
        Ok(())
    }

    pub fn rf(&self) -> f64 {
        self.r as f64
    }

    /// Replace the electrical SNR scale (used by sweeps).
    pub fn with_mu_r(&self, mu_r: f64) -> Self {
        Self { mu_r, ..*self }
    }
}

/// Eq.-(3) two-branch mixture density of the SNR γ₂.
pub fn egg_pdf(p: &EggParams, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("EGG pdf argument must be > 0, got {gamma}")));
    }
    let r = p.rf();
    let xg = p.b.powf(-p.c) * (gamma / p.mu_r).powf(p.c / r);
    let xe = (gamma / p.mu_r).powf(1.0 / r) / p.lambda;
    let gg = if p.omega < 1.0 {
        (1.0 - p.omega) * p.c / (gamma * r * gamma_real(p.a)?) * xg.powf(p.a) * (-xg).exp()
    } else {
        0.0
    };
    let ex = if p.omega > 0.0 {
        p.omega / (gamma * r) * xe * (-xe).exp()
    } else {
        0.0
    };
    Ok(gg + ex)
}

/// Eq.-(4) complementary distribution function, evaluated through the
/// H^{2,0}_{1,2} + r·ω·H^{1,0}_{0,1} contour forms.
pub fn egg_ccdf(p: &EggParams, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain(format!("EGG ccdf argument must be > 0, got {gamma}")));
    }
    let r = p.rf();
    let mut v = 0.0;
    if p.omega < 1.0 {
        let spec = egg_ccdf_gg_spec(p)?;
        let z = p.b.powf(-r) * gamma / p.mu_r;
        let contour = choose_contour(&spec, z)?;
        v += (1.0 - p.omega) / gamma_real(p.a)? * eval_fox_h(&spec, z, &contour)?;
    }
    if p.omega > 0.0 {
        let spec = egg_ccdf_exp_spec(p)?;
        let z = gamma * p.lambda.powf(-r) / p.mu_r;
        let contour = choose_contour(&spec, z)?;
        v += r * p.omega * eval_fox_h(&spec, z, &contour)?;
    }
    Ok(v.clamp(0.0, 1.0))
}

/// H^{2,0}_{1,2}[· | (1,1); (0,1), (a, r/c)].
pub fn egg_ccdf_gg_spec(p: &EggParams) -> Result<FoxHSpec> {
    FoxHSpec::new(
        2,
        0,
        vec![GammaTerm::new(1.0, 1.0)],
        vec![GammaTerm::new(0.0, 1.0), GammaTerm::new(p.a, p.rf() / p.c)],
    )
}

/// H^{1,0}_{0,1}[· | —; (0, r)].
pub fn egg_ccdf_exp_spec(p: &EggParams) -> Result<FoxHSpec> {
    FoxHSpec::new(1, 0, vec![], vec![GammaTerm::new(0.0, p.rf())])
}

/// Draw one EGG SNR value: mixture draw of the irradiance, then
/// γ₂ = μ_r I^r.
pub fn egg_sample<R: Rng + ?Sized>(p: &EggParams, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    let irradiance = if u < p.omega {
        // Exponential branch with scale λ (rate 1/λ).
        Exp::new(1.0 / p.lambda).expect("validated lambda > 0").sample(rng)
    } else {
        // Generalized Gamma(a, b, c) as b · X^{1/c}, X ~ Gamma(a, 1).
        let x: f64 = Gamma::new(p.a, 1.0).expect("validated a > 0").sample(rng);
        p.b * x.powf(1.0 / p.c)
    };
    p.mu_r * irradiance.powf(p.rf())
}

/// A labeled EGG parameter set with provenance.
///
/// The presets shipped with this crate are illustrative: they exercise the
/// code paths with physically plausible magnitudes and the expected
/// qualitative orderings, but they are not fitted to measurements. Supply
/// calibrated values through the registry for quantitative work.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelPreset {
    pub label: String,
    pub omega: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r: DetectionOrder,
    pub provenance: String,
}

impl ChannelPreset {
    /// Materialize EGG parameters at an electrical SNR scale.
    pub fn params(&self, mu_r: f64) -> Result<EggParams> {
        if self.provenance.trim().is_empty() {
            return Err(Error::config(format!(
                "preset {:?} has no provenance string",
                self.label
            )));
        }
        EggParams::new(self.omega, self.lambda, self.a, self.b, self.c, self.r, mu_r)
    }
}

/// Parse a JSON preset registry (array of [`ChannelPreset`] records).
pub fn parse_preset_registry(json: &str) -> Result<Vec<ChannelPreset>> {
    let presets: Vec<ChannelPreset> = serde_json::from_str(json)
        .map_err(|e| Error::config(format!("preset registry parse error: {e}")))?;
    for p in &presets {
        if p.provenance.trim().is_empty() {
            return Err(Error::config(format!(
                "preset {:?} has no provenance string",
                p.label
            )));
        }
        p.params(1.0)?;
    }
    Ok(presets)
}

/// Registry shipped with the crate (illustrative values; see
/// [`ChannelPreset`]).
pub fn builtin_presets() -> Vec<ChannelPreset> {
    parse_preset_registry(include_str!("../data/presets.json"))
        .expect("embedded preset registry is valid")
}

/// Resolve a preset label against a registry.
pub fn resolve_preset<'a>(registry: &'a [ChannelPreset], label: &str) -> Result<&'a ChannelPreset> {
    registry
        .iter()
        .find(|p| p.label == label)
        .ok_or(Error::Preset { label: label.to_string() })
}

/// Closed-form reference implementations used by the validation suites.
///
/// These deliberately avoid the contour machinery: the α-μ CDF goes through
/// the regularized incomplete gamma, the EGG CCDF through the upper
/// incomplete gamma, so the H-function route can be checked against an
/// independent path.
pub mod reference {
    use super::*;

    /// P(μ, μ (γ/γ̄)^{α/2}).
    pub fn alpha_mu_cdf(p: &AlphaMuParams, gamma: f64) -> Result<f64> {
        if gamma <= 0.0 {
            return Ok(0.0);
        }
        reg_gamma_lower(p.mu, p.mu * (gamma / p.mean_snr).powf(p.h_alpha()))
    }

    /// (1−ω) Q(a, ((γ/μ_r)^{1/r}/b)^c) + ω exp(−(γ/μ_r)^{1/r}/λ).
    pub fn egg_ccdf(p: &EggParams, gamma: f64) -> Result<f64> {
        let r = p.rf();
        let i = (gamma / p.mu_r).powf(1.0 / r);
        let gg = if p.omega < 1.0 {
            (1.0 - p.omega) * reg_gamma_upper(p.a, (i / p.b).powf(p.c))?
        } else {
            0.0
        };
        Ok(gg + p.omega * (-i / p.lambda).exp())
    }

    /// Moment E[γ^t] = Γ(μ + t/h) / (Γ(μ) Λ^t) of the α-μ law.
    pub fn alpha_mu_moment(p: &AlphaMuParams, t: f64) -> Result<f64> {
        Ok(gamma_real(p.mu + t / p.h_alpha())? / gamma_real(p.mu)? / p.big_lambda().powf(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let n = if n % 2 == 0 { n } else { n + 1 };
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    /// ∫₀^G f with the substitution x = G u⁶, which removes the
    /// fractional-power singularity of the α-μ density at the origin
    /// (the transformed endpoint value is 0 whenever αμ > 1/3).
    fn simpson_from_zero<F: Fn(f64) -> f64>(f: F, upper: f64, n: usize) -> f64 {
        simpson(
            |u| {
                if u == 0.0 {
                    0.0
                } else {
                    f(upper * u.powi(6)) * 6.0 * upper * u.powi(5)
                }
            },
            0.0,
            1.0,
            n,
        )
    }

    #[test]
    fn alpha_mu_pdf_reductions() {
        // α = 2, μ = 1 is the exponential law.
        let p = AlphaMuParams::new(2.0, 1.0, 1.0).unwrap();
        assert!((alpha_mu_pdf(&p, 0.5) - (-0.5f64).exp()).abs() < 1e-14);
        // Independent arbitrary-precision value of the general density.
        let p = AlphaMuParams::new(1.6, 1.5, 10.0).unwrap();
        assert!((alpha_mu_pdf(&p, 5.0) - 0.06099874755709377).abs() < 1e-14);
        // Vanishing prefactor at the origin when αμ/2 > 1.
        assert_eq!(alpha_mu_pdf(&p, 0.0), 0.0);
        // Finite limit when αμ/2 = 1.
        let p = AlphaMuParams::new(2.0, 1.0, 4.0).unwrap();
        assert!((alpha_mu_pdf(&p, 0.0) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn alpha_mu_pdf_matches_h_form() {
        // κ H^{1,0}_{0,1}[γΛ | —; (μ − 1/h, 1/h)] is the same density.
        let p = AlphaMuParams::new(1.6, 1.5, 10.0).unwrap();
        let h = p.h_alpha();
        let spec = FoxHSpec::new(
            1,
            0,
            vec![],
            vec![GammaTerm::new(p.mu - 1.0 / h, 1.0 / h)],
        )
        .unwrap();
        for &g in &[0.5, 2.0, 5.0, 20.0] {
            let z = g * p.big_lambda();
            let contour = choose_contour(&spec, z).unwrap();
            let via_h = p.kappa() * eval_fox_h(&spec, z, &contour).unwrap();
            let direct = alpha_mu_pdf(&p, g);
            assert!(
                ((via_h - direct) / direct).abs() < 1e-9,
                "g={g}: {via_h} vs {direct}"
            );
        }
    }

    #[test]
    fn alpha_mu_cdf_trivial_and_oracle() {
        let p = AlphaMuParams::new(2.0, 1.0, 1.0).unwrap();
        assert_eq!(alpha_mu_cdf(&p, 0.0).unwrap(), 0.0);
        let v = alpha_mu_cdf(&p, 1.0).unwrap();
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-10, "{v}");
        // Independent arbitrary-precision anchor.
        let p = AlphaMuParams::new(1.6, 1.5, 10.0).unwrap();
        let v = alpha_mu_cdf(&p, 5.0).unwrap();
        assert!((v - 0.36817798346849061).abs() < 1e-10, "{v}");
    }

    #[test]
    fn alpha_mu_cdf_matches_pdf_quadrature() {
        for (alpha, mu) in [(2.0, 1.0), (1.6, 1.5), (2.1, 1.4), (1.5, 0.8)] {
            for mean in [1.0, 10.0] {
                let p = AlphaMuParams::new(alpha, mu, mean).unwrap();
                for &g in &[0.4 * mean, 1.3 * mean] {
                    let cdf = alpha_mu_cdf(&p, g).unwrap();
                    let quad = simpson_from_zero(|x| alpha_mu_pdf(&p, x), g, 40_000);
                    assert!(
                        (cdf - quad).abs() < 1e-8,
                        "({alpha},{mu},{mean}) at {g}: {cdf} vs {quad}"
                    );
                }
            }
        }
    }

    #[test]
    fn alpha_mu_reductions_against_gamma_law() {
        // α = 2, μ = m is the Nakagami-m power law: CDF = P(m, m γ/γ̄).
        let p = AlphaMuParams::new(2.0, 2.7, 5.0).unwrap();
        for &g in &[0.5, 2.0, 8.0] {
            let lhs = alpha_mu_cdf(&p, g).unwrap();
            let rhs = reg_gamma_lower(2.7, 2.7 * g / 5.0).unwrap();
            assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn egg_pdf_trivial_and_oracle() {
        // ω = 1 keeps only the exponential branch.
        let p = EggParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1, 1.0).unwrap();
        assert!((egg_pdf(&p, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-14);
        // Independent arbitrary-precision anchors.
        let p = EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, 1, 10.0).unwrap();
        assert!((egg_pdf(&p, 5.0).unwrap() - 0.013985676442539506).abs() < 1e-14);
        let p2 = EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, 2, 10.0).unwrap();
        assert!((egg_pdf(&p2, 5.0).unwrap() - 0.005284865010038248).abs() < 1e-14);
    }

    #[test]
    fn egg_pdf_normalizes() {
        let p = EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, 1, 10.0).unwrap();
        let total = simpson(|g| egg_pdf(&p, g).unwrap(), 1e-9, 400.0, 120_000);
        assert!((total - 1.0).abs() < 1e-6, "normalization {total}");
    }

    #[test]
    fn egg_ccdf_trivial_and_oracle() {
        let p = EggParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1, 1.0).unwrap();
        assert!((egg_ccdf(&p, 2.0).unwrap() - (-2.0f64).exp()).abs() < 1e-10);
        // Total probability at the origin.
        let p = EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, 1, 10.0).unwrap();
        assert!((egg_ccdf(&p, 1e-9).unwrap() - 1.0).abs() < 1e-6);
        // Independent arbitrary-precision anchors.
        assert!((egg_ccdf(&p, 5.0).unwrap() - 0.83615272503158814).abs() < 1e-9);
        let p2 = EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, 2, 10.0).unwrap();
        assert!((egg_ccdf(&p2, 5.0).unwrap() - 0.81463760622388334).abs() < 1e-9);
    }

    #[test]
    fn egg_ccdf_matches_pdf_quadrature() {
        for r in [1u8, 2u8] {
            let p = EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, r, 10.0).unwrap();
            for &g in &[1.0, 5.0, 20.0] {
                let ccdf = egg_ccdf(&p, g).unwrap();
                let upper = if r == 1 { 600.0 } else { 4000.0 };
                let tail = simpson(|x| egg_pdf(&p, x).unwrap(), g, upper, 160_000);
                assert!(
                    (ccdf - tail).abs() < 1e-6,
                    "r={r} g={g}: {ccdf} vs {tail}"
                );
            }
        }
    }

    #[test]
    fn egg_reductions() {
        // ω = 0 recovers the generalized Gamma: CCDF = Q(a, (I/b)^c).
        let p = EggParams::new(0.0, 1.0, 1.43, 1.18, 17.2, 1, 10.0).unwrap();
        for &g in &[2.0, 10.0] {
            let lhs = egg_ccdf(&p, g).unwrap();
            let rhs = reg_gamma_upper(1.43, ((g / 10.0) / 1.18).powf(17.2)).unwrap();
            assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
        }
        // c = 1 is the exponential-Gamma mixture: GG branch density is
        // I^{a−1} e^{−I/b} / (b^a Γ(a)).
        let p = EggParams::new(0.4, 0.5, 2.0, 0.8, 1.0, 1, 1.0).unwrap();
        for &g in &[0.3, 1.5] {
            let lhs = egg_pdf(&p, g).unwrap();
            let gg = 0.6 * g.powf(2.0 - 1.0) * (-g / 0.8).exp()
                / (0.8f64.powi(2) * gamma_real(2.0).unwrap());
            let ex = 0.4 * (-g / 0.5).exp() / 0.5;
            assert!(((lhs - (gg + ex)) / lhs).abs() < 1e-12);
        }
    }

    fn ks_statistic(mut draws: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        draws.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = draws.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in draws.iter().enumerate() {
            let fx = cdf(x);
            let lo = i as f64 / n;
            let hi = (i + 1) as f64 / n;
            d = d.max((fx - lo).abs()).max((hi - fx).abs());
        }
        d
    }

    #[test]
    fn alpha_mu_sampler_passes_ks() {
        let p = AlphaMuParams::new(1.6, 1.5, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let draws: Vec<f64> = (0..100_000).map(|_| alpha_mu_sample(&p, &mut rng)).collect();
        let d = ks_statistic(draws, |x| reference::alpha_mu_cdf(&p, x).unwrap());
        let crit = 1.628 / (100_000f64).sqrt(); // 1% level
        assert!(d < crit, "KS statistic {d} exceeds {crit}");
    }

    #[test]
    fn alpha_mu_sampler_mean_for_exponential_case() {
        let p = AlphaMuParams::new(2.0, 1.0, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| alpha_mu_sample(&p, &mut rng)).sum::<f64>() / n as f64;
        // Exponential: mean = sd = γ̄; 3σ band of the sample mean.
        assert!((mean - 3.0).abs() < 3.0 * 3.0 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn egg_sampler_passes_ks() {
        for r in [1u8, 2u8] {
            let p = EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, r, 10.0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            let draws: Vec<f64> = (0..100_000).map(|_| egg_sample(&p, &mut rng)).collect();
            let d = ks_statistic(draws, |x| 1.0 - reference::egg_ccdf(&p, x).unwrap());
            let crit = 1.628 / (100_000f64).sqrt();
            assert!(d < crit, "r={r}: KS statistic {d} exceeds {crit}");
        }
    }

    #[test]
    fn samplers_are_seed_deterministic() {
        let p = AlphaMuParams::new(1.6, 1.5, 10.0).unwrap();
        let e = EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, 1, 10.0).unwrap();
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(12345);
            (0..64)
                .map(|_| (alpha_mu_sample(&p, &mut rng), egg_sample(&e, &mut rng)))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn preset_registry_roundtrip_and_resolution() {
        let presets = builtin_presets();
        assert!(presets.len() >= 4);
        assert!(resolve_preset(&presets, "[2.4,0.05]").is_ok());
        assert!(matches!(
            resolve_preset(&presets, "[nope]"),
            Err(Error::Preset { .. })
        ));
        for p in &presets {
            assert!(!p.provenance.trim().is_empty());
            p.params(10.0).unwrap();
        }
        let empty_prov = r#"[{"label":"x","omega":0.2,"lambda":0.3,"a":1.0,"b":1.0,"c":1.0,"r":1,"provenance":"  "}]"#;
        assert!(parse_preset_registry(empty_prov).is_err());
    }
}
