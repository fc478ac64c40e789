//! Univariate Fox H-function: spec validation, contour selection and
//! Mellin–Barnes evaluation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mellin::gamma::ln_gamma_complex;
use crate::mellin::quad::integrate_adaptive;

/// One Γ(shift + scale·s) factor of an H-function kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaTerm {
    pub shift: f64,
    pub scale: f64,
}

impl GammaTerm {
    pub fn new(shift: f64, scale: f64) -> Self {
        Self { shift, scale }
    }
}

/// Parameter set of H^{m,n}_{p,q}[z | (a_j, A_j)_p ; (b_j, B_j)_q].
///
/// `upper` holds the (a_j, A_j) pairs (p = upper.len()), `lower` the
/// (b_j, B_j) pairs (q = lower.len()). The first `m` lower and first `n`
/// upper pairs contribute numerator gammas; the rest divide.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxHSpec {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<GammaTerm>,
    pub lower: Vec<GammaTerm>,
}

impl FoxHSpec {
    pub fn new(m: usize, n: usize, upper: Vec<GammaTerm>, lower: Vec<GammaTerm>) -> Result<Self> {
        let spec = Self { m, n, upper, lower };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m > self.lower.len() {
            return Err(Error::config(format!(
                "H-spec: m = {} exceeds q = {}",
                self.m,
                self.lower.len()
            )));
        }
        if self.n > self.upper.len() {
            return Err(Error::config(format!(
                "H-spec: n = {} exceeds p = {}",
                self.n,
                self.upper.len()
            )));
        }
        for t in self.upper.iter().chain(self.lower.iter()) {
            if !(t.scale > 0.0) || !t.scale.is_finite() || !t.shift.is_finite() {
                return Err(Error::config(format!(
                    "H-spec: invalid gamma term (shift {}, scale {})",
                    t.shift, t.scale
                )));
            }
        }
        self.separation_interval().map(|_| ())
    }

    /// Rightmost pole of the Γ(b_j + B_j s), j ≤ m family (−∞ if empty).
    pub fn left_family_bound(&self) -> f64 {
        self.lower[..self.m]
            .iter()
            .map(|t| -t.shift / t.scale)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Leftmost pole of the Γ(1 − a_j − A_j s), j ≤ n family (+∞ if empty).
    pub fn right_family_bound(&self) -> f64 {
        self.upper[..self.n]
            .iter()
            .map(|t| (1.0 - t.shift) / t.scale)
            .fold(f64::INFINITY, f64::min)
    }

    /// Open interval of admissible contour abscissae.
    pub fn separation_interval(&self) -> Result<(f64, f64)> {
        let lo = self.left_family_bound();
        let hi = self.right_family_bound();
        if lo < hi {
            Ok((lo, hi))
        } else {
            Err(Error::NoContour {
                detail: format!(
                    "pole families overlap: rightmost lower-family pole {lo} >= leftmost upper-family pole {hi}"
                ),
            })
        }
    }

    /// All poles of both numerator families with real part in
    /// [window_lo, window_hi]; used by tests to assert separation.
    pub fn poles_in_window(&self, window_lo: f64, window_hi: f64) -> (Vec<f64>, Vec<f64>) {
        let mut left = Vec::new();
        for t in &self.lower[..self.m] {
            let mut k = 0.0;
            loop {
                let p = -(t.shift + k) / t.scale;
                if p < window_lo {
                    break;
                }
                if p <= window_hi {
                    left.push(p);
                }
                k += 1.0;
            }
        }
        let mut right = Vec::new();
        for t in &self.upper[..self.n] {
            let mut k = 0.0;
            loop {
                let p = (1.0 - t.shift + k) / t.scale;
                if p > window_hi {
                    break;
                }
                if p >= window_lo {
                    right.push(p);
                }
                k += 1.0;
            }
        }
        (left, right)
    }

    /// Log of the gamma-ratio kernel at a contour point.
    pub(crate) fn ln_kernel(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.lower[..self.m] {
            acc += ln_gamma_complex(Complex64::new(t.shift, 0.0) + t.scale * s)?;
        }
        for t in &self.upper[..self.n] {
            acc += ln_gamma_complex(Complex64::new(1.0 - t.shift, 0.0) - t.scale * s)?;
        }
        for t in &self.lower[self.m..] {
            acc -= ln_gamma_complex(Complex64::new(1.0 - t.shift, 0.0) - t.scale * s)?;
        }
        for t in &self.upper[self.n..] {
            acc -= ln_gamma_complex(Complex64::new(t.shift, 0.0) + t.scale * s)?;
        }
        Ok(acc)
    }

    /// Exponential decay rate of |kernel| per unit |Im s| (Stirling).
    pub(crate) fn decay_rate(&self) -> f64 {
        let num: f64 = self.lower[..self.m].iter().map(|t| t.scale).sum::<f64>()
            + self.upper[..self.n].iter().map(|t| t.scale).sum::<f64>();
        let den: f64 = self.lower[self.m..].iter().map(|t| t.scale).sum::<f64>()
            + self.upper[self.n..].iter().map(|t| t.scale).sum::<f64>();
        std::f64::consts::FRAC_PI_2 * (num - den)
    }
}

/// Vertical-line contour controls.
#[derive(Debug, Clone, Copy)]
pub struct ContourSpec {
    /// Contour abscissa σ.
    pub sigma: f64,
    /// Truncation half-height T: integration runs over Im s ∈ [−T, T].
    pub half_height: f64,
    /// Relative tolerance for the quadrature.
    pub rel_tol: f64,
    /// Node budget.
    pub max_nodes: u64,
}

impl ContourSpec {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::config(format!("rel_tol {} outside (0,1)", self.rel_tol)));
        }
        if !(self.half_height > 0.0) || self.max_nodes == 0 {
            return Err(Error::config("invalid contour truncation or node budget"));
        }
        Ok(())
    }
}

/// Midpoint of a bounded interval; unit offset from the bounded side
/// otherwise.
pub(crate) fn midpoint_or_unit(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    }
}

/// Conditioning-aware abscissa refinement. When the argument sits far from
/// 1, the default abscissa can make |kernel·z^{−σ}| on the contour vastly
/// exceed the integral's value, wasting the quadrature budget on
/// cancellation. A golden-section search moves σ toward the saddle of
/// `ln|kernel| − σ ln z` inside the admissible window; the default is kept
/// unless the improvement is substantial.
/// Margin-shrunk search window inside a pole-separation interval. A
/// contour hugging a pole line produces a narrow integrand spike that
/// panel quadrature can miss entirely, so the window keeps at least
/// `min_margin` (or a quarter of a narrow interval) away from both ends.
pub(crate) fn search_window(
    lo: f64,
    hi: f64,
    min_margin: f64,
    default: f64,
) -> Option<(f64, f64)> {
    let span = if lo.is_finite() && hi.is_finite() { hi - lo } else { f64::INFINITY };
    let margin = if span.is_finite() {
        if span > 4.0 * min_margin { min_margin.max(0.03 * span) } else { 0.25 * span }
    } else {
        min_margin
    };
    let a = if lo.is_finite() { lo + margin } else { hi.min(default + 1.0) - 60.0 };
    let b = if hi.is_finite() { hi - margin } else { lo.max(default - 1.0) + 60.0 };
    if a < b {
        Some((a, b))
    } else {
        None
    }
}

/// Golden-section minimizer over [a, b].
pub(crate) fn golden_min(phi: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = phi(x1);
    let mut f2 = phi(x2);
    for _ in 0..70 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = phi(x2);
        }
        if (b - a).abs() < 1e-3 {
            break;
        }
    }
    0.5 * (a + b)
}

pub(crate) fn condition_sigma(
    magnitude: &dyn Fn(f64) -> f64,
    ln_z: f64,
    lo: f64,
    hi: f64,
    default: f64,
    min_margin: f64,
) -> f64 {
    if ln_z.abs() <= 1.5 {
        return default;
    }
    // Constrain the search near the default: far-off abscissae shrink the
    // on-axis magnitude proxy while pushing the integrand's true peak to
    // large heights, which only wastes quadrature nodes.
    let Some((a, b)) = search_window(lo, hi, min_margin, default) else {
        return default;
    };
    let (a, b) = (a.max(default - 6.0), b.min(default + 6.0));
    if !(a < b) {
        return default;
    }
    let phi = |sigma: f64| -> f64 { magnitude(sigma) - sigma * ln_z };
    let best = golden_min(&phi, a, b);
    if phi(best) + 1.0 < phi(default) && best > lo && best < hi {
        best
    } else {
        default
    }
}

/// Truncation height from the Stirling decay estimate, refined by doubling
/// until the kernel magnitude at ±iT is below `rel_tol/10` of its value at
/// the real axis.
fn pick_half_height(spec: &FoxHSpec, sigma: f64, rel_tol: f64) -> Result<f64> {
    let rate = spec.decay_rate();
    if rate <= 1e-3 {
        return Err(Error::NoContour {
            detail: format!("kernel does not decay along the contour (rate {rate})"),
        });
    }
    let budget = -(rel_tol.ln()) + 12.0;
    let mut t = (budget / rate).clamp(8.0, 4000.0);
    let center = spec.ln_kernel(Complex64::new(sigma, 0.0))?.re;
    let threshold = center + (rel_tol * 0.1).ln();
    for _ in 0..8 {
        let top = spec.ln_kernel(Complex64::new(sigma, t))?.re;
        let bottom = spec.ln_kernel(Complex64::new(sigma, -t))?.re;
        if top <= threshold && bottom <= threshold {
            return Ok(t);
        }
        t *= 2.0;
    }
    Err(Error::Convergence {
        context: "contour truncation: endpoint magnitude never fell below tolerance".into(),
        axis: None,
        nodes: 0,
    })
}

/// Choose a default contour for `spec` and argument `z`: σ by the
/// midpoint-or-unit rule inside the separating interval, truncation from
/// the integrand decay, default tolerances.
pub fn choose_contour(spec: &FoxHSpec, z: f64) -> Result<ContourSpec> {
    choose_contour_with(spec, z, 1e-9, 200_000)
}

/// [`choose_contour`] with explicit tolerance and node budget.
pub fn choose_contour_with(
    spec: &FoxHSpec,
    z: f64,
    rel_tol: f64,
    max_nodes: u64,
) -> Result<ContourSpec> {
    if !(z > 0.0) {
        return Err(Error::domain(format!("H-function argument must be positive, got {z}")));
    }
    spec.validate()?;
    let (lo, hi) = spec.separation_interval()?;
    let default = midpoint_or_unit(lo, hi);
    // Kernel magnitude proxy, smoothed over a few heights so that
    // denominator zeros on the real axis do not attract the search.
    let magnitude = |sigma: f64| -> f64 {
        [0.0, 1.0, 3.0, 8.0, 20.0]
            .iter()
            .map(|&y| {
                spec.ln_kernel(Complex64::new(sigma, y))
                    .map(|v| v.re)
                    .unwrap_or(f64::INFINITY)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let sigma = condition_sigma(&magnitude, z.ln(), lo, hi, default, 0.15);
    let half_height = pick_half_height(spec, sigma, rel_tol)?;
    let contour = ContourSpec { sigma, half_height, rel_tol, max_nodes };
    contour.validate()?;
    Ok(contour)
}

/// Detailed evaluation record.
#[derive(Debug, Clone, Copy)]
pub struct HEval {
    pub value: f64,
    /// |Im| of the raw contour integral (realness residual).
    pub imag_residual: f64,
    /// Quadrature error estimate.
    pub abs_err: f64,
    pub nodes: u64,
    /// Final truncation height actually used.
    pub half_height: f64,
}

/// Evaluate the H-function along the given contour.
pub fn eval_fox_h(spec: &FoxHSpec, z: f64, contour: &ContourSpec) -> Result<f64> {
    eval_fox_h_detailed(spec, z, contour).map(|e| e.value)
}

/// Evaluate with diagnostics. The `ContourSpec` truncation invariant is
/// re-checked a posteriori; if the integrand has not decayed at ±iT the
/// height is doubled (bounded number of times) before giving up.
pub fn eval_fox_h_detailed(spec: &FoxHSpec, z: f64, contour: &ContourSpec) -> Result<HEval> {
    if !(z > 0.0) {
        return Err(Error::domain(format!("H-function argument must be positive, got {z}")));
    }
    contour.validate()?;
    let (lo, hi) = spec.separation_interval()?;
    if !(contour.sigma > lo && contour.sigma < hi) {
        return Err(Error::NoContour {
            detail: format!(
                "sigma {} outside separating interval ({lo}, {hi})",
                contour.sigma
            ),
        });
    }
    let ln_z = z.ln();
    let sigma = contour.sigma;
    let mut total_nodes = 0u64;
    let mut half_height = contour.half_height;
    let center = spec.ln_kernel(Complex64::new(sigma, 0.0))?.re;
    let threshold = center + (contour.rel_tol * 0.1).ln();
    for _ in 0..4 {
        let top = spec.ln_kernel(Complex64::new(sigma, half_height))?.re;
        let bot = spec.ln_kernel(Complex64::new(sigma, -half_height))?.re;
        if top <= threshold && bot <= threshold {
            break;
        }
        half_height *= 2.0;
    }

    // Probe the magnitude scale for the absolute tolerance floor.
    let mut peak_ln = f64::NEG_INFINITY;
    for i in 0..=16 {
        let y = -half_height + (2.0 * half_height) * i as f64 / 16.0;
        let v = spec.ln_kernel(Complex64::new(sigma, y))?.re;
        peak_ln = peak_ln.max(v);
        total_nodes += 1;
    }
    let peak = (peak_ln - sigma * ln_z).exp();
    let epsabs = contour.rel_tol * peak.max(f64::MIN_POSITIVE);

    let mut f = |y: f64| -> Result<Complex64> {
        let s = Complex64::new(sigma, y);
        let ln_val = spec.ln_kernel(s)? - s * ln_z;
        Ok(ln_val.exp())
    };
    // Initial panels track the oscillation wavelength 2π/|ln z|.
    let init = ((half_height * ln_z.abs().max(0.5)) / 3.0).ceil() as usize;
    let init = init.clamp(8, 4096);
    let q = integrate_adaptive(
        &mut f,
        -half_height,
        half_height,
        epsabs,
        contour.rel_tol,
        contour.max_nodes,
        init,
        0.0,
        "univariate Fox H",
    )?;
    total_nodes += q.nodes;

    let raw = q.value / (2.0 * std::f64::consts::PI);
    let noise_floor = 1e-12 * q.sum_abs / (2.0 * std::f64::consts::PI);
    if raw.im.abs() > (contour.rel_tol * raw.re.abs()).max(noise_floor) {
        return Err(Error::Convergence {
            context: format!(
                "imaginary residual {:.3e} exceeds tolerance (value {:.3e})",
                raw.im, raw.re
            ),
            axis: None,
            nodes: total_nodes,
        });
    }
    Ok(HEval {
        value: raw.re,
        imag_residual: raw.im.abs(),
        abs_err: q.abs_err / (2.0 * std::f64::consts::PI),
        nodes: total_nodes,
        half_height,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_spec() -> FoxHSpec {
        // H^{1,0}_{0,1}[z | —; (0,1)] = e^{−z}
        FoxHSpec::new(1, 0, vec![], vec![GammaTerm::new(0.0, 1.0)]).unwrap()
    }

    fn power_exp_spec(b: f64) -> FoxHSpec {
        // H^{1,0}_{0,1}[z | —; (b,1)] = z^b e^{−z}
        FoxHSpec::new(1, 0, vec![], vec![GammaTerm::new(b, 1.0)]).unwrap()
    }

    #[test]
    fn reduces_to_exponential() {
        let spec = exp_spec();
        for &z in &[1e-3, 0.1, 1.0, 5.0, 12.0, 30.0] {
            let contour = choose_contour(&spec, z).unwrap();
            let v = eval_fox_h(&spec, z, &contour).unwrap();
            assert!(
                (v - (-z).exp()).abs() < 1e-10,
                "z={z}: got {v}, want {}",
                (-z).exp()
            );
        }
    }

    #[test]
    fn default_sigma_is_unit_for_single_left_family() {
        let spec = exp_spec();
        let contour = choose_contour(&spec, 1.0).unwrap();
        assert_eq!(contour.sigma, 1.0);
        let v = eval_fox_h(&spec, 1.0, &contour).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn mellin_pair_of_shifted_exponential() {
        for &b in &[0.5, 1.0, 2.0, 2.7] {
            let spec = power_exp_spec(b);
            for &z in &[0.1, 1.0, 10.0] {
                let contour = choose_contour(&spec, z).unwrap();
                let v = eval_fox_h(&spec, z, &contour).unwrap();
                let want = z.powf(b) * (-z).exp();
                assert!((v - want).abs() < 1e-9, "b={b} z={z}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn contour_chooser_separates_cdf_kernel_poles() {
        // The Eq.-(2)-shaped kernel: H^{1,1}_{1,2}[z | (1,1); (μ, 1/α), (0,1)]
        // with α = 1.6, μ = 1.5 (gamma-scale 1/α).
        let (alpha, mu) = (1.6, 1.5);
        let spec = FoxHSpec::new(
            1,
            1,
            vec![GammaTerm::new(1.0, 1.0)],
            vec![GammaTerm::new(mu, 1.0 / alpha), GammaTerm::new(0.0, 1.0)],
        )
        .unwrap();
        let contour = choose_contour(&spec, 0.5).unwrap();
        // Separating interval is (−αμ, 0).
        assert!(contour.sigma > -alpha * mu && contour.sigma < 0.0);
        let (left, right) = spec.poles_in_window(-30.0, 30.0);
        assert!(!left.is_empty() && !right.is_empty());
        for p in left {
            assert!(p < contour.sigma, "left pole {p} not left of sigma");
        }
        for p in right {
            assert!(p > contour.sigma, "right pole {p} not right of sigma");
        }
    }

    #[test]
    fn overlapping_pole_families_are_rejected() {
        // Lower (−1, 1) has poles {1, 0, −1, …}; upper (1,1) has {0, 1, …}:
        // the families intersect, no vertical line separates them.
        let spec = FoxHSpec {
            m: 1,
            n: 1,
            upper: vec![GammaTerm::new(1.0, 1.0)],
            lower: vec![GammaTerm::new(-1.0, 1.0)],
        };
        assert!(matches!(
            spec.separation_interval(),
            Err(Error::NoContour { .. })
        ));
        assert!(matches!(choose_contour(&spec, 1.0), Err(Error::NoContour { .. })));
    }

    #[test]
    fn contour_independence() {
        // Two valid abscissae must agree to 10× the tolerance.
        let spec = FoxHSpec::new(
            1,
            1,
            vec![GammaTerm::new(1.0, 1.0)],
            vec![GammaTerm::new(1.5, 0.8), GammaTerm::new(0.0, 1.0)],
        )
        .unwrap();
        let z = 0.7;
        let c1 = choose_contour(&spec, z).unwrap();
        let mut c2 = c1;
        c2.sigma = -0.15;
        let v1 = eval_fox_h(&spec, z, &c1).unwrap();
        let v2 = eval_fox_h(&spec, z, &c2).unwrap();
        assert!((v1 - v2).abs() <= 10.0 * c1.rel_tol * v1.abs().max(1.0));
    }

    #[test]
    fn rejects_nonpositive_argument() {
        let spec = exp_spec();
        assert!(choose_contour(&spec, 0.0).is_err());
        let contour = choose_contour(&spec, 1.0).unwrap();
        assert!(eval_fox_h(&spec, -1.0, &contour).is_err());
    }

    #[test]
    fn egg_ccdf_gg_term_matches_incomplete_gamma() {
        // H^{2,0}_{1,2}[x | (1,1); (0,1),(a, r/c)] = Γ(a) Q(a, x^{c/r}).
        use crate::mellin::gamma::{gamma_real, reg_gamma_upper};
        let (a, r, c) = (1.43, 1.0, 17.2);
        let spec = FoxHSpec::new(
            2,
            0,
            vec![GammaTerm::new(1.0, 1.0)],
            vec![GammaTerm::new(0.0, 1.0), GammaTerm::new(a, r / c)],
        )
        .unwrap();
        for &x in &[0.3, 0.9, 1.1] {
            let contour = choose_contour(&spec, x).unwrap();
            let v = eval_fox_h(&spec, x, &contour).unwrap();
            let want = gamma_real(a).unwrap() * reg_gamma_upper(a, x.powf(c / r)).unwrap();
            assert!(
                ((v - want) / want).abs() < 1e-8,
                "x={x}: {v} vs {want}"
            );
        }
    }
}
