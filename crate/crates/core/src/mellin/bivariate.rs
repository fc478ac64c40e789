//! Bivariate Fox H-function evaluation by nested Mellin–Barnes quadrature.
//!
//! The value computed is
//!
//! ```text
//!  1      ⌠   ⌠
//! ─────   |   |   ∏_j Γ(c_j − P_j w₁ − Q_j w₂) · χ₁(w₁) χ₂(w₂) · z₁^{−w₁} z₂^{−w₂}  dw₂ dw₁
//! (2πi)²  ⌡L₁ ⌡L₂
//! ```
//!
//! where χ₁, χ₂ are univariate H-kernels ([`FoxHSpec`]) and the joint block
//! couples the axes. The outer integral runs over the first axis, matching
//! the derivation order of the closed forms; inner kernel values are cached
//! across outer nodes (only the joint gamma depends on both variables).

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Axis, Error, Result};
use crate::mellin::foxh::{condition_sigma, golden_min, midpoint_or_unit, search_window, ContourSpec, FoxHSpec};
use crate::mellin::gamma::ln_gamma_complex;
use crate::mellin::quad::integrate_adaptive;

/// One joint factor Γ(shift − scale1·w₁ − scale2·w₂).
///
/// Scales are non-negative and not both zero; the joint gammas therefore act
/// as an upper-type (right pole) family on each axis, with poles at
/// `shift − scale1·w₁ − scale2·w₂ = −k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointGamma {
    pub shift: f64,
    pub scale1: f64,
    pub scale2: f64,
}

impl JointGamma {
    pub fn new(shift: f64, scale1: f64, scale2: f64) -> Self {
        Self { shift, scale1, scale2 }
    }
}

/// Parameter set of a bivariate H-function.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateFoxHSpec {
    pub joint: Vec<JointGamma>,
    pub kernel1: FoxHSpec,
    pub kernel2: FoxHSpec,
}

impl BivariateFoxHSpec {
    pub fn new(joint: Vec<JointGamma>, kernel1: FoxHSpec, kernel2: FoxHSpec) -> Result<Self> {
        let spec = Self { joint, kernel1, kernel2 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel1.validate()?;
        self.kernel2.validate()?;
        for j in &self.joint {
            if j.scale1 < 0.0 || j.scale2 < 0.0 || (j.scale1 == 0.0 && j.scale2 == 0.0) {
                return Err(Error::config(format!(
                    "joint gamma scales must be non-negative and not both zero: ({}, {}, {})",
                    j.shift, j.scale1, j.scale2
                )));
            }
            if !j.shift.is_finite() {
                return Err(Error::config("non-finite joint gamma shift"));
            }
        }
        Ok(())
    }
}

/// Pick contour abscissae for both axes: each σ must separate its own
/// kernel's pole families, and jointly satisfy
/// `shift − scale1 σ₁ − scale2 σ₂ > 0` for every joint gamma.
pub fn choose_bivariate_contours(
    spec: &BivariateFoxHSpec,
    z1: f64,
    z2: f64,
    rel_tol: f64,
    max_nodes: u64,
) -> Result<(ContourSpec, ContourSpec)> {
    if !(z1 > 0.0 && z2 > 0.0) {
        return Err(Error::domain(format!(
            "bivariate H-function arguments must be positive, got ({z1}, {z2})"
        )));
    }
    spec.validate()?;
    let (l1, u1) = spec.kernel1.separation_interval()?;
    let (l2, u2) = spec.kernel2.separation_interval()?;

    // Axis-1 headroom from the joint constraints assuming σ₂ can sit just
    // above its own lower bound.
    let mut u1_eff = u1;
    for j in &spec.joint {
        if j.scale1 > 0.0 {
            let bound = if j.scale2 > 0.0 {
                if l2.is_finite() {
                    (j.shift - j.scale2 * l2) / j.scale1
                } else {
                    f64::INFINITY
                }
            } else {
                j.shift / j.scale1
            };
            u1_eff = u1_eff.min(bound);
        }
    }
    if u1_eff <= l1 {
        return Err(Error::NoContour {
            detail: "joint gamma constraints leave no room on the first axis".into(),
        });
    }
    let kernel_mag = |kernel: &FoxHSpec, sigma: f64| -> f64 {
        [0.0, 1.0, 3.0, 8.0, 20.0]
            .iter()
            .map(|&y| {
                kernel
                    .ln_kernel(Complex64::new(sigma, y))
                    .map(|v| v.re)
                    .unwrap_or(f64::INFINITY)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let u2_eff_at = |s1: f64| -> f64 {
        let mut u = u2;
        for j in &spec.joint {
            if j.scale2 > 0.0 {
                u = u.min((j.shift - j.scale1 * s1) / j.scale2);
            }
        }
        u
    };
    let (ln_z1, ln_z2) = (z1.ln(), z2.ln());
    let pick2 = |s1: f64| -> f64 {
        let u2e = u2_eff_at(s1);
        if u2e <= l2 {
            return f64::NAN;
        }
        let mag2 = |s: f64| kernel_mag(&spec.kernel2, s);
        condition_sigma(&mag2, ln_z2, l2, u2e, midpoint_or_unit(l2, u2e), 0.4)
    };

    // The abscissae are conditioned jointly: moving σ₁ toward its own
    // saddle shrinks the admissible σ₂ range through the joint constraint
    // and can ruin the inner axis' conditioning, so the objective sums the
    // log-magnitude proxies of both axes.
    let default1 = midpoint_or_unit(l1, u1_eff);
    let sigma1 = if ln_z1.abs() <= 1.5 && ln_z2.abs() <= 1.5 {
        default1
    } else {
        let total = |s1: f64| -> f64 {
            let s2 = pick2(s1);
            if !s2.is_finite() {
                return f64::INFINITY;
            }
            kernel_mag(&spec.kernel1, s1) - s1 * ln_z1 + kernel_mag(&spec.kernel2, s2)
                - s2 * ln_z2
        };
        match search_window(l1, u1_eff, 0.4, default1) {
            Some((a, b)) => {
                let best = golden_min(&total, a, b);
                if total(best) + 1.0 < total(default1) {
                    best
                } else {
                    default1
                }
            }
            None => default1,
        }
    };
    let sigma2 = pick2(sigma1);
    if !sigma2.is_finite() {
        return Err(Error::NoContour {
            detail: "joint gamma constraints leave no room on the second axis".into(),
        });
    }

    for j in &spec.joint {
        if j.shift - j.scale1 * sigma1 - j.scale2 * sigma2 <= 0.0 {
            return Err(Error::NoContour {
                detail: "joint gamma argument not positive on the chosen contours".into(),
            });
        }
    }

    let t1 = pick_height_axis1(spec, sigma1, sigma2, rel_tol)?;
    let t2 = pick_height_axis2(spec, sigma1, sigma2, rel_tol)?;
    Ok((
        ContourSpec { sigma: sigma1, half_height: t1, rel_tol, max_nodes },
        ContourSpec { sigma: sigma2, half_height: t2, rel_tol, max_nodes },
    ))
}

fn ln_joint(spec: &BivariateFoxHSpec, w1: Complex64, w2: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in &spec.joint {
        acc += ln_gamma_complex(Complex64::new(j.shift, 0.0) - j.scale1 * w1 - j.scale2 * w2)?;
    }
    Ok(acc)
}

/// Magnitude proxy along axis 1 at y₂ = 0 (kernel1 plus the joint block,
/// which carries the coupling decay).
fn pick_height_axis1(
    spec: &BivariateFoxHSpec,
    sigma1: f64,
    sigma2: f64,
    rel_tol: f64,
) -> Result<f64> {
    let joint_rate: f64 = spec.joint.iter().map(|j| j.scale1).sum::<f64>();
    let rate = spec.kernel1.decay_rate() + std::f64::consts::FRAC_PI_2 * joint_rate;
    if rate <= 1e-3 {
        return Err(Error::NoContour {
            detail: format!("outer integrand does not decay (rate {rate})"),
        });
    }
    let w2c = Complex64::new(sigma2, 0.0);
    let mag = |y: f64| -> Result<f64> {
        let w1 = Complex64::new(sigma1, y);
        Ok((spec.kernel1.ln_kernel(w1)? + ln_joint(spec, w1, w2c)?).re)
    };
    grow_until_decayed(mag, (-(rel_tol.ln()) + 12.0) / rate, rel_tol)
}

fn pick_height_axis2(
    spec: &BivariateFoxHSpec,
    sigma1: f64,
    sigma2: f64,
    rel_tol: f64,
) -> Result<f64> {
    let joint_rate: f64 = spec.joint.iter().map(|j| j.scale2).sum::<f64>();
    let rate = spec.kernel2.decay_rate() + std::f64::consts::FRAC_PI_2 * joint_rate;
    if rate <= 1e-3 {
        return Err(Error::NoContour {
            detail: format!("inner integrand does not decay (rate {rate})"),
        });
    }
    let w1c = Complex64::new(sigma1, 0.0);
    let mag = |y: f64| -> Result<f64> {
        let w2 = Complex64::new(sigma2, y);
        Ok((spec.kernel2.ln_kernel(w2)? + ln_joint(spec, w1c, w2)?).re)
    };
    grow_until_decayed(mag, (-(rel_tol.ln()) + 12.0) / rate, rel_tol)
}

fn grow_until_decayed(
    mag: impl Fn(f64) -> Result<f64>,
    t0: f64,
    rel_tol: f64,
) -> Result<f64> {
    let mut t = t0.clamp(8.0, 4000.0);
    let center = mag(0.0)?;
    let threshold = center + (rel_tol * 0.1).ln();
    for _ in 0..8 {
        if mag(t)? <= threshold && mag(-t)? <= threshold {
            return Ok(t);
        }
        t *= 2.0;
    }
    Err(Error::Convergence {
        context: "bivariate contour truncation never decayed".into(),
        axis: None,
        nodes: 0,
    })
}

/// Detailed evaluation record.
#[derive(Debug, Clone, Copy)]
pub struct BivariateEval {
    pub value: f64,
    pub imag_residual: f64,
    pub abs_err: f64,
    pub nodes: u64,
}

/// Inner-axis integrator with a kernel cache shared across outer nodes:
/// χ₂(w₂)·z₂^{−w₂} depends only on y₂, so only the joint gamma is
/// recomputed per (outer, inner) node pair.
struct InnerAxis<'a> {
    spec: &'a BivariateFoxHSpec,
    sigma2: f64,
    ln_z2: f64,
    half_height: f64,
    rel_tol: f64,
    budget: u64,
    init: usize,
    cache: HashMap<u64, Complex64>,
    nodes: u64,
}

impl InnerAxis<'_> {
    fn eval(&mut self, w1: Complex64, epsabs: f64) -> Result<Complex64> {
        let spec = self.spec;
        let sigma2 = self.sigma2;
        let ln_z2 = self.ln_z2;
        let cache = &mut self.cache;
        let mut f = |y2: f64| -> Result<Complex64> {
            let w2 = Complex64::new(sigma2, y2);
            let key = y2.to_bits();
            let base = match cache.get(&key) {
                Some(v) => *v,
                None => {
                    let v = spec.kernel2.ln_kernel(w2)? - w2 * ln_z2;
                    cache.insert(key, v);
                    v
                }
            };
            Ok((base + ln_joint(spec, w1, w2)?).exp())
        };
        let q = integrate_adaptive(
            &mut f,
            -self.half_height,
            self.half_height,
            epsabs,
            self.rel_tol,
            self.budget,
            self.init,
            0.0,
            "bivariate Fox H inner axis",
        )
        .map_err(|e| match e {
            Error::Convergence { context, nodes, .. } => Error::Convergence {
                context,
                axis: Some(Axis::Inner),
                nodes,
            },
            other => other,
        })?;
        self.nodes += q.nodes;
        Ok(q.value)
    }
}

/// Evaluate the bivariate H-function with nested adaptive quadrature
/// (outer = first axis).
pub fn eval_bivariate_fox_h(
    spec: &BivariateFoxHSpec,
    z1: f64,
    z2: f64,
    contours: &(ContourSpec, ContourSpec),
) -> Result<f64> {
    eval_bivariate_fox_h_detailed(spec, z1, z2, contours).map(|e| e.value)
}

pub fn eval_bivariate_fox_h_detailed(
    spec: &BivariateFoxHSpec,
    z1: f64,
    z2: f64,
    contours: &(ContourSpec, ContourSpec),
) -> Result<BivariateEval> {
    if !(z1 > 0.0 && z2 > 0.0) {
        return Err(Error::domain(format!(
            "bivariate H-function arguments must be positive, got ({z1}, {z2})"
        )));
    }
    spec.validate()?;
    let (c1, c2) = contours;
    let two_pi = 2.0 * std::f64::consts::PI;

    // Separable case: no joint coupling, the double integral factors.
    if spec.joint.is_empty() {
        let e1 = crate::mellin::foxh::eval_fox_h_detailed(&spec.kernel1, z1, c1)?;
        let e2 = crate::mellin::foxh::eval_fox_h_detailed(&spec.kernel2, z2, c2)?;
        return Ok(BivariateEval {
            value: e1.value * e2.value,
            imag_residual: e1.imag_residual.max(e2.imag_residual),
            abs_err: (e1.abs_err * e2.value.abs()) + (e2.abs_err * e1.value.abs()),
            nodes: e1.nodes + e2.nodes,
        });
    }

    let ln_z1 = z1.ln();
    let ln_z2 = z2.ln();
    let sigma1 = c1.sigma;

    let inner_init = (c2.half_height * (1.0 + ln_z2.abs())).ceil() as usize;
    let mut inner = InnerAxis {
        spec,
        sigma2: c2.sigma,
        ln_z2,
        half_height: c2.half_height,
        rel_tol: c2.rel_tol / 3.0,
        budget: c2.max_nodes.max(30_000),
        init: inner_init.clamp(8, 2048),
        cache: HashMap::new(),
        nodes: 0,
    };

    // Center probe fixes the absolute-tolerance floor for inner integrals.
    let center = inner.eval(Complex64::new(sigma1, 0.0), f64::MIN_POSITIVE)?;
    let inner_epsabs = (c2.rel_tol / 30.0) * center.norm().max(f64::MIN_POSITIVE);

    // Outer magnitude probe for the outer absolute floor.
    let mut peak = center.norm()
        * (spec.kernel1.ln_kernel(Complex64::new(sigma1, 0.0))?
            - Complex64::new(sigma1, 0.0) * ln_z1)
            .exp()
            .norm();
    for i in 1..=4 {
        let y = c1.half_height * i as f64 / 4.0;
        for sign in [-1.0, 1.0] {
            let w1 = Complex64::new(sigma1, sign * y);
            let iv = inner.eval(w1, inner_epsabs)?;
            let v = (spec.kernel1.ln_kernel(w1)? - w1 * ln_z1).exp() * iv;
            peak = peak.max(v.norm());
        }
    }
    let outer_epsabs = c1.rel_tol * peak.max(f64::MIN_POSITIVE);

    let outer_init = ((c1.half_height * ln_z1.abs().max(0.5)) / 3.0).ceil() as usize;
    let outer_init = outer_init.clamp(8, 2048);
    let mut f_outer = |y1: f64| -> Result<Complex64> {
        let w1 = Complex64::new(sigma1, y1);
        let iv = inner.eval(w1, inner_epsabs)?;
        let outer_factor = (spec.kernel1.ln_kernel(w1)? - w1 * ln_z1).exp();
        Ok(outer_factor * iv)
    };
    // The outer integrand inherits the inner integrals' relative tolerance
    // as irreducible noise; refining past that floor cannot converge.
    let q = integrate_adaptive(
        &mut f_outer,
        -c1.half_height,
        c1.half_height,
        outer_epsabs,
        c1.rel_tol,
        c1.max_nodes,
        outer_init,
        c2.rel_tol / 6.0,
        "bivariate Fox H outer axis",
    )
    .map_err(|e| match e {
        Error::Convergence { context, axis, nodes } => Error::Convergence {
            context,
            axis: Some(axis.unwrap_or(Axis::Outer)),
            nodes,
        },
        other => other,
    })?;
    let nodes_total = q.nodes + inner.nodes;

    let raw = q.value / (two_pi * two_pi);
    let noise_floor = (c2.rel_tol / 6.0 + 1e-11) * q.sum_abs / (two_pi * two_pi);
    if raw.im.abs() > (c1.rel_tol * raw.re.abs()).max(noise_floor) {
        return Err(Error::Convergence {
            context: format!(
                "bivariate imaginary residual {:.3e} exceeds tolerance (value {:.3e})",
                raw.im, raw.re
            ),
            axis: Some(Axis::Outer),
            nodes: nodes_total,
        });
    }
    Ok(BivariateEval {
        value: raw.re,
        imag_residual: raw.im.abs(),
        abs_err: q.abs_err / (two_pi * two_pi),
        nodes: nodes_total,
    })
}
