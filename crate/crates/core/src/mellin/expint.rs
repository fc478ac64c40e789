//! Exponential integrals: E₁, Ei, the integer-order Eₙ family and the
//! generalized real-order E_ν needed by the thermally-uniform special case.

use crate::error::{Error, Result};
use crate::mellin::gamma::{gamma_real, ln_gamma_real, upper_gamma};

const EULER_GAMMA: f64 = 0.5772156649015328606065121;
const EPS: f64 = 1e-16;
const ITMAX: usize = 400;

/// E₁(x) for x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("E1 requires x > 0, got {x}")));
    }
    if x <= 1.0 {
        // −γ − ln x + Σ (−1)^{k+1} x^k / (k·k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..=ITMAX {
            term *= -x / k as f64;
            let del = -term / k as f64;
            sum += del;
            if del.abs() < sum.abs().max(1.0) * EPS {
                break;
            }
        }
        Ok(-EULER_GAMMA - x.ln() + sum)
    } else {
        en_continued_fraction(1.0, x)
    }
}

/// Ei(x) for x ≠ 0. Negative arguments use Ei(−x) = −E₁(x).
pub fn exp_integral_ei(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::domain("Ei undefined at x = 0".to_string()));
    }
    if x < 0.0 {
        return Ok(-exp_integral_e1(-x)?);
    }
    if x < 40.0 {
        // γ + ln x + Σ x^k / (k·k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..=ITMAX {
            term *= x / k as f64;
            let del = term / k as f64;
            sum += del;
            if del < sum.abs() * EPS {
                break;
            }
        }
        Ok(EULER_GAMMA + x.ln() + sum)
    } else {
        // Asymptotic e^x/x Σ k!/x^k, truncated at the smallest term.
        let mut sum = 1.0;
        let mut term = 1.0;
        for k in 1..=ITMAX {
            let next = term * k as f64 / x;
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            if term < sum * EPS {
                break;
            }
        }
        Ok(x.exp() / x * sum)
    }
}

/// Eₙ(x) for integer n ≥ 1 and x > 0.
pub fn exp_integral_en(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("En requires n >= 1".to_string()));
    }
    if !(x > 0.0) {
        return Err(Error::domain(format!("En requires x > 0, got {x}")));
    }
    if x > 1.0 {
        return en_continued_fraction(n as f64, x);
    }
    // Series with the digamma-bearing logarithmic term (integer order).
    let nm1 = n as i64 - 1;
    let mut ans = if nm1 != 0 {
        1.0 / nm1 as f64
    } else {
        -x.ln() - EULER_GAMMA
    };
    let mut fact = 1.0;
    for i in 1..=ITMAX as i64 {
        fact *= -x / i as f64;
        let del = if i != nm1 {
            -fact / (i - nm1) as f64
        } else {
            // ψ(n) term
            let mut psi = -EULER_GAMMA;
            for ii in 1..=nm1 {
                psi += 1.0 / ii as f64;
            }
            fact * (-x.ln() + psi)
        };
        ans += del;
        if del.abs() < ans.abs() * EPS {
            return Ok(ans);
        }
    }
    Err(Error::Convergence {
        context: format!("En series (n={n}, x={x})"),
        axis: None,
        nodes: ITMAX as u64,
    })
}

/// Generalized exponential integral E_ν(x) = ∫₁^∞ e^{−xt} t^{−ν} dt for
/// real ν and x > 0, via E_ν(x) = x^{ν−1} Γ(1−ν, x).
pub fn exp_integral_e_nu(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("E_nu requires x > 0, got {x}")));
    }
    let near_int = (nu - nu.round()).abs() < 1e-9 && nu.round() >= 1.0;
    if near_int {
        return exp_integral_en(nu.round() as u32, x);
    }
    if x > 1.0 {
        return en_continued_fraction(nu, x);
    }
    if nu < 1.0 {
        // Γ(1−ν, x) with positive order is cheap and well conditioned.
        return Ok(x.powf(nu - 1.0) * upper_gamma(1.0 - nu, x)?);
    }
    // Small-x series for non-integer ν:
    // E_ν(x) = Γ(1−ν) x^{ν−1} − Σ_k (−x)^k / (k! (k + 1 − ν))
    // Γ(1−ν) for ν > 1 via reflection in log space.
    let one_m_nu = 1.0 - nu;
    let gamma_1m_nu = if one_m_nu > 0.0 {
        gamma_real(one_m_nu)?
    } else {
        // Γ(y) = π / (sin(πy) Γ(1−y)) for y < 0 non-integer.
        std::f64::consts::PI
            / ((std::f64::consts::PI * one_m_nu).sin() * (ln_gamma_real(nu)?).exp())
    };
    let mut sum = 1.0 / (1.0 - nu);
    let mut term = 1.0;
    for k in 1..=ITMAX {
        term *= -x / k as f64;
        let del = term / (k as f64 + 1.0 - nu);
        sum += del;
        if del.abs() < sum.abs().max(1e-30) * EPS {
            break;
        }
    }
    Ok(gamma_1m_nu * x.powf(nu - 1.0) - sum)
}

/// Modified-Lentz continued fraction for E_ν(x); converges for x ≳ 1.
fn en_continued_fraction(nu: f64, x: f64) -> Result<f64> {
    let fpmin = f64::MIN_POSITIVE / EPS;
    let mut b = x + nu;
    let mut c = 1.0 / fpmin;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=ITMAX {
        let a = -(i as f64) * (nu - 1.0 + i as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h * (-x).exp());
        }
    }
    Err(Error::Convergence {
        context: format!("En continued fraction (nu={nu}, x={x})"),
        axis: None,
        nodes: ITMAX as u64,
    })
}
