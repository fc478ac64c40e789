//! Property-based invariants and derivation-consistency oracles.

use proptest::prelude::*;

use uwsec::channels::{reference, AlphaMuParams, EggParams};
use uwsec::e2e::{cdf_gamma_eq_detailed, gamma_eq, LinkPair, RelayConfig};
use uwsec::mellin::{choose_contour, eval_fox_h_detailed, gamma_real, FoxHSpec, GammaTerm};
use uwsec::secrecy::{SecrecyConfig, ThresholdBase};
use uwsec::EvalOptions;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_eq_respects_both_upper_bounds(
        g1 in 0.0..1e6f64,
        g2 in 0.0..1e6f64,
        c in 1e-6..1e6f64,
    ) {
        let v = gamma_eq(g1, g2, c);
        prop_assert!(v >= 0.0);
        prop_assert!(v <= g1 + 1e-12);
        prop_assert!(v <= g1 * g2 / c + 1e-12);
    }

    #[test]
    fn secrecy_threshold_at_least_one(rs in 0.0..20.0f64) {
        let n = SecrecyConfig::new(rs, ThresholdBase::Natural).unwrap().theta();
        let b = SecrecyConfig::new(rs, ThresholdBase::Binary).unwrap().theta();
        prop_assert!(n >= 1.0);
        prop_assert!(b >= 1.0);
        if rs == 0.0 {
            prop_assert_eq!(n, 1.0);
            prop_assert_eq!(b, 1.0);
        }
    }

    #[test]
    fn alpha_mu_reference_cdf_is_a_cdf(
        alpha in 0.8..3.0f64,
        mu in 0.5..4.0f64,
        mean in 0.1..100.0f64,
        g1 in 1e-3..500.0f64,
        g2 in 1e-3..500.0f64,
    ) {
        let p = AlphaMuParams::new(alpha, mu, mean).unwrap();
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let flo = reference::alpha_mu_cdf(&p, lo).unwrap();
        let fhi = reference::alpha_mu_cdf(&p, hi).unwrap();
        prop_assert!((0.0..=1.0).contains(&flo));
        prop_assert!((0.0..=1.0).contains(&fhi));
        prop_assert!(flo <= fhi + 1e-12);
    }

    #[test]
    fn egg_reference_ccdf_is_monotone_decreasing(
        omega in 0.0..1.0f64,
        g1 in 1e-3..200.0f64,
        g2 in 1e-3..200.0f64,
    ) {
        let p = EggParams::new(omega, 0.33, 1.43, 1.18, 17.2, 1, 10.0).unwrap();
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let clo = reference::egg_ccdf(&p, lo).unwrap();
        let chi = reference::egg_ccdf(&p, hi).unwrap();
        prop_assert!((0.0..=1.0).contains(&clo));
        prop_assert!(chi <= clo + 1e-12);
    }
}

/// ∫₀^∞ z^t (z+γ)^{−s} dz by direct quadrature on the original variable,
/// with an analytic power-law tail correction beyond the cutoff.
fn beta_integral_quadrature(t: f64, s: f64, gamma: f64) -> f64 {
    let cutoff = gamma * 1e6;
    let f = |z: f64| z.powf(t) * (z + gamma).powf(-s);
    // Composite Simpson on a power-substituted variable to soften both the
    // origin and the long tail: z = cutoff·u^8.
    let n = 400_000;
    let h = 1.0 / n as f64;
    let g = |u: f64| {
        if u == 0.0 {
            0.0
        } else {
            let z = cutoff * u.powi(8);
            f(z) * 8.0 * cutoff * u.powi(7)
        }
    };
    let mut acc = g(0.0) + g(1.0);
    for i in 1..n {
        acc += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let head = acc * h / 3.0;
    // Tail: ∫_cutoff^∞ z^{t−s} (1+γ/z)^{−s} dz ≈ cutoff^{t−s+1}/(s−t−1).
    let tail = cutoff.powf(t - s + 1.0) / (s - t - 1.0);
    head + tail
}

#[test]
fn beta_integral_identity_matches_gamma_form() {
    // ∫₀^∞ z^t (z+γ)^{−s} dz = γ^{t−s+1} B(t+1, s−t−1) inside the
    // convergence region t > −1, s − t > 1. This is the identity the
    // bivariate kernels are built on.
    let beta = |a: f64, b: f64| {
        gamma_real(a).unwrap() * gamma_real(b).unwrap() / gamma_real(a + b).unwrap()
    };
    // Frozen independent anchors for two sample triples.
    let cases: [(f64, f64, f64, f64); 2] = [
        (0.3, 2.1, 0.7, 1.32815011822605040),
        (1.2, 4.0, 3.0, 0.023673523790349087),
    ];
    for (t, s, g, anchor) in cases {
        let closed = g.powf(t - s + 1.0) * beta(t + 1.0, s - t - 1.0);
        assert!(
            ((closed - anchor) / anchor).abs() < 1e-13,
            "closed form vs anchor: {closed} vs {anchor}"
        );
        let quad = beta_integral_quadrature(t, s, g);
        assert!(
            ((quad - closed) / closed).abs() < 1e-6,
            "(t={t}, s={s}, g={g}): quadrature {quad} vs closed form {closed}"
        );
    }
    // A few more points across the region.
    for (t, s, g) in [(0.0f64, 1.5f64, 2.0f64), (2.5, 5.2, 0.4), (0.7, 3.3, 11.0)] {
        let closed = g.powf(t - s + 1.0) * beta(t + 1.0, s - t - 1.0);
        let quad = beta_integral_quadrature(t, s, g);
        assert!(
            ((quad - closed) / closed).abs() < 1e-6,
            "(t={t}, s={s}, g={g}): {quad} vs {closed}"
        );
    }
}

#[test]
fn returned_values_are_real_within_tolerance() {
    // The realness contract: imaginary residual of each contour integral
    // stays below the working tolerance times the value, for the spec
    // shapes produced by the channel and end-to-end layers.
    let p = AlphaMuParams::new(1.6, 1.5, 10.0).unwrap();
    let h = p.h_alpha();
    let specs: Vec<(FoxHSpec, f64)> = vec![
        // CDF kernel at a representative argument.
        (
            FoxHSpec::new(
                1,
                1,
                vec![GammaTerm::new(1.0, 1.0)],
                vec![GammaTerm::new(p.mu, 1.0 / h), GammaTerm::new(0.0, 1.0)],
            )
            .unwrap(),
            5.0 * p.big_lambda(),
        ),
        // EGG CCDF generalized-Gamma kernel.
        (
            FoxHSpec::new(
                2,
                0,
                vec![GammaTerm::new(1.0, 1.0)],
                vec![GammaTerm::new(0.0, 1.0), GammaTerm::new(1.43, 1.0 / 17.2)],
            )
            .unwrap(),
            0.4,
        ),
        // Fixed-gain expectation kernel.
        (
            FoxHSpec::new(
                2,
                1,
                vec![GammaTerm::new(0.0, 1.0)],
                vec![
                    GammaTerm::new(0.0, 1.0),
                    GammaTerm::new(p.mu - 1.0 / h, 1.0 / h),
                ],
            )
            .unwrap(),
            p.big_lambda(),
        ),
    ];
    for (spec, z) in specs {
        let contour = choose_contour(&spec, z).unwrap();
        let e = eval_fox_h_detailed(&spec, z, &contour).unwrap();
        assert!(
            e.imag_residual <= contour.rel_tol * e.value.abs().max(1e-12),
            "imag residual {} vs value {}",
            e.imag_residual,
            e.value
        );
    }
    // Bivariate route: diagnostics carry the worst imaginary residual.
    let links = LinkPair::new(p, EggParams::new(0.21, 0.33, 1.43, 1.18, 17.2, 1, 10.0).unwrap())
        .unwrap();
    let relay = RelayConfig::ExplicitC { c: 10.0 };
    let opts = EvalOptions::default();
    let (v, diag) = cdf_gamma_eq_detailed(&links, &relay, 2.0, &opts).unwrap();
    assert!(v.is_finite());
    assert!(diag.max_imag_residual <= 1e-5, "residual {}", diag.max_imag_residual);
}
