use proptest::prelude::*;
use wavefront_core::charroots::{
    negative_roots, positive_root, psi, zero_state_roots, CriticalCurves, HALF_LN2, INV_E,
};
use wavefront_core::ModelParams;

fn params(h: f64, eps: f64) -> ModelParams {
    ModelParams::from_epsilon(h, eps).unwrap()
}

/// `max ψ` over `[-80, 0)` on a `1e-4` grid.
fn scan_max(eps: f64, h: f64) -> f64 {
    (1..=800_000)
        .map(|k| psi(-1e-4 * k as f64, eps, h))
        .fold(f64::NEG_INFINITY, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn zero_state_roots_are_vieta_consistent(eps in 1e-4f64..=0.25) {
        let (l, m) = zero_state_roots(&params(0.0, eps)).unwrap();
        prop_assert!(l <= m);
        prop_assert!((l * m * eps - 1.0).abs() <= 1e-12);
        prop_assert!(((l + m) * eps - 1.0).abs() <= 1e-12);
        for r in [l, m] {
            prop_assert!((eps * r * r - r + 1.0).abs() <= 1e-12 * r.powi(2).max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn negative_roots_iff_hump_reaches_zero(eps in 0.02f64..=0.25, h in 0.1f64..0.7) {
        let top = scan_max(eps, h);
        // too close to tangency for a 1e-4 scan to decide
        prop_assume!(top.abs() > 1e-7);
        let roots = negative_roots(&params(h, eps));
        prop_assert_eq!(roots.is_some(), top > 0.0, "max psi {:e}", top);
        if let Some(n) = roots {
            prop_assert!(n.lambda1 <= n.lambda2 && n.lambda2 < 0.0);
            for r in [n.lambda1, n.lambda2] {
                prop_assert!(psi(r, eps, h).abs() <= 1e-12 * (r * r).max(1.0));
            }
        }
        let p = positive_root(&params(h, eps));
        prop_assert!(p > 0.0 && psi(p, eps, h).abs() <= 1e-12 * (p * p).max(1.0));
    }

    #[test]
    fn sharp_curve_separates_clean_tails(h in HALF_LN2 + 1e-3..0.5336, eps in 0.01f64..=0.25) {
        let curves = CriticalCurves::new().unwrap();
        let sharp = curves.eps_sharp(h).unwrap();
        prop_assume!((eps - sharp).abs() > 1e-9);
        // negative roots always exist below 1/e; above it only for ε ≥ ε*(h)
        if h > INV_E {
            prop_assume!(eps > curves.eps_star(h).unwrap());
        }
        let n = negative_roots(&params(h, eps)).unwrap();
        prop_assert_eq!(eps >= sharp, n.lambda1 <= 2.0 * n.lambda2);
    }
}

#[test]
fn eps_star_increasing() {
    let curves = CriticalCurves::new().unwrap();
    let hs: Vec<f64> = (1..=100)
        .map(|i| INV_E + (curves.h1 - INV_E) * i as f64 / 100.0)
        .collect();
    let eps: Vec<f64> = hs.iter().map(|&h| curves.eps_star(h).unwrap()).collect();
    assert!(eps.windows(2).all(|w| w[1] > w[0]));
    assert!((eps[99] - 0.25).abs() < 1e-9);
}

#[test]
fn star_curve_is_the_tangency() {
    // on ε = ε*(h) the two negative roots merge
    let curves = CriticalCurves::new().unwrap();
    for h in [0.4, 0.45, 0.5, 0.55] {
        let eps = curves.eps_star(h).unwrap();
        assert!(negative_roots(&params(h, eps * (1.0 - 1e-6))).is_none());
        let above = negative_roots(&params(h, eps * (1.0 + 1e-6))).unwrap();
        assert!(above.lambda2 - above.lambda1 < 1e-2);
    }
}
