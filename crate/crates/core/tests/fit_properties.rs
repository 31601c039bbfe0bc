use proptest::prelude::*;
use wavefront_core::analysis::{fit_minus_tail, fit_plus_tail, TailRates};
use wavefront_core::charroots::{CriticalCurves, INV_E};
use wavefront_core::pipeline::{solve_with, SolveOptions};
use wavefront_core::ModelParams;

const RATE_TOL: f64 = 0.02;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// A secondary rate is only identifiable when the window spans at least
/// five decay lengths of it relative to the next correction, `e^{2·leading·t}`.
fn resolvable(secondary: f64, next: f64, window: (f64, f64)) -> bool {
    (next - secondary).abs() * (window.1 - window.0) >= 5.0 && next.abs() > secondary.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fitted_rates_match_roots(h in 0.0f64..0.5, c in 2.05f64..4.0) {
        let curves = CriticalCurves::new().unwrap();
        if h > INV_E {
            prop_assume!(c < 0.95 * curves.c_star(h).unwrap());
        }
        let params = ModelParams::new(h, c).unwrap();
        let out = solve_with(&curves, &params, &SolveOptions::default()).unwrap();
        prop_assert!(out.report.converged);
        prop_assert!(out.fit_errors.is_empty(), "{:?}", out.fit_errors);
        let (plus, minus) = (out.plus_fit.unwrap(), out.minus_fit.unwrap());
        let roots = out.roots;
        prop_assert!(rel(plus.fitted_rate, roots.lambda2().unwrap()) <= RATE_TOL, "plus {plus:?}");
        prop_assert!(rel(minus.fitted_rate, roots.lambda) <= RATE_TOL, "minus {minus:?}");
        if let Some(s) = plus.secondary_rate {
            let l1 = roots.lambda1().unwrap();
            if resolvable(l1, 2.0 * roots.lambda2().unwrap(), plus.window) {
                prop_assert!(rel(s, l1) <= RATE_TOL, "plus secondary {s} vs {l1}");
            }
        }
        if let Some(s) = minus.secondary_rate {
            if resolvable(roots.mu, 2.0 * roots.lambda, minus.window) {
                prop_assert!(rel(s, roots.mu) <= RATE_TOL, "minus secondary {s} vs {}", roots.mu);
            }
        }

        // fits are pure
        let rates = TailRates::plus(&roots, out.regime.plus_regime.unwrap()).unwrap();
        prop_assert_eq!(fit_plus_tail(&out.profile, &rates).unwrap(), plus);
        let rates = TailRates::minus(&roots, out.regime.minus_regime.unwrap());
        prop_assert_eq!(fit_minus_tail(&out.profile, &rates).unwrap(), minus);
    }
}
