use super::analytic::AnalyticProfile;
use super::profile::{LeftTail, RightTail, DEFAULT_DEPTH};
use crate::charroots::RootData;
use crate::math::{bisect, expand_until};
use crate::{Error, Result};
use num_traits::Float;

/// `φ₋(t) = α e^{λ(t-τ)}` for `t ≤ τ`, `1 - e^{λ₂t}` for `t ≥ τ`, with
/// `α = -λ₂/(λ-λ₂)` and `τ = ln(λ/(λ-λ₂))/λ₂` making the junction C¹.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncriticalLower {
    pub lambda: f64,
    pub lambda2: f64,
    pub tau: f64,
    pub amplitude: f64,
}

/// The noncritical lower solution. Requires `λ₁ < λ₂`.
pub fn lower_noncritical(roots: &RootData) -> Result<NoncriticalLower> {
    let neg = roots.negative.ok_or(Error::NoNegativeRoots)?;
    if neg.double || !(neg.lambda1 < neg.lambda2) {
        return Err(Error::InvalidParameter {
            name: "lambda2",
            value: neg.lambda2,
            reason: "noncritical lower solution needs distinct negative roots",
        });
    }
    let (lambda, lambda2) = (roots.lambda, neg.lambda2);
    let tau = (lambda / (lambda - lambda2)).ln() / lambda2;
    Ok(NoncriticalLower {
        lambda,
        lambda2,
        tau,
        amplitude: -lambda2 / (lambda - lambda2),
    })
}

impl NoncriticalLower {
    #[inline]
    fn left_exp(&self, t: f64) -> f64 {
        self.amplitude * (self.lambda * (t - self.tau)).exp()
    }
}

impl AnalyticProfile for NoncriticalLower {
    fn value(&self, t: f64) -> f64 {
        if t <= self.tau {
            self.left_exp(t)
        } else {
            -(self.lambda2 * t).exp_m1()
        }
    }

    fn d1(&self, t: f64) -> f64 {
        if t <= self.tau {
            self.lambda * self.left_exp(t)
        } else {
            -self.lambda2 * (self.lambda2 * t).exp()
        }
    }

    fn d2(&self, t: f64) -> f64 {
        if t <= self.tau {
            self.lambda * self.lambda * self.left_exp(t)
        } else {
            -self.lambda2 * self.lambda2 * (self.lambda2 * t).exp()
        }
    }

    fn complement(&self, t: f64) -> f64 {
        if t <= self.tau {
            1.0 - self.left_exp(t)
        } else {
            (self.lambda2 * t).exp()
        }
    }

    fn left_tail(&self) -> LeftTail {
        LeftTail {
            rate: self.lambda,
            coeff: self.amplitude * (-self.lambda * self.tau).exp(),
        }
    }

    fn right_tail(&self) -> RightTail {
        RightTail::exponential(self.lambda2, 1.0)
    }

    fn natural_range(&self) -> (f64, f64) {
        (
            self.tau - DEFAULT_DEPTH / self.lambda,
            self.tau + DEFAULT_DEPTH / self.lambda2.abs(),
        )
    }
}

/// `φ₋(t) = 0` for `t ≤ τ'`, `1 - (At + 1) e^{λ₂t}` beyond, where `τ' > 0`
/// solves `At + 1 = e^{-λ₂t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalLower {
    pub lambda: f64,
    pub lambda2: f64,
    pub a: f64,
    pub tau: f64,
}

/// Default factor over the admissible bound `A > (e^{-λ₂h} - 1)/h`.
pub const CRITICAL_A_FACTOR: f64 = 2.0;

/// The critical-speed lower solution with `A = 2 (e^{-λ₂h} - 1)/h`.
pub fn lower_critical(roots: &RootData) -> Result<CriticalLower> {
    lower_critical_scaled(roots, CRITICAL_A_FACTOR)
}

/// As [`lower_critical`] with `A = factor · (e^{-λ₂h} - 1)/h`, `factor > 1`.
pub fn lower_critical_scaled(roots: &RootData, factor: f64) -> Result<CriticalLower> {
    let lambda2 = roots.require_lambda2()?;
    let h = roots.h;
    if !(h > 0.0) {
        return Err(Error::InvalidParameter {
            name: "h",
            value: h,
            reason: "critical lower solution needs a positive delay",
        });
    }
    if !(factor > 1.0) {
        return Err(Error::InvalidParameter {
            name: "factor",
            value: factor,
            reason: "A must exceed (e^{-lambda2 h} - 1)/h",
        });
    }
    let a = factor * (-lambda2 * h).exp_m1() / h;
    // f < 0 on (0, τ'), f > 0 beyond; f(h) < 0 because A h > e^{-λ₂h} - 1.
    let f = |t: f64| (-lambda2 * t).exp_m1() - a * t;
    let hi = expand_until(h, h, |t| f(t) > 0.0)?;
    let tau = bisect(f, h, hi, 0.0)?;
    Ok(CriticalLower {
        lambda: roots.lambda,
        lambda2,
        a,
        tau,
    })
}

impl CriticalLower {
    #[inline]
    fn poly(&self, t: f64) -> f64 {
        self.a * t + 1.0
    }
}

impl AnalyticProfile for CriticalLower {
    fn value(&self, t: f64) -> f64 {
        if t <= self.tau {
            0.0
        } else {
            (1.0 - self.poly(t) * (self.lambda2 * t).exp()).max(0.0)
        }
    }

    fn d1(&self, t: f64) -> f64 {
        if t <= self.tau {
            0.0
        } else {
            -(self.lambda2 * t).exp() * (self.a + self.lambda2 * self.poly(t))
        }
    }

    fn d2(&self, t: f64) -> f64 {
        if t <= self.tau {
            0.0
        } else {
            let l2 = self.lambda2;
            -(l2 * t).exp() * (2.0 * self.a * l2 + l2 * l2 * self.poly(t))
        }
    }

    fn complement(&self, t: f64) -> f64 {
        if t <= self.tau {
            1.0
        } else {
            (self.poly(t) * (self.lambda2 * t).exp()).min(1.0)
        }
    }

    fn left_tail(&self) -> LeftTail {
        LeftTail {
            rate: self.lambda,
            coeff: 0.0,
        }
    }

    fn right_tail(&self) -> RightTail {
        RightTail::linear_exponential(self.lambda2, self.a, 1.0)
    }

    fn natural_range(&self) -> (f64, f64) {
        (
            self.tau - DEFAULT_DEPTH / self.lambda,
            self.tau + DEFAULT_DEPTH / self.lambda2.abs(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::analytic::{differential_residual, sweep_residual};
    use crate::ModelParams;

    fn az_roots() -> RootData {
        RootData::compute(&ModelParams::from_epsilon(0.0, 0.24).unwrap()).unwrap()
    }

    #[test]
    fn az_lower_junction() {
        let low = lower_noncritical(&az_roots()).unwrap();
        assert!((low.lambda - 5.0 / 3.0).abs() < 1e-14);
        assert!((low.lambda2 + 5.0 / 6.0).abs() < 1e-14);
        // τ = (6/5) ln(3/2)
        assert!((low.tau - 1.2 * 1.5f64.ln()).abs() < 1e-14);
        assert!((low.tau - 0.48656).abs() < 1e-5);
        let (l, r) = (low.value(low.tau - 1e-12), low.value(low.tau + 1e-12));
        assert!((l - r).abs() < 1e-11);
        let right_d1 = -low.lambda2 * (low.lambda2 * low.tau).exp();
        assert!((low.d1(low.tau) - right_d1).abs() < 1e-13);
        let p = low.sample_default(0.0, 0.01).unwrap();
        p.validate().unwrap();
    }

    #[test]
    fn noncritical_lower_inequality_is_strict() {
        for &(h, eps) in &[(0.0, 0.24), (0.3, 0.2), (0.5, 0.2), (0.36, 0.249)] {
            let roots = RootData::compute(&ModelParams::from_epsilon(h, eps).unwrap()).unwrap();
            let low = lower_noncritical(&roots).unwrap();
            let s = sweep_residual(&low, eps, h, low.tau - 10.0, low.tau + h + 10.0, 10_000);
            assert!(s.max < 0.0, "h={h} eps={eps}: max {} at {}", s.max, s.argmax);
        }
    }

    #[test]
    fn residual_at_end_of_delicate_interval() {
        // ρ(0) = -λ²(λ-λ₂)^{-2} e^{λ₂h} < 0 is the residual at τ + h.
        let (h, eps) = (0.3, 0.2);
        let roots = RootData::compute(&ModelParams::from_epsilon(h, eps).unwrap()).unwrap();
        let low = lower_noncritical(&roots).unwrap();
        let (l, l2) = (low.lambda, low.lambda2);
        let rho0 = -l * l / ((l - l2) * (l - l2)) * (l2 * h).exp();
        let n = differential_residual(&low, eps, h, low.tau + h);
        let expect = rho0;
        assert!(n < 0.0);
        assert!((n - expect).abs() < 1e-9, "{n} vs {expect}");
    }

    #[test]
    fn double_roots_rejected_by_noncritical() {
        let p = ModelParams::new(0.5, 2.0).unwrap();
        assert!(lower_noncritical(&RootData::compute(&ModelParams::new(0.7, 2.0).unwrap()).unwrap()).is_err());
        let d = RootData::compute_double(&p);
        if let Ok(d) = d {
            assert!(lower_noncritical(&d).is_err());
        }
    }

    #[test]
    fn critical_lower_shape() {
        let curves = crate::charroots::CriticalCurves::new().unwrap();
        let p = ModelParams::from_epsilon(curves.h1, 0.25).unwrap();
        let roots = RootData::compute_double(&p).unwrap();
        let low = lower_critical(&roots).unwrap();
        assert!(low.tau > p.h);
        assert!(low.value(low.tau).abs() < 1e-15);
        assert!(low.value(low.tau + 1e-9) < 1e-7);
        let mut prev = 0.0;
        for i in 0..10_000 {
            let t = low.tau + i as f64 * 0.005;
            let v = low.value(t);
            assert!(v >= prev);
            assert!(low.d1(t) >= 0.0);
            prev = v;
        }
        assert!(low.value(200.0) > 1.0 - 1e-12);
        // lower-solution inequality right of τ'
        let s = sweep_residual(&low, 0.25, p.h, low.tau + 1e-6, low.tau + 40.0, 10_000);
        assert!(s.max <= 1e-14, "max {} at {}", s.max, s.argmax);
        low.sample_default(p.h, 0.01).unwrap().validate().unwrap();
    }
}
