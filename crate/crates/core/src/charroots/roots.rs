use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::math::{bisect, expand_until, newton_polish};
use crate::{Error, ModelParams, Result};

/// `|ψ|` at the hump below which the two negative roots are reported as one
/// double root.
pub const DOUBLE_ROOT_PSI_TOL: f64 = 1e-13;

/// `ψ(z) = ε z² - z - e^{-z h}`.
#[inline]
pub fn psi(z: f64, epsilon: f64, h: f64) -> f64 {
    epsilon * z * z - z - (-z * h).exp()
}

/// `∂ψ/∂z = 2 ε z - 1 + h e^{-z h}`.
#[inline]
pub fn psi_prime(z: f64, epsilon: f64, h: f64) -> f64 {
    2.0 * epsilon * z - 1.0 + h * (-z * h).exp()
}

#[inline]
fn psi_second(z: f64, epsilon: f64, h: f64) -> f64 {
    2.0 * epsilon - h * h * (-z * h).exp()
}

/// The two negative zeros of `ψ`, `λ₁ ≤ λ₂ < 0`.
///
/// `lambda1` is `f64::NEG_INFINITY` when `h = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativeRoots {
    pub lambda1: f64,
    pub lambda2: f64,
    /// `λ₁ = λ₂` (tangency on the `ε*(h)` curve).
    pub double: bool,
}

/// Characteristic data of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootData {
    pub epsilon: f64,
    pub h: f64,
    /// Smaller root of `ε z² - z + 1`.
    pub lambda: f64,
    /// Larger root of `ε z² - z + 1`.
    pub mu: f64,
    pub negative: Option<NegativeRoots>,
    /// The positive zero of `ψ`.
    pub pos_root: f64,
}

impl RootData {
    pub fn compute(params: &ModelParams) -> Result<Self> {
        let (lambda, mu) = zero_state_roots(params)?;
        Ok(Self {
            epsilon: params.epsilon,
            h: params.h,
            lambda,
            mu,
            negative: negative_roots(params),
            pos_root: positive_root(params),
        })
    }

    /// Root data on the critical curve: the hump of `ψ` on `(-∞, 0)` is used
    /// as the double root `λ₁ = λ₂`, even when rounding or a finite
    /// classification band leaves `ψ` there slightly off zero.
    pub fn compute_double(params: &ModelParams) -> Result<Self> {
        let mut data = Self::compute(params)?;
        let (zc, _) = psi_hump(params).ok_or(Error::NoNegativeRoots)?;
        data.negative = Some(NegativeRoots {
            lambda1: zc,
            lambda2: zc,
            double: true,
        });
        Ok(data)
    }

    pub fn lambda1(&self) -> Option<f64> {
        self.negative.map(|n| n.lambda1)
    }

    pub fn lambda2(&self) -> Option<f64> {
        self.negative.map(|n| n.lambda2)
    }

    pub fn require_lambda2(&self) -> Result<f64> {
        self.lambda2().ok_or(Error::NoNegativeRoots)
    }
}

/// Roots `0 < λ ≤ μ` of `ε z² - z + 1 = 0`, by the cancellation-free form of
/// the quadratic formula.
pub fn zero_state_roots(params: &ModelParams) -> Result<(f64, f64)> {
    let eps = params.epsilon;
    if !(eps > 0.0 && eps <= 0.25) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: eps,
            reason: "zero-state roots are real only for epsilon in (0, 0.25]",
        });
    }
    let s = (1.0 - 4.0 * eps).max(0.0).sqrt();
    let lambda = 2.0 / (1.0 + s);
    let mu = (1.0 + s) / (2.0 * eps);
    Ok((lambda, mu))
}

/// Local maximum `(z_c, ψ(z_c))` of `ψ` on `(-∞, 0)`, if any.
///
/// `ψ'` is convex (`ψ''' > 0`) and tends to `+∞` at `-∞`, so `ψ` rises to a
/// single hump and falls; the negative zeros exist iff the hump is `≥ 0`.
/// For `h = 0` there is no hump (`ψ` decreases on `(-∞, 0)`).
pub fn psi_hump(params: &ModelParams) -> Option<(f64, f64)> {
    let (eps, h) = (params.epsilon, params.h);
    if h <= 0.0 {
        return None;
    }
    // ψ'' = 0 at the minimum of ψ'
    let z_inflect = (h * h / (2.0 * eps)).ln() / h;
    let upper = z_inflect.min(0.0);
    if psi_prime(upper, eps, h) >= 0.0 {
        return None;
    }
    let dpsi = |z: f64| psi_prime(z, eps, h);
    let lower = expand_until(upper, -1.0, |z| dpsi(z) > 0.0).ok()?;
    let zc = bisect(dpsi, lower, upper, 0.0).ok()?;
    let zc = newton_polish(dpsi, |z| psi_second(z, eps, h), zc, lower, upper, 4);
    Some((zc, psi(zc, eps, h)))
}

/// The negative zeros `λ₁ ≤ λ₂ < 0` of `ψ`, or `None` when they do not exist.
pub fn negative_roots(params: &ModelParams) -> Option<NegativeRoots> {
    let (eps, h) = (params.epsilon, params.h);
    if h == 0.0 {
        // ε z² - z - 1 = 0
        let lambda2 = -2.0 / (1.0 + (1.0 + 4.0 * eps).sqrt());
        return Some(NegativeRoots {
            lambda1: f64::NEG_INFINITY,
            lambda2,
            double: false,
        });
    }
    let (zc, top) = psi_hump(params)?;
    if top < -DOUBLE_ROOT_PSI_TOL {
        return None;
    }
    if top <= DOUBLE_ROOT_PSI_TOL {
        return Some(NegativeRoots {
            lambda1: zc,
            lambda2: zc,
            double: true,
        });
    }
    let f = |z: f64| psi(z, eps, h);
    let df = |z: f64| psi_prime(z, eps, h);
    let far = expand_until(zc, -1.0, |z| f(z) < 0.0).ok()?;
    let l1 = bisect(f, far, zc, 0.0).ok()?;
    let l1 = newton_polish(f, df, l1, far, zc, 4);
    let l2 = bisect(f, zc, 0.0, 0.0).ok()?;
    let l2 = newton_polish(f, df, l2, zc, 0.0, 4);
    Some(NegativeRoots {
        lambda1: l1,
        lambda2: l2,
        double: false,
    })
}

/// The unique positive zero of `ψ`.
pub fn positive_root(params: &ModelParams) -> f64 {
    let (eps, h) = (params.epsilon, params.h);
    if h == 0.0 {
        return (1.0 + (1.0 + 4.0 * eps).sqrt()) / (2.0 * eps);
    }
    let f = |z: f64| psi(z, eps, h);
    // ψ(0) = -1 and ψ(z) ≥ ε z² - z - 1 for z > 0
    let hi = expand_until(0.0, 1.0 / eps, |z| f(z) > 0.0).unwrap_or(1e300);
    let z = bisect(f, 0.0, hi, 0.0).unwrap_or(hi);
    newton_polish(f, |z| psi_prime(z, eps, h), z, 0.0, hi, 4)
}
