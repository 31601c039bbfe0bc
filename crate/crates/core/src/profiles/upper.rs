use super::analytic::{sweep_residual, AnalyticProfile};
use super::profile::{LeftTail, RightTail, DEFAULT_DEPTH};
use crate::charroots::RootData;
use crate::{Error, Result};
use num_traits::Float;

/// Lower bound accepted for `N[φ₊]` on the verification sweep.
pub const UPPER_SWEEP_TOL: f64 = -1e-12;
const SWEEP_POINTS: usize = 10_000;
const MAX_HALVINGS: u32 = 40;

/// `φ₊ = φ₂(max(t, t₀))` with `φ₂(t) = 1 - e^{λ₂t} + e^{rt}`; `t₀` is the
/// minimum of `φ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncriticalUpper {
    pub lambda2: f64,
    pub r: f64,
    pub t0: f64,
    /// `φ₂(t₀)`, the constant left state.
    pub floor: f64,
    /// Natural left end of the grid (the lower solution's, typically).
    pub left_end: f64,
}

fn t0_of(lambda2: f64, r: f64) -> f64 {
    ((-r).ln() - (-lambda2).ln()) / (lambda2 - r)
}

fn build(roots: &RootData, r: f64) -> Result<NoncriticalUpper> {
    let neg = roots.negative.ok_or(Error::NoNegativeRoots)?;
    let lambda2 = neg.lambda2;
    if !(r < lambda2 && r > neg.lambda1) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "decay rate must lie in (lambda1, lambda2)",
        });
    }
    let t0 = t0_of(lambda2, r);
    let floor = 1.0 - (lambda2 * t0).exp() + (r * t0).exp();
    Ok(NoncriticalUpper {
        lambda2,
        r,
        t0,
        floor,
        left_end: t0 - DEFAULT_DEPTH / roots.lambda,
    })
}

fn verify(up: &NoncriticalUpper, roots: &RootData) -> f64 {
    let (a, b) = (up.t0 - 5.0, up.t0 + roots.h + 20.0);
    sweep_residual(up, roots.epsilon, roots.h, a, b, SWEEP_POINTS).min
}

/// The upper solution for a given `r`, verified by a residual sweep over
/// `[t₀ - 5, t₀ + h + 20]`.
pub fn upper_noncritical(roots: &RootData, r: f64) -> Result<NoncriticalUpper> {
    let up = build(roots, r)?;
    let worst = verify(&up, roots);
    if !(worst >= UPPER_SWEEP_TOL) {
        return Err(Error::RejectedR { r, worst });
    }
    Ok(up)
}

/// First `r = λ₂ - δ₀ 2^{-k}` (`δ₀ = min(0.1, (λ₂ - λ₁)/2)`, `k ≤ 40`)
/// whose upper solution passes the sweep.
pub fn choose_r(roots: &RootData) -> Result<f64> {
    let neg = roots.negative.ok_or(Error::NoNegativeRoots)?;
    let delta0 = (0.5 * (neg.lambda2 - neg.lambda1)).min(0.1);
    if !(delta0 > 0.0) {
        return Err(Error::NoValidR { halvings: 0 });
    }
    for k in 0..=MAX_HALVINGS {
        let r = neg.lambda2 - delta0 * 0.5f64.powi(k as i32);
        if !(r < neg.lambda2) {
            break;
        }
        if upper_noncritical(roots, r).is_ok() {
            return Ok(r);
        }
    }
    Err(Error::NoValidR { halvings: MAX_HALVINGS })
}

impl NoncriticalUpper {
    /// Pins the left grid end, e.g. to share a grid with a lower solution.
    pub fn with_left_end(mut self, left_end: f64) -> Self {
        self.left_end = left_end;
        self
    }
}

impl AnalyticProfile for NoncriticalUpper {
    fn value(&self, t: f64) -> f64 {
        if t <= self.t0 {
            self.floor
        } else {
            1.0 - self.complement(t)
        }
    }

    fn d1(&self, t: f64) -> f64 {
        if t <= self.t0 {
            0.0
        } else {
            -self.lambda2 * (self.lambda2 * t).exp() + self.r * (self.r * t).exp()
        }
    }

    fn d2(&self, t: f64) -> f64 {
        if t <= self.t0 {
            0.0
        } else {
            let (l, r) = (self.lambda2, self.r);
            -l * l * (l * t).exp() + r * r * (r * t).exp()
        }
    }

    fn complement(&self, t: f64) -> f64 {
        let t = t.max(self.t0);
        (self.lambda2 * t).exp() - (self.r * t).exp()
    }

    fn left_tail(&self) -> LeftTail {
        LeftTail {
            rate: 0.0,
            coeff: self.floor,
        }
    }

    fn right_tail(&self) -> RightTail {
        RightTail::exponential(self.lambda2, 1.0)
    }

    fn natural_range(&self) -> (f64, f64) {
        (self.left_end, self.t0 + DEFAULT_DEPTH / self.lambda2.abs())
    }
}
