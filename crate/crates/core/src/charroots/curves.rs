use crate::math::bisect;
use crate::{Error, Result};
use num_traits::Float;

pub const INV_E: f64 = 0.367_879_441_171_442_3;
pub const HALF_LN2: f64 = 0.346_573_590_279_972_64;

const MONOTONICITY_GRID: usize = 1000;

/// `t ↦ (h(t), ε*(h(t)))` for `t ≥ 0`: the tangency (double root) curve.
pub fn star_parametric(t: f64) -> (f64, f64) {
    let r = (4.0 * t * t + 1.0).sqrt();
    let h = (2.0 * t + r) * (-1.0 - 2.0 * t / (1.0 + r)).exp();
    (h, t * h)
}

/// `t ↦ (h(t), ε#(h(t)))` for `t ∈ (-2, …]`: the `λ₁ = 2λ₂` curve, with
/// `t = λ₂` along it.
pub fn sharp_parametric(t: f64) -> (f64, f64) {
    let s = (2.0 * t + 4.0).max(0.0).sqrt();
    let h = -(2.0 + s).ln() / t;
    let eps = (t + 2.0 + s) / (t * t);
    (h, eps)
}

/// Defining equation of `h₁`: `2h² e^{1+√(1+4h²)-2h} - 1 - √(1+4h²)`.
fn h1_equation(h: f64) -> f64 {
    let r = (1.0 + 4.0 * h * h).sqrt();
    2.0 * h * h * (1.0 + r - 2.0 * h).exp() - 1.0 - r
}

/// The critical delays and the parameter ranges of both curves.
///
/// The truncated parameter endpoints (`t ≈ 0.4458` for `ε*`, `t ≈ -1.806`
/// for `ε#`) are recomputed as the solutions of `ε(t) = 1/4`, and
/// monotonicity of `h(t)` and `ε(t)` along both parametrisations is checked
/// on a grid when the curves are built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCurves {
    pub h1: f64,
    pub h0: f64,
    /// `t` with `ε*(h(t)) = 1/4`.
    pub star_t_end: f64,
    /// `t` with `ε#(h(t)) = 1/4`.
    pub sharp_t_end: f64,
}

impl CriticalCurves {
    pub fn new() -> Result<Self> {
        let h1 = bisect(h1_equation, 0.4, 0.7, 1e-15)?;
        let star_t_end = bisect(|t| star_parametric(t).1 - 0.25, 0.0, 1.0, 0.0)?;
        let sharp_t_end = bisect(|t| sharp_parametric(t).1 - 0.25, -2.0 + 1e-15, -1.5, 0.0)?;
        let h0 = sharp_parametric(sharp_t_end).0;
        check_monotone(star_parametric, 0.0, star_t_end)?;
        check_monotone(sharp_parametric, -2.0 + 1e-9, sharp_t_end)?;
        Ok(Self {
            h1,
            h0,
            star_t_end,
            sharp_t_end,
        })
    }

    /// `ε*(h)` on `(1/e, h₁]`.
    pub fn eps_star(&self, h: f64) -> Result<f64> {
        let top = star_parametric(self.star_t_end).0;
        if !(h > INV_E && h <= self.h1.max(top) + 1e-12) {
            return Err(Error::OutsideCurveDomain {
                h,
                lo: INV_E,
                hi: self.h1,
            });
        }
        if h >= top {
            return Ok(0.25);
        }
        let t = bisect(|t| star_parametric(t).0 - h, 0.0, self.star_t_end, 0.0)?;
        Ok(star_parametric(t).1)
    }

    /// `ε#(h)` on `(½ ln 2, h₀]`.
    pub fn eps_sharp(&self, h: f64) -> Result<f64> {
        if !(h > HALF_LN2 && h <= self.h0 + 1e-12) {
            return Err(Error::OutsideCurveDomain {
                h,
                lo: HALF_LN2,
                hi: self.h0,
            });
        }
        if h >= self.h0 {
            return Ok(0.25);
        }
        let lo = -2.0 + 1e-15;
        let t = if sharp_parametric(lo).0 >= h {
            lo
        } else {
            bisect(|t| sharp_parametric(t).0 - h, lo, self.sharp_t_end, 0.0)?
        };
        Ok(sharp_parametric(t).1)
    }

    /// Largest admissible speed: `None` when unbounded (`h ≤ 1/e`) or when
    /// no front exists at all (`h > h₁`); use [`Self::fronts_possible`] to
    /// tell the two apart.
    pub fn c_star(&self, h: f64) -> Option<f64> {
        if h <= INV_E || h > self.h1 {
            None
        } else {
            self.eps_star(h).ok().map(|e| 1.0 / e.sqrt())
        }
    }

    pub fn fronts_possible(&self, h: f64) -> bool {
        h >= 0.0 && h <= self.h1
    }

    /// `c#(h)`; `f64::INFINITY` for `h ≤ ½ ln 2`.
    pub fn c_sharp(&self, h: f64) -> f64 {
        if h <= HALF_LN2 {
            f64::INFINITY
        } else if h <= self.h0 {
            self.eps_sharp(h).map_or(2.0, |e| 1.0 / e.sqrt())
        } else {
            2.0
        }
    }
}

fn check_monotone(map: fn(f64) -> (f64, f64), a: f64, b: f64) -> Result<()> {
    let mut prev = map(a);
    for i in 1..=MONOTONICITY_GRID {
        let t = a + (b - a) * i as f64 / MONOTONICITY_GRID as f64;
        let cur = map(t);
        if !(cur.0 > prev.0 && cur.1 > prev.1) {
            return Err(Error::RootFinding("critical-curve parametrisation is not monotone"));
        }
        prev = cur;
    }
    Ok(())
}

/// `ε*(h)` on `(1/e, h₁]`.
pub fn eps_star(h: f64) -> Result<f64> {
    CriticalCurves::new()?.eps_star(h)
}

/// `ε#(h)` on `(½ ln 2, h₀]`.
pub fn eps_sharp(h: f64) -> Result<f64> {
    CriticalCurves::new()?.eps_sharp(h)
}

/// `(h₁, h₀)`.
pub fn critical_constants() -> Result<(f64, f64)> {
    let c = CriticalCurves::new()?;
    Ok((c.h1, c.h0))
}
