use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Target grid spacing.
pub const DEFAULT_STEP: f64 = 0.01;
/// Truncation depth in decay lengths on each side (`e^{-40} ≈ 4e-18`).
pub const DEFAULT_DEPTH: f64 = 40.0;
/// Grid endpoints are clamped to `[-GRID_CLAMP, GRID_CLAMP]`.
pub const GRID_CLAMP: f64 = 200.0;

const MONOTONE_SLACK: f64 = 1e-12;
const TAIL_CONTINUITY: f64 = 1e-6;

/// Uniform grid `t_i = t_min + i·step`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t_min: f64,
    pub step: f64,
    pub len: usize,
}

impl Grid {
    /// Grid covering `[t_min, t_max]` whose step divides the delay: `step =
    /// h/m` with `m = ⌈h/step_target⌉`, so `φ(t - h)` is an index shift.
    pub fn aligned(h: f64, step_target: f64, t_min: f64, t_max: f64) -> Result<Self> {
        if !(step_target > 0.0) || !step_target.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: step_target,
                reason: "grid step must be positive",
            });
        }
        let t_min = t_min.max(-GRID_CLAMP);
        let t_max = t_max.min(GRID_CLAMP);
        if !(t_max > t_min) {
            return Err(Error::InvalidProfile(format!("empty grid range [{t_min}, {t_max}]")));
        }
        let step = if h > 0.0 {
            h / (h / step_target - 1e-9).ceil().max(1.0)
        } else {
            step_target
        };
        let len = ((t_max - t_min) / step).ceil() as usize + 1;
        Ok(Self { t_min, step, len })
    }

    #[inline]
    pub fn t(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.step
    }

    pub fn t_max(&self) -> f64 {
        self.t(self.len - 1)
    }

    /// `h / step` as an integer, or `NonalignedGrid`.
    pub fn delay_steps(&self, h: f64) -> Result<usize> {
        let m = h / self.step;
        let r = m.round();
        if (m - r).abs() > 1e-9 * m.max(1.0) {
            return Err(Error::NonalignedGrid { h, step: self.step });
        }
        Ok(r as usize)
    }

    /// Same step and origin lattice, extended by `left` / `right` points.
    pub fn extended(&self, left: usize, right: usize) -> Self {
        Self {
            t_min: self.t_min - left as f64 * self.step,
            step: self.step,
            len: self.len + left + right,
        }
    }
}

/// `φ(t) ≈ coeff · e^{rate·t}` left of the grid. `rate = 0` means a
/// constant left state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeftTail {
    pub rate: f64,
    pub coeff: f64,
}

impl LeftTail {
    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if self.coeff == 0.0 {
            0.0
        } else {
            self.coeff * (self.rate * t).exp()
        }
    }

    /// The tail of `φ(· + shift)`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            rate: self.rate,
            coeff: self.coeff * (self.rate * shift).exp(),
        }
    }
}

/// `1 - φ(t) ≈ (coeff·t^poly + offset)·e^{rate·t}` right of the grid;
/// `offset` is only used when `poly = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RightTail {
    pub rate: f64,
    pub coeff: f64,
    pub poly: u8,
    pub offset: f64,
}

impl RightTail {
    pub fn exponential(rate: f64, coeff: f64) -> Self {
        Self {
            rate,
            coeff,
            poly: 0,
            offset: 0.0,
        }
    }

    /// `(a + b t) e^{rate t}` written as `(b, a)`.
    pub fn linear_exponential(rate: f64, slope: f64, offset: f64) -> Self {
        Self {
            rate,
            coeff: slope,
            poly: 1,
            offset,
        }
    }

    /// `(a, b)` with `1 - φ ≈ (a + b t) e^{rate t}`.
    #[inline]
    pub fn affine(&self) -> (f64, f64) {
        if self.poly == 0 {
            (self.coeff, 0.0)
        } else {
            (self.offset, self.coeff)
        }
    }

    /// `1 - φ(t)` from the tail model.
    #[inline]
    pub fn complement(&self, t: f64) -> f64 {
        let (a, b) = self.affine();
        if a == 0.0 && b == 0.0 {
            return 0.0;
        }
        (a + b * t) * (self.rate * t).exp()
    }

    /// The tail of `φ(· + shift)`.
    pub fn shifted(&self, shift: f64) -> Self {
        let e = (self.rate * shift).exp();
        let (a, b) = self.affine();
        if self.poly == 0 {
            Self::exponential(self.rate, a * e)
        } else {
            Self::linear_exponential(self.rate, b * e, (a + b * shift) * e)
        }
    }
}

/// A monotone profile: grid samples plus analytic tails on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub left: LeftTail,
    pub right: RightTail,
    /// `1 - φ(t_i)` carried with full relative precision where it is known
    /// (analytic samples, operator output). Near 1 the stored `values` only
    /// resolve the complement to an absolute `1e-16`, and the iteration
    /// amplifies absolute errors in the far right tail.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<Vec<f64>>,
}

impl Profile {
    pub fn new(grid: Grid, values: Vec<f64>, left: LeftTail, right: RightTail) -> Result<Self> {
        if values.len() != grid.len || grid.len < 4 {
            return Err(Error::InvalidProfile(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len
            )));
        }
        Ok(Self {
            grid,
            values,
            left,
            right,
            gap: None,
        })
    }

    /// Attaches precise complements `1 - φ(t_i)`.
    pub fn with_gap(mut self, gap: Vec<f64>) -> Result<Self> {
        if gap.len() != self.values.len() {
            return Err(Error::InvalidProfile(format!(
                "{} complements for {} samples",
                gap.len(),
                self.values.len()
            )));
        }
        self.gap = Some(gap);
        Ok(self)
    }

    /// `1 - φ(t_i)`, from the precise complements when present.
    #[inline]
    pub fn gap_at(&self, i: usize) -> f64 {
        match &self.gap {
            Some(g) => g[i],
            None => 1.0 - self.values[i],
        }
    }

    /// Samples `f` on `grid` with the given tails.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: Grid, f: F, left: LeftTail, right: RightTail) -> Result<Self> {
        let values = (0..grid.len).map(|i| f(grid.t(i))).collect();
        Self::new(grid, values, left, right)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, i: usize) -> f64 {
        self.grid.t(i)
    }

    pub fn t_min(&self) -> f64 {
        self.grid.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.grid.t_max()
    }

    pub fn step(&self) -> f64 {
        self.grid.step
    }

    /// `φ(t)`: tails outside the grid, linear interpolation inside.
    pub fn eval(&self, t: f64) -> f64 {
        let (i, frac) = match self.locate(t) {
            Located::Left => return self.left.eval(t),
            Located::Right => return (1.0 - self.right.complement(t)).clamp(0.0, 1.0),
            Located::Inside(i, frac) => (i, frac),
        };
        let v = &self.values;
        v[i] + frac * (v[i + 1] - v[i])
    }

    /// `φ(t)` with Catmull–Rom cubic interpolation inside the grid.
    pub fn eval_cubic(&self, t: f64) -> f64 {
        let (i, x) = match self.locate(t) {
            Located::Left => return self.left.eval(t),
            Located::Right => return (1.0 - self.right.complement(t)).clamp(0.0, 1.0),
            Located::Inside(i, frac) => (i, frac),
        };
        let v = &self.values;
        let p0 = if i == 0 {
            self.left.eval(self.t(0) - self.step())
        } else {
            v[i - 1]
        };
        let p3 = if i + 2 < v.len() {
            v[i + 2]
        } else {
            1.0 - self.right.complement(self.t(i + 1) + self.step())
        };
        let (p1, p2) = (v[i], v[i + 1]);
        let a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        let b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        let c = -0.5 * p0 + 0.5 * p2;
        ((a * x + b) * x + c) * x + p1
    }

    /// `1 - φ(t)`, from the tail model right of the grid.
    pub fn complement(&self, t: f64) -> f64 {
        match self.locate(t) {
            Located::Right => self.right.complement(t),
            _ => 1.0 - self.eval(t),
        }
    }

    fn locate(&self, t: f64) -> Located {
        let s = (t - self.grid.t_min) / self.grid.step;
        if s < 0.0 {
            return Located::Left;
        }
        let last = (self.len() - 1) as f64;
        if s > last {
            return Located::Right;
        }
        let i = (s.floor() as usize).min(self.len() - 2);
        Located::Inside(i, s - i as f64)
    }

    /// The profile `φ(· + shift)` resampled on the same grid.
    pub fn shifted(&self, shift: f64) -> Self {
        let values = (0..self.len()).map(|i| self.eval_cubic(self.t(i) + shift)).collect();
        Self {
            grid: self.grid,
            values,
            left: self.left.shifted(shift),
            right: self.right.shifted(shift),
            gap: None,
        }
    }

    /// Checks monotonicity, the `[0, 1]` range, and tail continuity.
    pub fn validate(&self) -> Result<()> {
        let v = &self.values;
        if let Some(i) = v.iter().position(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidProfile(format!(
                "value {} at t = {} outside [0, 1]",
                v[i],
                self.t(i)
            )));
        }
        if let Some(i) = (1..v.len()).find(|&i| v[i] < v[i - 1] - MONOTONE_SLACK) {
            return Err(Error::InvalidProfile(format!(
                "decreasing at t = {}: {} -> {}",
                self.t(i),
                v[i - 1],
                v[i]
            )));
        }
        let left_gap = (self.left.eval(self.t_min()) - v[0]).abs();
        let right_gap = (1.0 - self.right.complement(self.t_max()) - v[v.len() - 1]).abs();
        if left_gap > TAIL_CONTINUITY || right_gap > TAIL_CONTINUITY {
            return Err(Error::InvalidProfile(format!(
                "tail discontinuity: left {left_gap:e}, right {right_gap:e}"
            )));
        }
        Ok(())
    }

    /// Pointwise `sup |φ - ψ|` over the shared grid (same grid required).
    pub fn sup_distance(&self, other: &Profile) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

enum Located {
    Left,
    Right,
    Inside(usize, f64),
}
