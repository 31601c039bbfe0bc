use super::profile::{Grid, LeftTail, Profile, RightTail};
use crate::Result;
use num_traits::Float;

/// A closed-form profile with piecewise-smooth derivatives.
///
/// `complement` must return `1 - φ(t)` without cancellation; the
/// differential residual depends on it deep in the right tail.
pub trait AnalyticProfile {
    fn value(&self, t: f64) -> f64;
    fn d1(&self, t: f64) -> f64;
    fn d2(&self, t: f64) -> f64;
    fn complement(&self, t: f64) -> f64;
    fn left_tail(&self) -> LeftTail;
    fn right_tail(&self) -> RightTail;
    /// Natural grid range `(t_min, t_max)` before clamping.
    fn natural_range(&self) -> (f64, f64);

    /// Samples the profile on `grid` with its exact tails.
    fn sample(&self, grid: Grid) -> Result<Profile> {
        let gap = (0..grid.len).map(|i| self.complement(grid.t(i))).collect();
        Profile::from_fn(grid, |t| self.value(t), self.left_tail(), self.right_tail())?.with_gap(gap)
    }

    /// Samples on the natural range with a delay-aligned grid.
    fn sample_default(&self, h: f64, step_target: f64) -> Result<Profile> {
        let (a, b) = self.natural_range();
        self.sample(Grid::aligned(h, step_target, a, b)?)
    }
}

/// `N[φ](t) = ε φ'' - φ' + φ(t)(1 - φ(t - h))`.
///
/// Nonpositive for a lower solution, nonnegative for an upper one (the
/// operators invert `ε y'' - y' + y`, which has a positive Green's kernel).
pub fn differential_residual<P: AnalyticProfile + ?Sized>(p: &P, epsilon: f64, h: f64, t: f64) -> f64 {
    epsilon * p.d2(t) - p.d1(t) + p.value(t) * p.complement(t - h)
}

/// Extremes of the differential residual over a uniform sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStats {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

/// Evaluates `N[φ]` at `n + 1` equally spaced points of `[a, b]`.
pub fn sweep_residual<P: AnalyticProfile + ?Sized>(
    p: &P,
    epsilon: f64,
    h: f64,
    a: f64,
    b: f64,
    n: usize,
) -> SweepStats {
    let mut s = SweepStats {
        min: f64::INFINITY,
        argmin: a,
        max: f64::NEG_INFINITY,
        argmax: a,
    };
    let n = n.max(1);
    for i in 0..=n {
        let t = a + (b - a) * i as f64 / n as f64;
        let r = differential_residual(p, epsilon, h, t);
        if r < s.min {
            s.min = r;
            s.argmin = t;
        }
        if r > s.max {
            s.max = r;
            s.argmax = t;
        }
    }
    s
}

/// `φ(· + shift)`.
#[derive(Debug, Clone, Copy)]
pub struct Shifted<P> {
    pub inner: P,
    pub shift: f64,
}

impl<P: AnalyticProfile> AnalyticProfile for Shifted<P> {
    fn value(&self, t: f64) -> f64 {
        self.inner.value(t + self.shift)
    }
    fn d1(&self, t: f64) -> f64 {
        self.inner.d1(t + self.shift)
    }
    fn d2(&self, t: f64) -> f64 {
        self.inner.d2(t + self.shift)
    }
    fn complement(&self, t: f64) -> f64 {
        self.inner.complement(t + self.shift)
    }
    fn left_tail(&self) -> LeftTail {
        self.inner.left_tail().shifted(self.shift)
    }
    fn right_tail(&self) -> RightTail {
        self.inner.right_tail().shifted(self.shift)
    }
    fn natural_range(&self) -> (f64, f64) {
        let (a, b) = self.inner.natural_range();
        (a - self.shift, b - self.shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `1/(1 + e^{-t})` with exact derivatives.
    struct Logistic;

    impl AnalyticProfile for Logistic {
        fn value(&self, t: f64) -> f64 {
            1.0 / (1.0 + (-t).exp())
        }
        fn d1(&self, t: f64) -> f64 {
            let v = self.value(t);
            v * (1.0 - v)
        }
        fn d2(&self, t: f64) -> f64 {
            let v = self.value(t);
            v * (1.0 - v) * (1.0 - 2.0 * v)
        }
        fn complement(&self, t: f64) -> f64 {
            1.0 / (1.0 + t.exp())
        }
        fn left_tail(&self) -> LeftTail {
            LeftTail { rate: 1.0, coeff: 1.0 }
        }
        fn right_tail(&self) -> RightTail {
            RightTail::exponential(-1.0, 1.0)
        }
        fn natural_range(&self) -> (f64, f64) {
            (-40.0, 40.0)
        }
    }

    #[test]
    fn residual_matches_hand_computation() {
        let (eps, h, t) = (0.2, 0.3, 0.4);
        let v = Logistic.value(t);
        let lag = Logistic.value(t - h);
        let expect = eps * v * (1.0 - v) * (1.0 - 2.0 * v) - v * (1.0 - v) + v * (1.0 - lag);
        assert!((differential_residual(&Logistic, eps, h, t) - expect).abs() < 1e-15);
    }

    #[test]
    fn shift_commutes_with_sampling() {
        let s = Shifted {
            inner: Logistic,
            shift: 1.5,
        };
        assert!((s.value(0.0) - Logistic.value(1.5)).abs() < 1e-16);
        let p = s.sample_default(0.0, 0.05).unwrap();
        p.validate().unwrap();
        assert!((p.eval(-50.0) - Logistic.value(-48.5)).abs() < 1e-25);
    }

    #[test]
    fn sweep_finds_extremes() {
        let s = sweep_residual(&Logistic, 0.1, 0.0, -5.0, 5.0, 1000);
        assert!(s.min <= s.max);
        assert!(s.argmin >= -5.0 && s.argmax <= 5.0);
    }
}
