//! Test profiles and an independent quadrature oracle for the operators.
#![allow(dead_code)]

use wavefront_core::operators::{OperatorConfig, OperatorKind, PanelRule};
use wavefront_core::profiles::{Grid, LeftTail, Profile, RightTail};

/// `φ(t) = σ(k (t - t0))^p` with the logistic `σ`.
#[derive(Debug, Clone, Copy)]
pub struct Ramp {
    pub k: f64,
    pub t0: f64,
    pub p: f64,
}

impl Ramp {
    fn log_sigma(&self, t: f64) -> f64 {
        -(-self.k * (t - self.t0)).exp().ln_1p()
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.p * self.log_sigma(t)).exp()
    }

    pub fn complement(&self, t: f64) -> f64 {
        -(self.p * self.log_sigma(t)).exp_m1()
    }

    pub fn profile(&self, grid: Grid) -> Profile {
        let left = LeftTail {
            rate: self.p * self.k,
            coeff: (-self.p * self.k * self.t0).exp(),
        };
        let right = RightTail::exponential(-self.k, self.p * (self.k * self.t0).exp());
        let gap = (0..grid.len).map(|i| self.complement(grid.t(i))).collect();
        Profile::from_fn(grid, |t| self.value(t), left, right)
            .unwrap()
            .with_gap(gap)
            .unwrap()
    }
}

/// Kernel of `𝒦` at lag `u = s - t ≥ 0`.
pub fn kernel(cfg: &OperatorConfig, u: f64) -> f64 {
    match cfg.kind {
        OperatorKind::A { lambda, mu } => ((-lambda * u).exp() - (-mu * u).exp()) / (cfg.epsilon * (mu - lambda)),
        OperatorKind::B => 4.0 * u * (-2.0 * u).exp(),
    }
}

fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, 1e-15).integral
}

/// `g(t_j) = φ(t_j) φ(t_j - h)` from the samples, the lag read from the
/// left tail before the grid.
pub fn products(phi: &Profile, h: f64) -> Vec<f64> {
    let m = (h / phi.step()).round() as usize;
    (0..phi.len())
        .map(|j| {
            let lag = if j >= m {
                phi.values[j - m]
            } else {
                phi.left.eval(phi.t(j) - h)
            };
            phi.values[j] * lag
        })
        .collect()
}

/// `(𝒦φ)(t_i)` by direct quadrature: every panel's interpolant of `g`
/// (linear, or in `span{1, e^{rs}}` for the fitted rule) against the kernel,
/// plus the tail product `(1 - y(s))(1 - y(s - h))` beyond the grid.
/// O(N) work per probe.
pub fn brute_force(cfg: &OperatorConfig, phi: &Profile, i: usize) -> f64 {
    let g = products(phi, cfg.h);
    let t = phi.t(i);
    let step = phi.step();
    let mut total = 0.0;
    for j in i..phi.len() - 1 {
        let (a, b) = (phi.t(j), phi.t(j + 1));
        let (ga, gb) = (g[j], g[j + 1]);
        total += match cfg.panel {
            PanelRule::Linear => quad(|s| kernel(cfg, s - t) * (ga + (gb - ga) * (s - a) / step), a, b),
            PanelRule::ExpFitted { rate } | PanelRule::ExpFittedDouble { rate } => {
                let beta = (gb - ga) / (rate * step).exp_m1();
                quad(|s| kernel(cfg, s - t) * (ga + beta * (rate * (s - a)).exp_m1()), a, b)
            }
        };
    }
    let end = phi.t_max();
    let tail = |s: f64| (1.0 - phi.right.complement(s)) * (1.0 - phi.right.complement(s - cfg.h));
    total + quad(|s| kernel(cfg, s - t) * tail(s), end, end + 80.0)
}

/// `(𝒦φ)(t)` for an analytic `φ` with `h = 0`: `∫_t^∞ K(s - t) φ(s)² ds`.
pub fn exact_apply<F: Fn(f64) -> f64>(cfg: &OperatorConfig, phi: F, t: f64) -> f64 {
    // split so the quadrature sees the kernel's peak and the front separately
    let pieces = [t, t + 2.0, t + 10.0, t + 30.0, t + 90.0];
    pieces
        .windows(2)
        .map(|w| quad(|s| kernel(cfg, s - t) * phi(s) * phi(s), w[0], w[1]))
        .sum()
}
