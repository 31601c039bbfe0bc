use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::profiles::RightTail;
use crate::{Error, Result};

/// One term `coeff · s^k · e^{rate·s}` of the tail model; `order` is its
/// degree in the tail amplitude `y` (0, 1 or 2).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Term {
    coeff: f64,
    k: u32,
    rate: f64,
    order: u8,
}

/// `g(s) = Σ coeff · s^k · e^{rate·s}` beyond the grid.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TailModel {
    terms: Vec<Term>,
}

impl TailModel {
    /// `g = (1 - y(s))(1 - y(s - h))` with `y = (a + b s) e^{r s}` from the
    /// right tail, expanded exactly (the product term has rate `2r`).
    pub fn new(right: &RightTail, h: f64) -> Self {
        let (a, b) = right.affine();
        let r = right.rate;
        let term = |coeff, k, rate, order| Term { coeff, k, rate, order };
        let mut terms = Vec::with_capacity(6);
        terms.push(term(1.0, 0, 0.0, 0));
        if a != 0.0 || b != 0.0 {
            let e = (-r * h).exp();
            // y(s - h) = (a' + b' s) e^{rs}
            let (ad, bd) = ((a - b * h) * e, b * e);
            terms.push(term(-(a + ad), 0, r, 1));
            terms.push(term(-(b + bd), 1, r, 1));
            terms.push(term(a * ad, 0, 2.0 * r, 2));
            terms.push(term(a * bd + b * ad, 1, 2.0 * r, 2));
            terms.push(term(b * bd, 2, 2.0 * r, 2));
            terms.retain(|t| t.coeff != 0.0);
        }
        Self { terms }
    }

    /// Drops second-order terms whose magnitude at `t` is below `eps`.
    pub fn pruned(mut self, t: f64, eps: f64) -> Self {
        self.terms
            .retain(|x| x.order < 2 || (x.coeff * t.powi(x.k as i32) * (x.rate * t).exp()).abs() >= eps);
        self
    }

    #[cfg(test)]
    pub fn eval(&self, s: f64) -> f64 {
        self.terms
            .iter()
            .map(|x| x.coeff * s.powi(x.k as i32) * (x.rate * s).exp())
            .sum()
    }

    /// `∫_T^∞ (s - T)^m e^{ρ(T - s)} g(s) ds` in closed form.
    pub fn integral(&self, m: u32, rho: f64, t: f64) -> Result<f64> {
        self.sum_terms(m, rho, t, |_| true)
    }

    /// The same integral for `1 - g` (the constant term cancels exactly).
    pub fn complement_integral(&self, m: u32, rho: f64, t: f64) -> Result<f64> {
        Ok(-self.sum_terms(m, rho, t, |x| x.order > 0)?)
    }

    fn sum_terms(&self, m: u32, rho: f64, t: f64, keep: impl Fn(&Term) -> bool) -> Result<f64> {
        let mut total = 0.0;
        for x in self.terms.iter().filter(|x| keep(x)) {
            let beta = rho - x.rate;
            if !(beta > 0.0) {
                return Err(Error::TailFitFailed(format!(
                    "tail rate {} does not decay against kernel rate {rho}",
                    x.rate
                )));
            }
            total += x.coeff * (x.rate * t).exp() * shifted_moment(m, x.k, t, beta);
        }
        Ok(total)
    }
}

/// `∫₀^∞ u^m (T + u)^k e^{-βu} du = Σ_j C(k,j) T^{k-j} (m+j)! / β^{m+j+1}`.
fn shifted_moment(m: u32, k: u32, t: f64, beta: f64) -> f64 {
    let mut sum = 0.0;
    for j in 0..=k {
        let binom = match (k, j) {
            (2, 1) => 2.0,
            _ => 1.0,
        };
        let fact: f64 = (1..=m + j).map(f64::from).product();
        sum += binom * t.powi((k - j) as i32) * fact / beta.powi((m + j + 1) as i32);
    }
    sum
}
