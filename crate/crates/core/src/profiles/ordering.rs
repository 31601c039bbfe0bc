use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::profile::{LeftTail, Profile, RightTail};
use crate::{Error, Result};

/// Largest shift tried by [`shift_to_order`].
pub const MAX_ORDER_SHIFT: f64 = 1024.0;
const RATE_TOL: f64 = 1e-9;
/// Samples this close to 1 are compared through their tails instead.
const SATURATED: f64 = 1.0 - 4.0 * f64::EPSILON;

/// A lower solution and an upper solution translated to lie above it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerUpperPair {
    pub lower: Profile,
    /// `φ₊(· + shift)` resampled on the lower's grid.
    pub upper: Profile,
    pub shift: f64,
}

/// Smallest `σ ∈ {0, 1, 2, 4, …, 1024}` with `lower(t) < upper(t + σ)` on
/// the lower's grid and asymptotically in both tails.
pub fn shift_to_order(lower: &Profile, upper: &Profile) -> Result<LowerUpperPair> {
    let mut sigma = 0.0;
    loop {
        if ordered_at(lower, upper, sigma) {
            return Ok(LowerUpperPair {
                lower: lower.clone(),
                upper: shifted_onto(upper, lower, sigma)?,
                shift: sigma,
            });
        }
        sigma = if sigma == 0.0 { 1.0 } else { 2.0 * sigma };
        if sigma > MAX_ORDER_SHIFT {
            return Err(Error::OrderingFailed {
                max_shift: MAX_ORDER_SHIFT,
            });
        }
    }
}

/// `upper(· + σ)` sampled on `target`'s grid.
fn shifted_onto(upper: &Profile, target: &Profile, sigma: f64) -> Result<Profile> {
    let values = (0..target.len())
        .map(|i| upper.eval_cubic(target.t(i) + sigma).clamp(0.0, 1.0))
        .collect();
    Profile::new(
        target.grid,
        values,
        upper.left.shifted(sigma),
        upper.right.shifted(sigma),
    )
}

fn ordered_at(lower: &Profile, upper: &Profile, sigma: f64) -> bool {
    let grid_ok = (0..lower.len()).all(|i| {
        let t = lower.t(i);
        let l = lower.values[i];
        let u = upper.eval(t + sigma);
        l < u || (l >= SATURATED && u >= SATURATED)
    });
    grid_ok && left_ordered(&lower.left, &upper.left, sigma) && right_ordered(&lower.right, &upper.right, sigma)
}

/// `K_l e^{r_l t} < K_u e^{r_u (t + σ)}` as `t → -∞`. Coefficients are
/// compared in log space so large shifts cannot underflow.
fn left_ordered(l: &LeftTail, u: &LeftTail, sigma: f64) -> bool {
    if l.coeff == 0.0 {
        return true;
    }
    if u.coeff <= 0.0 {
        return false;
    }
    if u.rate < l.rate - RATE_TOL {
        return true;
    }
    (u.rate - l.rate).abs() <= RATE_TOL && l.coeff.ln() < u.coeff.ln() + u.rate * sigma
}

/// `1 - lower(t) > 1 - upper(t + σ)` as `t → +∞`: compare decay rate,
/// then the polynomial degree, then the coefficients.
fn right_ordered(l: &RightTail, u: &RightTail, sigma: f64) -> bool {
    let (la, lb) = l.affine();
    let (ua, ub) = u.affine();
    if ua == 0.0 && ub == 0.0 {
        return la > 0.0 || lb > 0.0;
    }
    if la == 0.0 && lb == 0.0 {
        return false;
    }
    if l.rate > u.rate + RATE_TOL {
        return true;
    }
    if l.rate < u.rate - RATE_TOL {
        return false;
    }
    let lead = |a: f64, b: f64| if b != 0.0 { (1, b) } else { (0, a) };
    let (ld, lc) = lead(la, lb);
    let (ud, uc) = lead(ua + ub * sigma, ub);
    if ld != ud {
        return ld > ud;
    }
    if !(lc > 0.0) {
        return false;
    }
    if !(uc > 0.0) {
        return true;
    }
    let shift = u.rate * sigma;
    if lc.ln() != uc.ln() + shift {
        return lc.ln() > uc.ln() + shift;
    }
    // equal leading terms: the constant of the affine factor decides
    ld == 1 && la.ln() > (ua + ub * sigma).ln() + shift
}
