use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One problem instance: delay `h`, wave speed `c`, and `ε = 1/c²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub h: f64,
    pub c: f64,
    pub epsilon: f64,
}

impl ModelParams {
    /// Builds the instance from the delay and the wave speed (`c ≥ 2`).
    pub fn new(h: f64, c: f64) -> Result<Self> {
        if !h.is_finite() || h < 0.0 {
            return Err(Error::InvalidParameter {
                name: "h",
                value: h,
                reason: "delay must be finite and non-negative",
            });
        }
        if !c.is_finite() || c < 2.0 {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                reason: "speed must be finite and at least 2",
            });
        }
        Ok(Self {
            h,
            c,
            epsilon: 1.0 / (c * c),
        })
    }

    /// Builds the instance from `ε ∈ (0, 1/4]`; `c = ε^{-1/2}`.
    pub fn from_epsilon(h: f64, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon <= 0.0 || epsilon > 0.25 {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "epsilon must lie in (0, 0.25]",
            });
        }
        let mut p = Self::new(h, 1.0 / epsilon.sqrt())?;
        p.epsilon = epsilon;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_from_speed() {
        let p = ModelParams::new(0.0, 2.0).unwrap();
        assert_eq!(p.epsilon, 0.25);
        let p = ModelParams::new(0.1, 5.0).unwrap();
        assert!((p.epsilon - 0.04).abs() < 1e-16);
        assert!((1.0 / p.epsilon.sqrt() - p.c).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ModelParams::new(-1.0, 2.0).is_err());
        assert!(ModelParams::new(0.0, 1.99).is_err());
        assert!(ModelParams::new(f64::NAN, 2.0).is_err());
        assert!(ModelParams::from_epsilon(0.0, 0.26).is_err());
        assert!(ModelParams::from_epsilon(0.0, 0.0).is_err());
    }

    #[test]
    fn from_epsilon_keeps_epsilon_exact() {
        let p = ModelParams::from_epsilon(0.0, 0.24).unwrap();
        assert_eq!(p.epsilon, 0.24);
        assert!((p.c - 5.0 / 6f64.sqrt()).abs() < 1e-14);
    }
}
