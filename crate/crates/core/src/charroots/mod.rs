//! Characteristic roots at both steady states, the critical curves `ε*(h)`
//! and `ε#(h)`, and the existence / asymptotic-regime classifier.
//!
//! At the zero state the linearisation `ε z² - z + 1 = 0` has the positive
//! roots `λ ≤ μ`. At the positive state the characteristic function is
//!
//! ```text
//! ψ(z, ε) = ε z² - z - e^{-z h}
//! ```
//!
//! which has one positive zero and, depending on `(h, ε)`, two negative zeros
//! `λ₁ ≤ λ₂ < 0` (with `λ₁ = -∞` when `h = 0`).

mod curves;
mod regime;
mod roots;

pub use curves::{
    critical_constants, eps_sharp, eps_star, sharp_parametric, star_parametric, CriticalCurves, HALF_LN2, INV_E,
};
pub use regime::{classify, classify_with, MinusRegime, PlusRegime, RegimeReport, Verdict, DEFAULT_BAND};
pub use roots::{
    negative_roots, positive_root, psi, psi_hump, psi_prime, zero_state_roots, NegativeRoots, RootData,
    DOUBLE_ROOT_PSI_TOL,
};
