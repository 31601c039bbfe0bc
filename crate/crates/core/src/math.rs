//! Scalar numerics shared by the solvers: bracketing root finders, the
//! polynomial-exponential moments behind the panel weights, and small
//! least-squares helpers for the tail fits.

use crate::{Error, Result};
use num_traits::Float;

/// Bisection on a sign-changing bracket `[a, b]`.
///
/// Stops when the bracket is narrower than `xtol` (absolute) or cannot be
/// split further in floating point.
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::RootFinding("bracket does not change sign"));
    }
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// A few safeguarded Newton steps from `x`, never leaving `[lo, hi]`.
///
/// Returns the iterate with the smallest `|f|` seen, so polishing can only
/// improve on the bisection result.
pub fn newton_polish<F, D>(f: F, df: D, mut x: f64, lo: f64, hi: f64, steps: usize) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut best = x;
    let mut best_abs = f(x).abs();
    for _ in 0..steps {
        let fx = f(x);
        let d = df(x);
        if fx == 0.0 || d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(next >= lo && next <= hi) || next == x {
            break;
        }
        x = next;
        let v = f(x).abs();
        if v < best_abs {
            best = x;
            best_abs = v;
        }
    }
    best
}

/// Grows `x` geometrically away from `anchor` until `pred` holds.
pub fn expand_until<P>(anchor: f64, first: f64, mut pred: P) -> Result<f64>
where
    P: FnMut(f64) -> bool,
{
    let mut step = first;
    for _ in 0..200 {
        let x = anchor + step;
        if pred(x) {
            return Ok(x);
        }
        step *= 2.0;
    }
    Err(Error::RootFinding("bracket expansion did not terminate"))
}

/// `∫₀¹ vᵏ e^{-x v} dv`.
///
/// Series near `x = 0`; otherwise the upward recurrence
/// `F_k = (k F_{k-1} - e^{-x}) / x` for `k ≤ 3`, and for larger `k` the
/// downward recurrence `F_k = (e^{-x} + x F_{k+1}) / (k + 1)`, which damps
/// its starting error.
pub fn poly_exp_moment(k: u32, x: f64) -> f64 {
    if x.abs() < 1.0 {
        // Σ (-x)^n / (n! (n + k + 1))
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 0..60u32 {
            let add = term / f64::from(n + k + 1);
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
            term *= -x / f64::from(n + 1);
        }
        sum
    } else if k <= 3 {
        let e = (-x).exp();
        let mut f = -(-x).exp_m1() / x;
        for j in 1..=k {
            f = (f64::from(j) * f - e) / x;
        }
        f
    } else {
        let e = (-x).exp();
        let top = k + 40 + 2 * (x.abs().ceil() as u32);
        // crude start; each step multiplies its error by |x| / (j + 1)
        let mut f = if x > 0.0 {
            1.0 / f64::from(top + 1)
        } else {
            e / f64::from(top + 1)
        };
        for j in (k..top).rev() {
            f = (e + x * f) / f64::from(j + 1);
        }
        f
    }
}

/// Solves the 3×3 system `m · c = rhs` by Gaussian elimination with
/// partial pivoting.
pub fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col] == 0.0 || !m[piv][col].is_finite() {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut c = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = rhs[row];
        for k in row + 1..3 {
            acc -= m[row][k] * c[k];
        }
        c[row] = acc / m[row][row];
    }
    Some(c)
}

/// Ordinary least squares `y ≈ intercept + slope·x`; returns
/// `(slope, intercept, rms residual)`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let r = y - intercept - slope * x;
        ss += r * r;
    }
    Some((slope, intercept, (ss / nf).sqrt()))
}

/// Least squares for `y ≈ a·u + b·v` (two given basis columns).
pub fn fit_two_columns(u: &[f64], v: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let (mut uu, mut uv, mut vv, mut uy, mut vy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..y.len() {
        uu += u[i] * u[i];
        uv += u[i] * v[i];
        vv += v[i] * v[i];
        uy += u[i] * y[i];
        vy += v[i] * y[i];
    }
    let det = uu * vv - uv * uv;
    if det.abs() <= 1e-300 || det.abs() <= 1e-14 * uu * vv {
        return None;
    }
    Some(((uy * vv - vy * uv) / det, (vy * uu - uy * uv) / det))
}

/// Golden-section minimisation of a unimodal `f` on `[a, b]`.
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moment_by_quadrature(k: u32, x: f64) -> f64 {
        // composite Simpson; 20000 panels resolve e^{-30v} to ~1e-14
        let n = 20000;
        let h = 1.0 / n as f64;
        let f = |v: f64| v.powi(k as i32) * (-x * v).exp();
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            let v = i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(v);
        }
        s * h / 3.0
    }

    #[test]
    fn moments_match_quadrature_across_branches() {
        for &x in &[-0.7, -0.01, 0.0, 1e-9, 0.3, 0.99, 1.0, 1.5, 4.0, 30.0] {
            for k in 0..=3 {
                let a = poly_exp_moment(k, x);
                let b = moment_by_quadrature(k, x);
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-3), "k={k} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn high_order_moments() {
        for &x in &[0.5, 1.0, 2.0, 7.0, -1.5] {
            for k in [4u32, 7, 12, 25] {
                let a = poly_exp_moment(k, x);
                let b = moment_by_quadrature(k, x);
                assert!((a - b).abs() <= 1e-11 * b.abs(), "k={k} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn solve3_recovers_solution() {
        let m = [[1e-3, 2.0, 1.0], [3.0, -1.0, 0.5], [0.2, 0.1, 4.0]];
        let c = [1.5, -2.0, 0.25];
        let rhs = [0, 1, 2].map(|r| (0..3).map(|k| m[r][k] * c[k]).sum::<f64>());
        let got = solve3(m, rhs).unwrap();
        for k in 0..3 {
            assert!((got[k] - c[k]).abs() < 1e-14);
        }
        assert!(solve3([[0.0; 3]; 3], [1.0; 3]).is_none());
    }

    #[test]
    fn moments_are_continuous_at_branch_switch() {
        for k in 0..=3 {
            let lo = poly_exp_moment(k, 1.0 - 1e-12);
            let hi = poly_exp_moment(k, 1.0);
            assert!((lo - hi).abs() < 1e-11, "k={k}");
        }
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn line_fit_exact_data() {
        let xs: alloc::vec::Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: alloc::vec::Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let (s, i, rms) = fit_line(&xs, &ys).unwrap();
        assert!((s + 0.5).abs() < 1e-14 && (i - 3.0).abs() < 1e-13 && rms < 1e-13);
    }

    #[test]
    fn golden_section_parabola() {
        let (x, _) = golden_min(|x| (x - 0.3) * (x - 0.3), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
    }
}
