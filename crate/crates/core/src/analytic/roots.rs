use super::{u_series, AnalyticConfig};
use crate::error::{Error, Result};

/// Upper bound on `ξ` over the subcritical range `a < 1/2` of the support exponent.
pub const FIG2_XI_BOUND: f64 = 0.715331863;

const MAX_NEWTON: usize = 500;
const BISECTION_STEPS: usize = 400;

/// Survival probability of a Poisson(c) Galton-Watson tree: the largest
/// root of `θ = 1 - e^{-cθ}`, zero for `c <= 1`.
pub fn pgw_survival(c: f64, cfg: &AnalyticConfig) -> Result<f64> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::domain("c", c, "[0, inf)"));
    }
    if c <= 1.0 {
        return Ok(0.0);
    }
    // f(θ) = θ - 1 + e^{-cθ} is convex, so Newton from θ = 1 decreases
    // monotonically to the largest root.
    let mut theta = 1.0f64;
    for _ in 0..MAX_NEWTON {
        let f = theta + (-c * theta).exp_m1();
        let df = 1.0 - c * (-c * theta).exp();
        let step = f / df;
        theta -= step;
        if step.abs() <= 4.0 * f64::EPSILON * theta {
            break;
        }
    }
    let residual = (theta - (1.0 - (-c * theta).exp())).abs();
    if theta > 0.0 && residual <= cfg.fixedpoint_tol {
        Ok(theta)
    } else {
        Err(Error::NoConvergence {
            what: "pgw_survival",
        })
    }
}

/// The positive root `b` of `ln(1 + b)/b = 1 - a`.
pub fn b_of_a(a: f64, cfg: &AnalyticConfig) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain("a", a, "(0, 1)"));
    }
    let h = |b: f64| b.ln_1p() / b - (1.0 - a);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while h(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NoConvergence { what: "b_of_a" });
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = if h(lo).abs() < h(hi).abs() && lo > 0.0 {
        lo
    } else {
        hi
    };
    if h(b).abs() <= cfg.fixedpoint_tol {
        Ok(b)
    } else {
        Err(Error::NoConvergence { what: "b_of_a" })
    }
}

/// Inverse of `u` by bisection on `[0, 50]` to a tolerance of `1e-10` in `c`.
pub fn u_inverse(a: f64, cfg: &AnalyticConfig) -> Result<f64> {
    let (mut lo, mut hi) = (0.0f64, 50.0f64);
    let top = u_series(hi, cfg)?;
    if !(a >= 0.0 && a < top) {
        return Err(Error::domain("a", a, "[0, u(50))"));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if u_series(mid, cfg)? < a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ξ = f^{-1}(a)` with `f(ξ) = 1 + ln(1 - ξ)(1 - ξ)/ξ`, the horizontal
/// coordinate used when plotting the support exponent.
pub fn fig2_xi(a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain("a", a, "(0, 1)"));
    }
    let f = |x: f64| 1.0 + (-x).ln_1p() * (1.0 - x) / x;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
