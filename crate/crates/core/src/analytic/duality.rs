use serde::{Deserialize, Serialize};

use super::{b_of_a, u_inverse, u_series, AnalyticConfig};
use crate::error::{Error, Result};

/// Constants of the geometric branching process with success parameter `p`
/// and its dual (the process conditioned on extinction).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityConstants {
    pub p: f64,
    /// Extinction probability: smallest root of `p/α + α(1-p) = 1`.
    pub alpha: f64,
    /// Parameter of the dual process, `p/α`.
    pub p_prime: f64,
    /// `1 + p ln p/(1-p)`.
    pub a: f64,
    /// `1 + p' ln p'/(1-p')`.
    pub a_prime: f64,
    /// `|p/α + α(1-p) - 1|`.
    pub residual: f64,
}

fn a_of_p(p: f64) -> f64 {
    if p == 1.0 {
        return 1.0;
    }
    1.0 + p * p.ln() / (1.0 - p)
}

pub fn duality_constants(p: f64) -> Result<DualityConstants> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("p", p, "(0, 1)"));
    }
    // (1-p)α² - α + p = 0 has discriminant (1-2p)²; take the smaller root in
    // the cancellation-free form 2p/(1 + |1-2p|).
    let alpha = (2.0 * p / (1.0 + (1.0 - 2.0 * p).abs())).min(1.0);
    let p_prime = p / alpha;
    let residual = (p / alpha + alpha * (1.0 - p) - 1.0).abs();
    if residual > 1e-12 {
        return Err(Error::NoConvergence {
            what: "duality_constants",
        });
    }
    Ok(DualityConstants {
        p,
        alpha,
        p_prime,
        a: a_of_p(p),
        a_prime: a_of_p(p_prime),
        residual,
    })
}

/// Limit of `(x|y)_p / n` where `x` and `y` are hitting points of independent
/// walks at distance `an` and `p` is the identity: `a - u(2 u^{-1}(a))/2`,
/// for `1/4 <= a < 1/2`.
pub fn gromov_delta_hitting(a: f64, cfg: &AnalyticConfig) -> Result<f64> {
    if !(0.25..0.5).contains(&a) {
        return Err(Error::domain("a", a, "[1/4, 1/2)"));
    }
    let c = u_inverse(a, cfg)?;
    Ok(a - u_series(2.0 * c, cfg)? / 2.0)
}

/// Limit of `(σ|π)_I / n` for independent uniform points on the sphere of
/// radius `an`: `a - (1 - α²(1 - 2a'))/2` with `p = 1/(1 + b(a))`.
pub fn gromov_delta_uniform(a: f64, cfg: &AnalyticConfig) -> Result<f64> {
    let critical = 1.0 - std::f64::consts::LN_2;
    if !(a > critical && a < 1.0) {
        return Err(Error::domain("a", a, "(1 - ln 2, 1)"));
    }
    let b = b_of_a(a, cfg)?;
    let d = duality_constants(1.0 / (1.0 + b))?;
    Ok(a - (1.0 - d.alpha * d.alpha * (1.0 - 2.0 * d.a_prime)) / 2.0)
}
