use serde::{Deserialize, Serialize};

use super::{pgw_survival, AnalyticConfig};
use crate::error::{Error, Result};

/// How the survival probability is parameterised inside the integral
/// representation of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrandConvention {
    /// `θ(2s)`: at time `s` the random graph has mean degree `2s`.
    ScaledTime,
    /// `θ(s)` taken literally.
    Literal,
}

/// `u(c) = c/2 - ∫_0^{c/2} θ(2s)^2 ds`.
pub fn u_integral(c: f64, cfg: &AnalyticConfig) -> Result<f64> {
    u_integral_with(c, cfg, IntegrandConvention::ScaledTime)
}

/// The integral representation of `u` under either integrand convention.
/// Only [`IntegrandConvention::ScaledTime`] agrees with the series.
pub fn u_integral_with(c: f64, cfg: &AnalyticConfig, conv: IntegrandConvention) -> Result<f64> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::domain("c", c, "[0, inf)"));
    }
    let scale = match conv {
        IntegrandConvention::ScaledTime => 2.0,
        IntegrandConvention::Literal => 1.0,
    };
    // θ vanishes until the argument exceeds 1.
    let lo = 1.0 / scale;
    let hi = c / 2.0;
    if hi <= lo {
        return Ok(c / 2.0);
    }
    let mut failure = None;
    let mut f = |s: f64| match pgw_survival(scale * s, cfg) {
        Ok(t) => t * t,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let integral = adaptive_simpson(&mut f, lo, hi, cfg.quad_tol)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(c / 2.0 - integral)
}

const MAX_DEPTH: u32 = 48;

pub(crate) fn adaptive_simpson(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut ok = true;
    let v = simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut ok);
    if ok {
        Ok(v)
    } else {
        Err(Error::Quadrature { lo: a, hi: b, tol })
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    ok: &mut bool,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *ok = false;
        return left + right;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, ok)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::u_series;

    #[test]
    fn simpson_on_polynomials_and_exp() {
        let v = adaptive_simpson(&mut |x: f64| x * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let v = adaptive_simpson(&mut |x: f64| x.exp(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn trivial_values() {
        let cfg = AnalyticConfig::default();
        assert_eq!(u_integral(0.0, &cfg).unwrap(), 0.0);
        assert!((u_integral(0.8, &cfg).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn scaled_time_agrees_with_series_and_literal_does_not() {
        let cfg = AnalyticConfig::default();
        let mut literal_gap: f64 = 0.0;
        for i in 1..=30 {
            let c = 0.1 * i as f64;
            let s = u_series(c, &cfg).unwrap();
            let scaled = u_integral(c, &cfg).unwrap();
            assert!((s - scaled).abs() <= 1e-6, "c = {c}: {s} vs {scaled}");
            let lit = u_integral_with(c, &cfg, IntegrandConvention::Literal).unwrap();
            literal_gap = literal_gap.max((s - lit).abs());
        }
        assert!(literal_gap > 1e-2);
    }
}
