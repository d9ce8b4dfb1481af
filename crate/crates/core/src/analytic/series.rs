use statrs::function::factorial::ln_factorial;

use super::AnalyticConfig;
use crate::error::{Error, Result};

/// Sums `term(k)` for `k = start, start + 1, ...` until a term is negligible
/// relative to the running sum. At least `MIN_TERMS` terms are always taken so
/// that a slowly rising head cannot trigger an early stop.
pub(crate) fn sum_series(
    cfg: &AnalyticConfig,
    start: usize,
    mut term: impl FnMut(usize) -> f64,
) -> Result<f64> {
    const MIN_TERMS: usize = 16;
    let mut sum = 0.0;
    for (taken, k) in (start..).enumerate() {
        if taken >= cfg.max_terms {
            return Err(Error::SeriesTruncation {
                max_terms: cfg.max_terms,
            });
        }
        let t = term(k);
        sum += t;
        if taken + 1 >= MIN_TERMS && t.abs() <= cfg.series_tol * sum.abs() {
            return Ok(sum);
        }
    }
    unreachable!("unbounded range")
}

/// `ln q_k(c)` where `q_k = (1/c) k^{k-2}/k! (c e^{-c})^k`.
pub(crate) fn ln_borel_q(c: f64, k: usize) -> f64 {
    let kf = k as f64;
    -c.ln() + (kf - 2.0) * kf.ln() - ln_factorial(k as u64) + kf * (c.ln() - c)
}

fn check_c_positive(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("c", c, "(0, inf)"))
    }
}

/// Asymptotic speed `u(c)` of the distance from the identity after `cn/2`
/// random transpositions.
pub fn u_series(c: f64, cfg: &AnalyticConfig) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain("c", c, "[0, inf)"));
    }
    let s = sum_series(cfg, 1, |k| ln_borel_q(c, k).exp())?;
    Ok((1.0 - s).clamp(0.0, 1.0))
}

/// `q_k = (1/c) k^{k-2}/k! (c e^{-c})^k`, the weight of a tree component of size `k`.
pub fn borel_q(c: f64, k: usize) -> Result<f64> {
    check_c_positive(c)?;
    if k == 0 {
        return Err(Error::domain("k", 0.0, "k >= 1"));
    }
    Ok(ln_borel_q(c, k).exp())
}

/// `p_k = k q_k`, the Borel law of the total progeny of a Poisson(c) tree.
pub fn borel_p(c: f64, k: usize) -> Result<f64> {
    Ok(k as f64 * borel_q(c, k)?)
}

/// `κ(c) = -(ln(1 - c) + c)/2`, the limiting mean number of fragmentations
/// up to time `cn/2`.
pub fn kappa(c: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&c) {
        return Err(Error::domain("c", c, "[0, 1)"));
    }
    Ok(-((-c).ln_1p() + c) / 2.0)
}

/// Limiting expected number of vertices on unicyclic components of the
/// random graph at time `cn/2`: `sqrt(π/8) Σ_{k>=2} k^{k+1/2}/k! (c e^{-c})^k`.
pub fn unicyclic_bound(c: f64, cfg: &AnalyticConfig) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::domain("c", c, "[0, 1)"));
    }
    let pref = 0.5 * (std::f64::consts::PI / 8.0).ln();
    let x = c.ln() - c;
    sum_series(cfg, 2, |k| {
        let kf = k as f64;
        (pref + (kf + 0.5) * kf.ln() - ln_factorial(k as u64) + kf * x).exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> AnalyticConfig {
        AnalyticConfig::default()
    }

    /// Independent oracle for `u`: with `T e^{-T} = c e^{-c}`, `T <= 1`,
    /// the tree mass is `Σ q_k = (T - T^2/2)/c`.
    fn u_tree_function(c: f64) -> f64 {
        if c <= 1.0 {
            return c / 2.0;
        }
        let target = c * (-c).exp();
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * (-mid).exp() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        1.0 - (t - t * t / 2.0) / c
    }

    #[test]
    fn u_is_linear_below_one() {
        assert_eq!(u_series(0.0, &cfg()).unwrap(), 0.0);
        assert!((u_series(0.5, &cfg()).unwrap() - 0.25).abs() < 1e-9);
        for c in [0.1, 0.3, 0.7, 0.9] {
            assert!(
                (u_series(c, &cfg()).unwrap() - c / 2.0).abs() < 1e-9,
                "c = {c}"
            );
        }
        // Convergence is only polynomial near c = 1, so the relative stopping
        // rule leaves a slightly larger tail there.
        assert!((u_series(0.99, &cfg()).unwrap() - 0.495).abs() < 1e-8);
        assert!((u_series(1.0, &cfg()).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn u_matches_tree_function_oracle() {
        for i in 1..=60 {
            let c = 0.05 * i as f64;
            let got = u_series(c, &cfg()).unwrap();
            let want = u_tree_function(c);
            let tol = if (c - 1.0).abs() < 0.06 { 1e-6 } else { 1e-9 };
            assert!((got - want).abs() < tol, "c = {c}: {got} vs {want}");
        }
        let u16 = u_series(1.6, &cfg()).unwrap();
        assert!(u16 > 0.5 && u16 < 0.8);
    }

    #[test]
    fn u_is_concave_and_subadditive_above_one() {
        let u = |c: f64| u_series(c, &cfg()).unwrap();
        for i in 0..20 {
            let c = 1.05 + 0.1 * i as f64;
            assert!(u(c) < c / 2.0);
            let h = 0.05;
            assert!(u(c + h) - 2.0 * u(c) + u(c - h) <= 0.0);
        }
        for i in 1..=10 {
            let c = 0.5 + 0.1 * i as f64;
            assert!(u(2.0 * c) < 2.0 * u(c), "c = {c}");
        }
    }

    #[test]
    fn borel_laws_normalize() {
        let c = 0.6;
        let sp: f64 = (1..=10_000).map(|k| borel_p(c, k).unwrap()).sum();
        let sq: f64 = (1..=10_000).map(|k| borel_q(c, k).unwrap()).sum();
        assert!((sp - 1.0).abs() < 1e-9);
        assert!((sq - 0.7).abs() < 1e-9);
        for c in [0.1, 0.6, 1.0, 2.5] {
            assert!((borel_p(c, 1).unwrap() - (-c).exp()).abs() < 1e-15);
        }
        assert!(borel_q(0.5, 0).is_err());
        assert!(borel_q(0.0, 3).is_err());
    }

    #[test]
    fn kappa_properties() {
        assert_eq!(kappa(0.0).unwrap(), 0.0);
        let lhs = (-kappa(0.5).unwrap()).exp();
        assert!((lhs - 0.25f64.exp() * 0.5f64.sqrt()).abs() < 1e-12);
        assert!(kappa(0.9).unwrap() > kappa(0.5).unwrap());
        assert!(kappa(1.0).is_err());
    }

    #[test]
    fn unicyclic_bound_behaviour() {
        assert_eq!(unicyclic_bound(0.0, &cfg()).unwrap(), 0.0);
        assert!(unicyclic_bound(1e-6, &cfg()).unwrap() < 1e-10);
        let v = unicyclic_bound(0.8, &cfg()).unwrap();
        let finer = AnalyticConfig {
            series_tol: 1e-15,
            ..cfg()
        };
        let w = unicyclic_bound(0.8, &finer).unwrap();
        assert!(v > 0.0 && v.is_finite());
        assert!((v - w).abs() < 1e-9 * v);
        assert!(unicyclic_bound(1.0, &cfg()).is_err());
    }

    #[test]
    fn truncation_is_reported() {
        let tight = AnalyticConfig {
            max_terms: 100,
            ..cfg()
        };
        assert_eq!(
            u_series(1.0, &tight),
            Err(Error::SeriesTruncation { max_terms: 100 })
        );
    }
}
