use serde::{Deserialize, Serialize};

use super::counting::LogStirlingRows;
use super::roots::{b_of_a, fig2_xi};
use super::series::{ln_borel_q, sum_series};
use super::AnalyticConfig;
use crate::error::{Error, Result};

/// Radius `⌊an⌋`, guarded against `a·n` landing a rounding error below an integer.
pub fn radius(n: usize, a: f64) -> usize {
    (a * n as f64 + 1e-9).floor() as usize
}

/// Exponential rate comparing the hitting law with the uniform law on a sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportGamma {
    pub a: f64,
    /// `ξ = f^{-1}(a)`.
    pub xi: f64,
    pub c1: f64,
    /// Extrapolated sphere exponent.
    pub c2: f64,
    pub gamma: f64,
    /// Saddle-point value of the sphere exponent, for diagnostics.
    pub c2_closed_form: f64,
    pub grid: Vec<usize>,
    /// `(ln|∂B(I, ⌊an⌋)| - a n ln n)/n` at each grid size.
    pub raw: Vec<f64>,
    /// `|raw - c2|` at each grid size.
    pub deviations: Vec<f64>,
    /// Extrapolation coefficients `(c2, A, B)` of `c2 + A ln(n)/n + B/n`.
    pub fit: [f64; 3],
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a < 0.5 {
        Ok(())
    } else {
        Err(Error::domain("a", a, "(0, 1/2)"))
    }
}

/// Saddle-point formula for `lim (ln|∂B(I, an)| - a n ln n)/n`:
/// `-a - (1-a) ln(1-a) + (1-a) ln ln(1+b) - ln(b/(1+b))`.
pub fn sphere_exponent_closed_form(a: f64, cfg: &AnalyticConfig) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain("a", a, "(0, 1)"));
    }
    let b = b_of_a(a, cfg)?;
    let xi = b / (1.0 + b);
    Ok(-a - (1.0 - a) * (1.0 - a).ln() + (1.0 - a) * b.ln_1p().ln() - xi.ln())
}

fn hitting_exponent(a: f64, cfg: &AnalyticConfig) -> Result<f64> {
    let c = 2.0 * a;
    let s = sum_series(cfg, 1, |k| {
        let lq = ln_borel_q(c, k);
        lq.exp() * (lq + (k as f64).ln())
    })?;
    Ok(-(a + s))
}

/// Least squares for `y ≈ β0 + β1 ln(n)/n + β2/n` by modified Gram-Schmidt.
fn fit_exponent(grid: &[usize], y: &[f64]) -> [f64; 3] {
    let n0 = grid[0] as f64;
    let cols: [Vec<f64>; 3] = [
        grid.iter().map(|_| 1.0).collect(),
        grid.iter()
            .map(|&n| n0 * (n as f64).ln() / n as f64)
            .collect(),
        grid.iter().map(|&n| n0 / n as f64).collect(),
    ];
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(3);
    let mut r = [[0.0f64; 3]; 3];
    for j in 0..3 {
        let mut v = cols[j].clone();
        for (i, qi) in q.iter().enumerate() {
            r[i][j] = dot(qi, &v);
            for (vk, qk) in v.iter_mut().zip(qi) {
                *vk -= r[i][j] * qk;
            }
        }
        r[j][j] = dot(&v, &v).sqrt();
        q.push(v.iter().map(|x| x / r[j][j]).collect());
    }
    let qty: Vec<f64> = q.iter().map(|qi| dot(qi, y)).collect();
    let mut beta = [0.0f64; 3];
    for i in (0..3).rev() {
        let tail: f64 = (i + 1..3).map(|j| r[i][j] * beta[j]).sum();
        beta[i] = (qty[i] - tail) / r[i][i];
    }
    [beta[0], beta[1] * n0, beta[2] * n0]
}

fn gamma_from_rows(a: f64, rows: &LogStirlingRows, cfg: &AnalyticConfig) -> Result<SupportGamma> {
    check_a(a)?;
    let grid = cfg.extrapolation_grid.clone();
    let raw: Vec<f64> = grid
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let ln_sphere = rows.ln_sphere(n, radius(n, a)).expect("row computed");
            (ln_sphere - a * nf * nf.ln()) / nf
        })
        .collect();
    let fit = fit_exponent(&grid, &raw);
    let c2 = fit[0];
    let c1 = hitting_exponent(a, cfg)?;
    Ok(SupportGamma {
        a,
        xi: fig2_xi(a)?,
        c1,
        c2,
        gamma: c1 - c2,
        c2_closed_form: sphere_exponent_closed_form(a, cfg)?,
        deviations: raw.iter().map(|r| (r - c2).abs()).collect(),
        raw,
        grid,
        fit,
    })
}

/// `γ(a) = c1 - c2`, where `-c1` is the exponential rate of the hitting law of
/// a typical point on the sphere of radius `an` (after removing `a n ln n`),
/// and `c2` is the corresponding rate of the sphere size.
pub fn support_gamma(a: f64, cfg: &AnalyticConfig) -> Result<SupportGamma> {
    check_a(a)?;
    cfg.validate()?;
    let rows = LogStirlingRows::compute(&cfg.extrapolation_grid);
    gamma_from_rows(a, &rows, cfg)
}

/// [`support_gamma`] for many values of `a`, sharing one Stirling sweep.
pub fn support_gamma_batch(avals: &[f64], cfg: &AnalyticConfig) -> Result<Vec<SupportGamma>> {
    for &a in avals {
        check_a(a)?;
    }
    cfg.validate()?;
    let rows = LogStirlingRows::compute(&cfg.extrapolation_grid);
    avals
        .iter()
        .map(|&a| gamma_from_rows(a, &rows, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_model() {
        let grid = [200usize, 400, 800, 1600];
        let y: Vec<f64> = grid
            .iter()
            .map(|&n| {
                let nf = n as f64;
                -0.3 + 1.7 * nf.ln() / nf - 4.0 / nf
            })
            .collect();
        let b = fit_exponent(&grid, &y);
        assert!((b[0] + 0.3).abs() < 1e-12);
        assert!((b[1] - 1.7).abs() < 1e-9);
        assert!((b[2] + 4.0).abs() < 1e-8);
    }

    #[test]
    fn gamma_negative_and_extrapolation_consistent() {
        let cfg = AnalyticConfig::default();
        let avals: Vec<f64> = (1..=9).map(|i| 0.05 * i as f64).collect();
        let gs = support_gamma_batch(&avals, &cfg).unwrap();
        for g in &gs {
            assert!(g.gamma < 0.0, "a = {}: {}", g.a, g.gamma);
            assert!((g.c2 - g.c2_closed_form).abs() < 1e-4, "a = {}", g.a);
            assert!(g.deviations.windows(2).all(|w| w[1] < w[0]));
            assert!(g.xi < super::super::FIG2_XI_BOUND);
        }
        assert!(support_gamma(0.5, &cfg).is_err());
    }

    #[test]
    fn radius_floor() {
        assert_eq!(radius(1000, 0.3), 300);
        assert_eq!(radius(10, 0.29), 2);
        assert_eq!(radius(2000, 0.15), 300);
    }
}
