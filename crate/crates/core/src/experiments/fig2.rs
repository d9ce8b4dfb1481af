use serde::{Deserialize, Serialize};

use super::{Check, ExperimentResult};
use crate::analytic::{support_gamma_batch, AnalyticConfig, FIG2_XI_BOUND};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2Params {
    pub a_grid: Vec<f64>,
    /// Second extrapolation grid used to measure the stability of `γ`.
    pub refined_grid: Vec<usize>,
    pub stability_tolerance: f64,
}

impl Default for Fig2Params {
    fn default() -> Self {
        Fig2Params {
            a_grid: (1..=9).map(|i| i as f64 * 0.05).collect(),
            refined_grid: vec![400, 800, 1600, 3200],
            stability_tolerance: 1e-3,
        }
    }
}

/// The exponent `γ(a)` as a function of `ξ = f^{-1}(a)`.
///
/// Rows: `a, xi, c1, c2, gamma, gamma_refined, c2_closed_form`.
pub fn exp_fig2(p: &Fig2Params, cfg: &AnalyticConfig) -> Result<ExperimentResult> {
    let mut res = ExperimentResult::new(
        "fig2",
        &[
            "a",
            "xi",
            "c1",
            "c2",
            "gamma",
            "gamma_refined",
            "c2_closed_form",
        ],
    );
    res.param("a_grid", format!("{:?}", p.a_grid))
        .param(
            "extrapolation_grid",
            format!("{:?}", cfg.extrapolation_grid),
        )
        .param("refined_grid", format!("{:?}", p.refined_grid))
        .param("stability_tolerance", p.stability_tolerance);
    let base = support_gamma_batch(&p.a_grid, cfg)?;
    let refined_cfg = AnalyticConfig {
        extrapolation_grid: p.refined_grid.clone(),
        ..cfg.clone()
    };
    let refined = support_gamma_batch(&p.a_grid, &refined_cfg)?;
    let (mut max_gamma, mut max_xi, mut max_shift) = (f64::NEG_INFINITY, 0.0f64, 0.0f64);
    for (g, r) in base.iter().zip(&refined) {
        res.row(vec![
            g.a.into(),
            g.xi.into(),
            g.c1.into(),
            g.c2.into(),
            g.gamma.into(),
            r.gamma.into(),
            g.c2_closed_form.into(),
        ]);
        max_gamma = max_gamma.max(g.gamma);
        max_xi = max_xi.max(g.xi);
        max_shift = max_shift.max((g.gamma - r.gamma).abs());
    }
    res.stat("max_gamma", max_gamma, None);
    res.stat("max_xi", max_xi, None);
    res.stat("max_refinement_shift", max_shift, None);
    res.check(Check::at_most(
        "gamma_negative",
        max_gamma,
        -f64::MIN_POSITIVE,
    ));
    res.check(Check::at_most("xi_below_bound", max_xi, FIG2_XI_BOUND));
    res.check(Check::at_most(
        "extrapolation_stability",
        max_shift,
        p.stability_tolerance,
    ));
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_grid() {
        let p = Fig2Params {
            a_grid: vec![0.1, 0.3],
            refined_grid: vec![100, 200, 400],
            stability_tolerance: 1e-2,
        };
        let cfg = AnalyticConfig {
            extrapolation_grid: vec![50, 100, 200],
            ..Default::default()
        };
        let r = exp_fig2(&p, &cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert!(r.passed(), "{:?}", r.checks);
    }
}
