use serde::{Deserialize, Serialize};

use super::{mean_se, replicate, Check, ExperimentResult};
use crate::analytic::{kappa, pgw_survival, u_series, unicyclic_bound, AnalyticConfig};
use crate::error::{Error, Result};
use crate::geodesic::{shadow_geodesic_with, ShadowOptions};
use crate::perm::StepKind;
use crate::walk::{self, WalkState};

fn walk_steps(n: usize, c: f64) -> u64 {
    (c * n as f64 / 2.0 + 1e-9).floor() as u64
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("c", c, "(0, inf)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpeedCurveParams {
    pub n: usize,
    pub c_grid: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    /// Allowed `|mean d/n - u(c)|`.
    pub tolerance: f64,
}

impl Default for SpeedCurveParams {
    fn default() -> Self {
        SpeedCurveParams {
            n: 2000,
            c_grid: vec![0.4, 0.8, 1.2, 1.6, 2.0],
            reps: 100,
            seed: 1,
            tolerance: 0.02,
        }
    }
}

/// Distance from the identity after `⌊cn/2⌋` steps against `u(c)`.
///
/// Rows: `n, seed, c, rep, steps, distance, d_over_n, fragmentations`.
pub fn exp_speed_curve(p: &SpeedCurveParams, cfg: &AnalyticConfig) -> Result<ExperimentResult> {
    let mut res = ExperimentResult::new(
        "speed_curve",
        &[
            "n",
            "seed",
            "c",
            "rep",
            "steps",
            "distance",
            "d_over_n",
            "fragmentations",
        ],
    );
    res.param("n", p.n)
        .param("c_grid", format!("{:?}", p.c_grid))
        .param("reps", p.reps)
        .param("seed", p.seed)
        .param("tolerance", p.tolerance);
    for (block, &c) in p.c_grid.iter().enumerate() {
        check_c(c)?;
        let steps = walk_steps(p.n, c);
        let runs = replicate(p.seed, block as u64, p.reps, |_, rng| {
            let mut s = WalkState::new(p.n)?;
            s.advance(steps, rng);
            Ok((s.distance(), s.frag_total()))
        })?;
        let ratios: Vec<f64> = runs.iter().map(|&(d, _)| d as f64 / p.n as f64).collect();
        for (rep, &(d, f)) in runs.iter().enumerate() {
            res.row(vec![
                p.n.into(),
                p.seed.into(),
                c.into(),
                rep.into(),
                steps.into(),
                d.into(),
                ratios[rep].into(),
                f.into(),
            ]);
        }
        let (mean, se) = mean_se(&ratios);
        let u = u_series(c, cfg)?;
        res.stat(format!("mean_d_over_n[c={c}]"), mean, Some(se));
        res.stat(format!("u_series[c={c}]"), u, None);
        res.check(Check::within(format!("speed[c={c}]"), mean, u, p.tolerance));
        if c <= 1.0 {
            res.check(Check::within(
                format!("speed_exact[c={c}]"),
                mean,
                c / 2.0,
                p.tolerance,
            ));
        }
        if c < 1.0 {
            let none = runs.iter().filter(|r| r.1 == 0).count() as f64 / p.reps as f64;
            res.stat(
                format!("p_no_fragmentation[c={c}]"),
                none,
                Some((none * (1.0 - none) / p.reps as f64).sqrt()),
            );
            res.stat(format!("exp_minus_kappa[c={c}]"), (-kappa(c)?).exp(), None);
        }
    }
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoFragmentationParams {
    pub n: usize,
    pub c: f64,
    pub reps: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for NoFragmentationParams {
    fn default() -> Self {
        NoFragmentationParams {
            n: 2000,
            c: 0.5,
            reps: 2000,
            seed: 1,
            tolerance: 0.02,
        }
    }
}

/// Probability that the first `⌊cn/2⌋` steps are all coagulations, against
/// `e^{-κ(c)} = e^{c/2} sqrt(1 - c)`.
///
/// Rows: `n, seed, c, rep, fragmentations`.
pub fn exp_no_fragmentation(p: &NoFragmentationParams) -> Result<ExperimentResult> {
    let target = (-kappa(p.c)?).exp();
    let mut res = ExperimentResult::new(
        "no_fragmentation",
        &["n", "seed", "c", "rep", "fragmentations"],
    );
    res.param("n", p.n)
        .param("c", p.c)
        .param("reps", p.reps)
        .param("seed", p.seed)
        .param("tolerance", p.tolerance);
    let steps = walk_steps(p.n, p.c);
    let frags = replicate(p.seed, 0, p.reps, |_, rng| {
        let mut s = WalkState::new(p.n)?;
        s.advance(steps, rng);
        Ok(s.frag_total())
    })?;
    for (rep, &f) in frags.iter().enumerate() {
        res.row(vec![
            p.n.into(),
            p.seed.into(),
            p.c.into(),
            rep.into(),
            f.into(),
        ]);
    }
    let hits: Vec<f64> = frags.iter().map(|&f| (f == 0) as u8 as f64).collect();
    let (phat, se) = mean_se(&hits);
    res.stat("p_no_fragmentation", phat, Some(se));
    res.stat("exp_minus_kappa", target, None);
    res.check(Check::within(
        "p_no_fragmentation",
        phat,
        target,
        p.tolerance,
    ));
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FragmentationRateParams {
    pub n: usize,
    pub c: f64,
    pub reps: usize,
    /// Steps observed around time `⌊cn/2⌋`, centred on it.
    pub window: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for FragmentationRateParams {
    fn default() -> Self {
        FragmentationRateParams {
            n: 2000,
            c: 2.0,
            reps: 1000,
            window: 40,
            seed: 1,
            tolerance: 0.02,
        }
    }
}

/// Per-step fragmentation frequency near time `cn/2` against `θ(c)²/2`.
///
/// Each replicate reports the observed frequency over the window and the
/// exact conditional probability `Σ_cycles m(m-1) / (n(n-1))` at the window
/// centre.
///
/// Rows: `n, seed, c, rep, window_fragmentations, window_frequency, conditional_probability`.
pub fn exp_fragmentation_rate(
    p: &FragmentationRateParams,
    cfg: &AnalyticConfig,
) -> Result<ExperimentResult> {
    check_c(p.c)?;
    let theta = pgw_survival(p.c, cfg)?;
    let target = theta * theta / 2.0;
    let mut res = ExperimentResult::new(
        "fragmentation_rate",
        &[
            "n",
            "seed",
            "c",
            "rep",
            "window_fragmentations",
            "window_frequency",
            "conditional_probability",
        ],
    );
    res.param("n", p.n)
        .param("c", p.c)
        .param("reps", p.reps)
        .param("window", p.window)
        .param("seed", p.seed)
        .param("tolerance", p.tolerance);
    let centre = walk_steps(p.n, p.c);
    let half = (p.window / 2) as u64;
    if p.window == 0 || half > centre {
        return Err(Error::domain("window", p.window as f64, "1..=cn"));
    }
    let nn = (p.n * (p.n - 1)) as f64;
    let runs = replicate(p.seed, 0, p.reps, |_, rng| {
        let mut s = WalkState::new(p.n)?;
        s.advance(centre - half, rng);
        let mut frag = 0u64;
        let mut cond = 0.0;
        for i in 0..p.window as u64 {
            if i == half {
                cond = s
                    .perm()
                    .cycles()
                    .iter()
                    .map(|c| (c.len() * (c.len() - 1)) as f64)
                    .sum::<f64>()
                    / nn;
            }
            if s.step(rng).kind == StepKind::Fragmentation {
                frag += 1;
            }
        }
        Ok((frag, cond))
    })?;
    let mut freq = Vec::with_capacity(p.reps);
    let mut conds = Vec::with_capacity(p.reps);
    for (rep, &(f, cond)) in runs.iter().enumerate() {
        let fr = f as f64 / p.window as f64;
        freq.push(fr);
        conds.push(cond);
        res.row(vec![
            p.n.into(),
            p.seed.into(),
            p.c.into(),
            rep.into(),
            f.into(),
            fr.into(),
            cond.into(),
        ]);
    }
    let (mf, sf) = mean_se(&freq);
    let (mc, sc) = mean_se(&conds);
    res.stat("theta_squared_over_two", target, None);
    res.stat("window_frequency", mf, Some(sf));
    res.stat("conditional_probability", mc, Some(sc));
    res.check(Check::within("window_frequency", mf, target, p.tolerance));
    res.check(Check::within(
        "conditional_probability",
        mc,
        target,
        p.tolerance,
    ));
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShadowGapParams {
    pub ns: Vec<usize>,
    pub c: f64,
    pub reps: usize,
    pub seed: u64,
    /// Slack, in standard errors of the paired difference, allowed above the
    /// mean unicyclic weight.
    pub se_slack: f64,
    pub check_stride: usize,
}

impl Default for ShadowGapParams {
    fn default() -> Self {
        ShadowGapParams {
            ns: vec![500, 1000, 2000],
            c: 0.8,
            reps: 100,
            seed: 1,
            se_slack: 3.0,
            check_stride: 1,
        }
    }
}

/// Shadow geodesics of subcritical walks: the size of the deferred set `K`
/// against the number of vertices on unicyclic components.
///
/// Rows: `n, seed, c, rep, max_k, unicyclic_weight, skipped, residual_steps, valid`.
pub fn exp_shadow_gap(p: &ShadowGapParams, cfg: &AnalyticConfig) -> Result<ExperimentResult> {
    check_c(p.c)?;
    let mut res = ExperimentResult::new(
        "shadow_gap",
        &[
            "n",
            "seed",
            "c",
            "rep",
            "max_k",
            "unicyclic_weight",
            "skipped",
            "residual_steps",
            "valid",
        ],
    );
    res.param("ns", format!("{:?}", p.ns))
        .param("c", p.c)
        .param("reps", p.reps)
        .param("seed", p.seed)
        .param("se_slack", p.se_slack);
    if p.c < 1.0 {
        res.stat("unicyclic_bound", unicyclic_bound(p.c, cfg)?, None);
    }
    let opts = ShadowOptions {
        check_stride: p.check_stride,
    };
    let mut all_valid = true;
    for (block, &n) in p.ns.iter().enumerate() {
        let steps = walk_steps(n, p.c) as usize;
        let runs = replicate(p.seed, block as u64, p.reps, |_, rng| {
            let trace = walk::run(n, steps, rng)?;
            let mut graph = WalkState::new(n)?;
            for t in trace.transpositions() {
                graph.apply(t)?;
            }
            let uni = graph.component_stats().unicyclic_weight;
            let shadow = shadow_geodesic_with(&trace, opts, rng)?;
            let valid = shadow.path.validate().is_ok() && shadow.path.start() == &trace.endpoint();
            Ok((
                shadow.max_walk_gap,
                uni,
                shadow.skipped,
                shadow.residual_steps,
                valid,
            ))
        })?;
        let mut ks = Vec::with_capacity(p.reps);
        let mut us = Vec::with_capacity(p.reps);
        let mut diff = Vec::with_capacity(p.reps);
        for (rep, &(k, u, sk, resid, valid)) in runs.iter().enumerate() {
            all_valid &= valid;
            ks.push(k as f64);
            us.push(u as f64);
            diff.push(k as f64 - u as f64);
            res.row(vec![
                n.into(),
                p.seed.into(),
                p.c.into(),
                rep.into(),
                k.into(),
                u.into(),
                sk.into(),
                resid.into(),
                valid.into(),
            ]);
        }
        let (mk, sk) = mean_se(&ks);
        let (mu, su) = mean_se(&us);
        let (_, sd) = mean_se(&diff);
        res.stat(format!("mean_max_k[n={n}]"), mk, Some(sk));
        res.stat(format!("mean_unicyclic_weight[n={n}]"), mu, Some(su));
        res.check(Check::at_most(
            format!("max_k_bounded[n={n}]"),
            mk,
            mu + p.se_slack * sd,
        ));
    }
    res.check(Check::at_least(
        "all_paths_geodesic",
        all_valid as u8 as f64,
        1.0,
    ));
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_speed_curve_is_reproducible() {
        let p = SpeedCurveParams {
            n: 200,
            c_grid: vec![0.5, 1.5],
            reps: 8,
            seed: 3,
            tolerance: 0.1,
        };
        let cfg = AnalyticConfig::default();
        let a = exp_speed_curve(&p, &cfg).unwrap();
        let b = exp_speed_curve(&p, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 16);
        assert!(a.summary_value("p_no_fragmentation[c=0.5]").is_some());
        assert_eq!(a.checks.len(), 3);
    }

    #[test]
    fn small_shadow_gap_paths_validate() {
        let p = ShadowGapParams {
            ns: vec![60],
            reps: 5,
            ..Default::default()
        };
        let r = exp_shadow_gap(&p, &AnalyticConfig::default()).unwrap();
        assert_eq!(r.rows.len(), 5);
        assert!(r
            .checks
            .iter()
            .any(|c| c.name == "all_paths_geodesic" && c.passed));
    }

    #[test]
    fn fragmentation_window_is_validated() {
        let p = FragmentationRateParams {
            n: 50,
            window: 500,
            ..Default::default()
        };
        assert!(exp_fragmentation_rate(&p, &AnalyticConfig::default()).is_err());
    }
}
