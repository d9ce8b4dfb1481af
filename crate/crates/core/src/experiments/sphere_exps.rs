use serde::{Deserialize, Serialize};

use super::{mean_se, replicate, Check, EmpiricalDist, ExperimentResult};
use crate::analytic::{b_of_a, borel_p, gromov_delta_uniform, kappa, radius_of, AnalyticConfig};
use crate::branching::{gamma_graph, shifted_geometric_progeny_pmf, InitialGeneration};
use crate::error::{Error, Result};
use crate::samplers::{hitting_sample, nu0_sample, SphereSampler};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SphereLawParams {
    pub n: usize,
    pub a: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Truncation point of the total variation sum.
    pub tv_cap: u64,
}

impl Default for SphereLawParams {
    fn default() -> Self {
        SphereLawParams {
            n: 1000,
            a: 0.5,
            samples: 5000,
            seed: 1,
            tolerance: 0.03,
            tv_cap: 100,
        }
    }
}

/// Length of the cycle of element 1 under the uniform law on the sphere of
/// radius `⌊an⌋`, against the geometric law `(1 - ξ) ξ^{k-1}` with
/// `ξ = b/(1+b)`.
///
/// Rows: `n, seed, a, rep, cycle_len, fixed_points`.
pub fn exp_sphere_law(p: &SphereLawParams, cfg: &AnalyticConfig) -> Result<ExperimentResult> {
    let b = b_of_a(p.a, cfg)?;
    let xi = b / (1.0 + b);
    let mut res = ExperimentResult::new(
        "sphere_law",
        &["n", "seed", "a", "rep", "cycle_len", "fixed_points"],
    );
    res.param("n", p.n)
        .param("a", p.a)
        .param("samples", p.samples)
        .param("seed", p.seed)
        .param("tolerance", p.tolerance)
        .param("tv_cap", p.tv_cap);
    let sampler = SphereSampler::new(p.n, radius_of(p.n, p.a), cfg)?;
    let draws = replicate(p.seed, 0, p.samples, |_, rng| {
        let s = sampler.sample(rng)?;
        Ok((s.cycle_len_of(1), s.fixed_points()))
    })?;
    for (rep, &(len, fixed)) in draws.iter().enumerate() {
        res.row(vec![
            p.n.into(),
            p.seed.into(),
            p.a.into(),
            rep.into(),
            len.into(),
            fixed.into(),
        ]);
    }
    let dist: EmpiricalDist = draws.iter().map(|d| d.0 as u64).collect();
    let geometric = |k: u64| {
        if k == 0 {
            0.0
        } else {
            (1.0 - xi) * xi.powi(k as i32 - 1)
        }
    };
    let tv = dist.tv_to_law(geometric, p.tv_cap)?;
    res.stat("xi", xi, None);
    res.stat("mean_cycle_len", dist.mean(), None);
    res.stat("geometric_mean", 1.0 / (1.0 - xi), None);
    res.stat("truncated_mass_empirical", tv.truncated_mass_left, None);
    res.stat("truncated_mass_law", tv.truncated_mass_right, None);
    res.check(Check::at_most("tv_geometric", tv.tv, p.tolerance));
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HittingLawParams {
    pub n: usize,
    pub a: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub acceptance_tolerance: f64,
    pub tv_cap: u64,
}

impl Default for HittingLawParams {
    fn default() -> Self {
        HittingLawParams {
            n: 1000,
            a: 0.3,
            samples: 2000,
            seed: 1,
            tolerance: 0.03,
            acceptance_tolerance: 0.02,
            tv_cap: 100,
        }
    }
}

/// Length of the cycle of element 1 under the no-fragmentation hitting law
/// against Borel(2a), and the rejection sampler's acceptance rate against
/// `e^{-κ(2a)}`.
///
/// Rows: `n, seed, a, rep, cycle_len, attempts`.
pub fn exp_hitting_law(p: &HittingLawParams) -> Result<ExperimentResult> {
    let c = 2.0 * p.a;
    let mut res = ExperimentResult::new(
        "hitting_law",
        &["n", "seed", "a", "rep", "cycle_len", "attempts"],
    );
    res.param("n", p.n)
        .param("a", p.a)
        .param("samples", p.samples)
        .param("seed", p.seed)
        .param("tolerance", p.tolerance)
        .param("acceptance_tolerance", p.acceptance_tolerance)
        .param("tv_cap", p.tv_cap);
    let draws = replicate(p.seed, 0, p.samples, |_, rng| {
        let s = nu0_sample(p.n, p.a, rng)?;
        Ok((s.sample.perm.cycle_len_of(1), s.attempts))
    })?;
    for (rep, &(len, att)) in draws.iter().enumerate() {
        res.row(vec![
            p.n.into(),
            p.seed.into(),
            p.a.into(),
            rep.into(),
            len.into(),
            att.into(),
        ]);
    }
    let dist: EmpiricalDist = draws.iter().map(|d| d.0 as u64).collect();
    let tv = dist.tv_to_law(|k| borel_p(c, k as usize).unwrap_or(0.0), p.tv_cap)?;
    let attempts: u64 = draws.iter().map(|d| d.1).sum();
    let rate = p.samples as f64 / attempts as f64;
    let target = (-kappa(c)?).exp();
    res.stat("mean_cycle_len", dist.mean(), None);
    res.stat("borel_mean", 1.0 / (1.0 - c), None);
    res.stat("acceptance_rate", rate, None);
    res.stat("exp_minus_kappa", target, None);
    res.check(Check::at_most("tv_borel", tv.tv, p.tolerance));
    res.check(Check::within(
        "acceptance_rate",
        rate,
        target,
        p.acceptance_tolerance,
    ));
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SingularityParams {
    pub n: usize,
    pub a: f64,
    pub reps: usize,
    pub seed: u64,
    /// Allowed distance of each mean from its prediction, in standard errors.
    pub se_tolerance: f64,
    pub max_error_rate: f64,
}

impl Default for SingularityParams {
    fn default() -> Self {
        SingularityParams {
            n: 2000,
            a: 0.3,
            reps: 500,
            seed: 1,
            se_tolerance: 3.0,
            max_error_rate: 0.01,
        }
    }
}

/// Fixed points under the uniform law `μ` and the hitting law `ν` on the
/// sphere of radius `⌊an⌋`. Predictions are `n/(1+b)` and `n e^{-2a}`; the
/// classifier thresholds at the midpoint of the two predictions.
///
/// Rows: `n, seed, a, law, rep, fixed_points`.
pub fn exp_singularity(p: &SingularityParams, cfg: &AnalyticConfig) -> Result<ExperimentResult> {
    if !(p.a > 0.0 && p.a < 0.5) {
        return Err(Error::domain("a", p.a, "(0, 1/2)"));
    }
    let b = b_of_a(p.a, cfg)?;
    let mu_pred = 1.0 / (1.0 + b);
    let nu_pred = (-2.0 * p.a).exp();
    let mut res = ExperimentResult::new(
        "singularity",
        &["n", "seed", "a", "law", "rep", "fixed_points"],
    );
    res.param("n", p.n)
        .param("a", p.a)
        .param("reps", p.reps)
        .param("seed", p.seed)
        .param("se_tolerance", p.se_tolerance)
        .param("max_error_rate", p.max_error_rate);
    let sampler = SphereSampler::new(p.n, radius_of(p.n, p.a), cfg)?;
    let mu = replicate(p.seed, 0, p.reps, |_, rng| {
        Ok(sampler.sample(rng)?.fixed_points())
    })?;
    let nu = replicate(p.seed, 1, p.reps, |_, rng| {
        Ok(hitting_sample(p.n, p.a, rng)?.perm.fixed_points())
    })?;
    let nf = p.n as f64;
    let threshold = nf * (mu_pred + nu_pred) / 2.0;
    // The two predictions order the laws; misclassified means on the wrong side.
    let mu_below = mu_pred < nu_pred;
    let mut errors = 0usize;
    for (law, draws) in [("mu", &mu), ("nu", &nu)] {
        for (rep, &f) in draws.iter().enumerate() {
            res.row(vec![
                p.n.into(),
                p.seed.into(),
                p.a.into(),
                law.into(),
                rep.into(),
                f.into(),
            ]);
            let below = (f as f64) < threshold;
            if below != ((law == "mu") == mu_below) {
                errors += 1;
            }
        }
    }
    let to_ratio = |v: &[usize]| v.iter().map(|&f| f as f64 / nf).collect::<Vec<_>>();
    let (mm, ms) = mean_se(&to_ratio(&mu));
    let (nm, ns) = mean_se(&to_ratio(&nu));
    let err_rate = errors as f64 / (2 * p.reps) as f64;
    res.stat("mu_fixed_over_n", mm, Some(ms));
    res.stat("mu_prediction", mu_pred, None);
    res.stat("nu_fixed_over_n", nm, Some(ns));
    res.stat("nu_prediction", nu_pred, None);
    res.stat(
        "separation_in_se",
        (mm - nm).abs() / (ms * ms + ns * ns).sqrt(),
        None,
    );
    res.stat("threshold", threshold, None);
    res.stat("classifier_error", err_rate, None);
    res.check(Check::within(
        "mu_fixed_points",
        mm,
        mu_pred,
        p.se_tolerance * ms,
    ));
    res.check(Check::within(
        "nu_fixed_points",
        nm,
        nu_pred,
        p.se_tolerance * ns,
    ));
    res.check(Check::at_most(
        "classifier_error",
        err_rate,
        p.max_error_rate,
    ));
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterWeightParams {
    pub n: usize,
    pub a: f64,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub tv_cap: u64,
}

impl Default for ClusterWeightParams {
    fn default() -> Self {
        ClusterWeightParams {
            n: 2000,
            a: 0.25,
            samples: 10_000,
            seed: 1,
            tolerance: 0.05,
            tv_cap: 50,
        }
    }
}

/// Weight of the component of element 1 in `Γ(σ, π)` for independent
/// uniform `σ, π` on the sphere, against the total progeny of the
/// shifted-geometric branching process with parameter `1/(1+b)` started from
/// a geometric first generation.
///
/// Rows: `n, seed, a, rep, weight, root_cycle`.
pub fn exp_cluster_weight(
    p: &ClusterWeightParams,
    cfg: &AnalyticConfig,
) -> Result<ExperimentResult> {
    let b = b_of_a(p.a, cfg)?;
    let q = 1.0 / (1.0 + b);
    let mut res = ExperimentResult::new(
        "cluster_weight",
        &["n", "seed", "a", "rep", "weight", "root_cycle"],
    );
    res.param("n", p.n)
        .param("a", p.a)
        .param("samples", p.samples)
        .param("seed", p.seed)
        .param("tolerance", p.tolerance)
        .param("tv_cap", p.tv_cap);
    let sampler = SphereSampler::new(p.n, radius_of(p.n, p.a), cfg)?;
    let draws = replicate(p.seed, 0, p.samples, |_, rng| {
        let sigma = sampler.sample(rng)?;
        let pi = sampler.sample(rng)?;
        let g = gamma_graph(&sigma, &pi)?;
        Ok((g.weighted_component(1), sigma.cycle_len_of(1)))
    })?;
    for (rep, &(w, c1)) in draws.iter().enumerate() {
        res.row(vec![
            p.n.into(),
            p.seed.into(),
            p.a.into(),
            rep.into(),
            w.into(),
            c1.into(),
        ]);
    }
    let dist: EmpiricalDist = draws.iter().map(|d| d.0 as u64).collect();
    shifted_geometric_progeny_pmf(q, InitialGeneration::GeometricCycle, 1)?;
    let law =
        |k| shifted_geometric_progeny_pmf(q, InitialGeneration::GeometricCycle, k).unwrap_or(0.0);
    let tv = dist.tv_to_law(law, p.tv_cap)?;
    res.stat("offspring_p", q, None);
    res.stat("mean_weight", dist.mean(), None);
    res.stat("truncated_mass_empirical", tv.truncated_mass_left, None);
    res.stat("truncated_mass_law", tv.truncated_mass_right, None);
    // Generation zero of the limit process is the root cycle, G(q) on {1, 2, ...}.
    let roots: EmpiricalDist = draws.iter().map(|d| d.1 as u64).collect();
    let geometric = |k: u64| {
        if k == 0 {
            0.0
        } else {
            q * (1.0 - q).powi(k as i32 - 1)
        }
    };
    res.stat(
        "tv_root_cycle",
        roots.tv_to_law(geometric, p.tv_cap)?.tv,
        None,
    );
    res.check(Check::at_most("tv_progeny", tv.tv, p.tolerance));
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thm8Params {
    pub n: usize,
    pub a_values: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    /// Extra sizes at which the Gromov product is reported as a trend only.
    pub trend_ns: Vec<usize>,
    /// Subcritical margin: mean `d(I, σπ)/n >= 2a - subcritical_margin`.
    pub subcritical_margin: f64,
    /// Supercritical tolerance on `|mean product/n - δ(a)|`.
    pub delta_tolerance: f64,
    /// Supercritical gap: mean `d(I, σπ)/n <= 2a - supercritical_gap`.
    pub supercritical_gap: f64,
}

impl Default for Thm8Params {
    fn default() -> Self {
        Thm8Params {
            n: 1500,
            a_values: vec![0.25, 0.5],
            reps: 100,
            seed: 1,
            trend_ns: vec![750],
            subcritical_margin: 0.02,
            delta_tolerance: 0.03,
            supercritical_gap: 0.05,
        }
    }
}

/// Distance `d(I, σπ)` for independent uniform `σ, π` on the sphere of
/// radius `k = ⌊an⌋`. The Gromov product `(σ | π^{-1})_I` equals `k - d/2`.
///
/// Rows: `n, seed, a, rep, distance, product`.
pub fn exp_thm8(p: &Thm8Params, cfg: &AnalyticConfig) -> Result<ExperimentResult> {
    let critical = 1.0 - std::f64::consts::LN_2;
    let mut res = ExperimentResult::new("thm8", &["n", "seed", "a", "rep", "distance", "product"]);
    res.param("n", p.n)
        .param("a_values", format!("{:?}", p.a_values))
        .param("reps", p.reps)
        .param("seed", p.seed)
        .param("trend_ns", format!("{:?}", p.trend_ns));
    let sizes: Vec<usize> = std::iter::once(p.n)
        .chain(p.trend_ns.iter().copied())
        .collect();
    let mut block = 0u64;
    for &a in &p.a_values {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::domain("a", a, "(0, 1)"));
        }
        for (i, &n) in sizes.iter().enumerate() {
            let k = radius_of(n, a);
            let sampler = SphereSampler::new(n, k, cfg)?;
            let dists = replicate(p.seed, block, p.reps, |_, rng| {
                let sigma = sampler.sample(rng)?;
                let pi = sampler.sample(rng)?;
                Ok(sigma.compose(&pi)?.distance_from_identity())
            })?;
            block += 1;
            let nf = n as f64;
            let mut ratios = Vec::with_capacity(p.reps);
            let mut products = Vec::with_capacity(p.reps);
            for (rep, &d) in dists.iter().enumerate() {
                let prod = k as f64 - d as f64 / 2.0;
                ratios.push(d as f64 / nf);
                products.push(prod);
                res.row(vec![
                    n.into(),
                    p.seed.into(),
                    a.into(),
                    rep.into(),
                    d.into(),
                    prod.into(),
                ]);
            }
            let (md, sd) = mean_se(&ratios);
            let (mp, sp) = mean_se(&products);
            res.stat(format!("mean_d_over_n[a={a},n={n}]"), md, Some(sd));
            res.stat(format!("mean_product[a={a},n={n}]"), mp, Some(sp));
            if i > 0 {
                continue;
            }
            if a < critical {
                res.check(Check::at_least(
                    format!("distance[a={a}]"),
                    md,
                    2.0 * a - p.subcritical_margin,
                ));
            } else {
                let delta = gromov_delta_uniform(a, cfg)?;
                res.stat(format!("gromov_delta_uniform[a={a}]"), delta, None);
                res.check(Check::within(
                    format!("product_over_n[a={a}]"),
                    mp / nf,
                    delta,
                    p.delta_tolerance,
                ));
                res.check(Check::at_most(
                    format!("distance[a={a}]"),
                    md,
                    2.0 * a - p.supercritical_gap,
                ));
            }
        }
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_have_expected_shape() {
        let cfg = AnalyticConfig::default();
        let r = exp_sphere_law(
            &SphereLawParams {
                n: 100,
                samples: 50,
                tolerance: 1.0,
                ..Default::default()
            },
            &cfg,
        )
        .unwrap();
        assert_eq!(r.rows.len(), 50);
        assert!(r.passed());
        let s = exp_singularity(
            &SingularityParams {
                n: 200,
                reps: 10,
                ..Default::default()
            },
            &cfg,
        )
        .unwrap();
        assert_eq!(s.rows.len(), 20);
        assert_eq!(s.checks.len(), 3);
        let t = exp_thm8(
            &Thm8Params {
                n: 120,
                reps: 4,
                trend_ns: vec![60],
                ..Default::default()
            },
            &cfg,
        )
        .unwrap();
        assert_eq!(t.rows.len(), 16);
        assert_eq!(t.checks.len(), 3);
        for row in &t.rows {
            let (super::super::Cell::Int(d), super::super::Cell::Float(prod)) = (&row[4], &row[5])
            else {
                panic!("unexpected cells");
            };
            assert!(*d >= 0 && *prod >= 0.0);
        }
    }

    #[test]
    fn sphere_law_matches_geometric_at_moderate_size() {
        let p = SphereLawParams {
            n: 400,
            samples: 2000,
            tolerance: 0.06,
            seed: 4,
            ..Default::default()
        };
        let r = exp_sphere_law(&p, &AnalyticConfig::default()).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn singularity_rejects_supercritical_radius() {
        let p = SingularityParams {
            a: 0.6,
            ..Default::default()
        };
        assert!(exp_singularity(&p, &AnalyticConfig::default()).is_err());
    }
}
