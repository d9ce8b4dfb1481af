use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use super::{replicate, Check, EmpiricalDist, ExperimentResult};
use crate::branching::{
    modified_bp, shifted_geometric_bp_from, shifted_geometric_progeny_pmf, HeirRule,
    InitialGeneration, ModifiedBPConfig, DEFAULT_CAP,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgeingCollapseParams {
    pub p: f64,
    pub samples: usize,
    pub seed: u64,
    pub heir: HeirRule,
    pub tolerance: f64,
    pub tv_cap: u64,
}

impl Default for AgeingCollapseParams {
    fn default() -> Self {
        AgeingCollapseParams {
            p: 0.6,
            samples: 100_000,
            seed: 1,
            heir: HeirRule::First,
            tolerance: 0.01,
            tv_cap: 50,
        }
    }
}

/// Total progeny of the ageing process with offspring and lifetime laws both
/// geometric with parameter `p`, against the shifted-geometric branching
/// process, each started from a geometric first generation.
///
/// Rows: `p, seed, rep, ageing_total, plain_total` (totals above the cap are
/// recorded as -1).
pub fn exp_ageing_collapse(p: &AgeingCollapseParams) -> Result<ExperimentResult> {
    let mut res = ExperimentResult::new(
        "ageing_collapse",
        &["p", "seed", "rep", "ageing_total", "plain_total"],
    );
    res.param("p", p.p)
        .param("samples", p.samples)
        .param("seed", p.seed)
        .param("heir", format!("{:?}", p.heir).to_lowercase())
        .param("tolerance", p.tolerance)
        .param("tv_cap", p.tv_cap);
    let cfg = ModifiedBPConfig {
        offspring_p: p.p,
        lifetime_p: p.p,
        heir: p.heir,
        initial: InitialGeneration::GeometricCycle,
    };
    cfg.validate()?;
    let geo = Geometric::new(p.p).map_err(|_| Error::domain("p", p.p, "(0, 1]"))?;
    let ageing = replicate(p.seed, 0, p.samples, |_, rng| {
        Ok(modified_bp(&cfg, rng, DEFAULT_CAP)?.total)
    })?;
    let plain = replicate(p.seed, 1, p.samples, |_, rng| {
        let z0 = 1 + geo.sample(rng);
        Ok(shifted_geometric_bp_from(p.p, z0, rng, DEFAULT_CAP)?.total)
    })?;
    let code = |t: Option<u64>| t.map_or(-1, |v| v as i64);
    for (rep, (a, b)) in ageing.iter().zip(&plain).enumerate() {
        res.row(vec![
            p.p.into(),
            p.seed.into(),
            rep.into(),
            code(*a).into(),
            code(*b).into(),
        ]);
    }
    let da: EmpiricalDist = ageing.iter().map(|t| t.unwrap_or(u64::MAX)).collect();
    let db: EmpiricalDist = plain.iter().map(|t| t.unwrap_or(u64::MAX)).collect();
    let two_sample = da.tv_truncated(&db, p.tv_cap)?;
    let law =
        |k| shifted_geometric_progeny_pmf(p.p, InitialGeneration::GeometricCycle, k).unwrap_or(0.0);
    let exact = da.tv_to_law(law, p.tv_cap)?;
    res.stat("tv_two_sample", two_sample.tv, None);
    res.stat("tv_ageing_vs_exact_law", exact.tv, None);
    res.stat("mean_ageing", da.mean(), None);
    res.stat("mean_plain", db.mean(), None);
    res.check(Check::at_most("tv_two_sample", two_sample.tv, p.tolerance));
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run() {
        let r = exp_ageing_collapse(&AgeingCollapseParams {
            samples: 2000,
            tolerance: 0.1,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(r.rows.len(), 2000);
        assert!(r.passed());
        assert!(exp_ageing_collapse(&AgeingCollapseParams {
            p: 0.0,
            ..Default::default()
        })
        .is_err());
    }
}
