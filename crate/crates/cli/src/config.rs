use std::path::Path;

use anyhow::{Context, Result};
use cayley_core::analytic::AnalyticConfig;
use cayley_core::experiments::{
    AgeingCollapseParams, ClusterWeightParams, Fig2Params, FragmentationRateParams,
    HittingLawParams, NoFragmentationParams, ShadowGapParams, SingularityParams, SpeedCurveParams,
    SphereLawParams, Thm1Params, Thm8Params,
};
use serde::Deserialize;

/// Optional TOML configuration. Every table and key may be omitted;
/// command-line flags override values read here.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    /// Base seed, used when --seed is absent. Seeds inside experiment tables
    /// are always replaced by the resolved base seed.
    pub seed: Option<u64>,
    pub analytic: AnalyticConfig,
    pub speed_curve: SpeedCurveParams,
    pub no_fragmentation: NoFragmentationParams,
    pub thm1: Thm1Params,
    pub thm8: Thm8Params,
    pub singularity: SingularityParams,
    pub fig2: Fig2Params,
    pub sphere_law: SphereLawParams,
    pub hitting_law: HittingLawParams,
    pub shadow_gap: ShadowGapParams,
    pub fragmentation_rate: FragmentationRateParams,
    pub ageing_collapse: AgeingCollapseParams,
    pub cluster_weight: ClusterWeightParams,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: FileConfig =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.analytic
            .validate()
            .context("invalid [analytic] table")?;
        Ok(cfg)
    }
}
