//! Seeded Monte Carlo drivers.
//!
//! Replicate `r` of block `b` always draws from the stream
//! `SeededRng::new(seed, stream_id(b, r))`, and replicates are collected in
//! order, so a result depends only on its parameters and seed, never on the
//! number of worker threads.

mod branching_exps;
mod dist;
mod fig2;
mod result;
mod sphere_exps;
mod thm1;
mod walk_exps;

pub use branching_exps::{exp_ageing_collapse, AgeingCollapseParams};
pub use dist::{tv_distance, EmpiricalDist, TvReport};
pub use fig2::{exp_fig2, Fig2Params};
pub use result::{Cell, Check, CheckKind, ExperimentResult, Summary};
pub use sphere_exps::{
    exp_cluster_weight, exp_hitting_law, exp_singularity, exp_sphere_law, exp_thm8,
    ClusterWeightParams, HittingLawParams, SingularityParams, SphereLawParams, Thm8Params,
};
pub use thm1::{exp_thm1, Thm1Params};
pub use walk_exps::{
    exp_fragmentation_rate, exp_no_fragmentation, exp_shadow_gap, exp_speed_curve,
    FragmentationRateParams, NoFragmentationParams, ShadowGapParams, SpeedCurveParams,
};

use rayon::prelude::*;

use crate::error::Result;
use crate::rng::{stream_id, SeededRng};

/// Runs `reps` replicates in parallel and returns them in replicate order.
pub fn replicate<T, F>(seed: u64, block: u64, reps: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut SeededRng) -> Result<T> + Sync + Send,
{
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = SeededRng::new(seed, stream_id(block, r as u64));
            f(r, &mut rng)
        })
        .collect()
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}
