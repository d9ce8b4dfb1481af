use serde::{Deserialize, Serialize};

use super::{mean_se, replicate, Check, ExperimentResult};
use crate::analytic::{gromov_delta_hitting, AnalyticConfig};
use crate::error::{Error, Result};
use crate::geodesic::{point_to_path_distance, shadow_geodesic_with, ShadowOptions};
use crate::perm::{cayley_distance, Permutation, Transposition};
use crate::samplers::hitting_walk;
use crate::walk::WalkTrace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thm1Params {
    /// Radius ratio of the bounded regime.
    pub small_a: f64,
    pub small_ns: Vec<usize>,
    pub small_reps: usize,
    /// Radius ratio of the linear regime.
    pub large_a: f64,
    pub large_n: usize,
    pub large_reps: usize,
    pub seed: u64,
    pub max_mean_product: f64,
    pub max_mean_geodesic_distance: f64,
    /// Allowed difference between consecutive sizes, in combined standard errors.
    pub stability_se: f64,
    pub delta_tolerance: f64,
    pub check_stride: usize,
}

impl Default for Thm1Params {
    fn default() -> Self {
        Thm1Params {
            small_a: 0.15,
            small_ns: vec![500, 1000, 2000],
            small_reps: 200,
            large_a: 0.4,
            large_n: 2000,
            large_reps: 100,
            seed: 1,
            max_mean_product: 6.0,
            max_mean_geodesic_distance: 8.0,
            stability_se: 2.0,
            delta_tolerance: 0.03,
            check_stride: 1,
        }
    }
}

/// One replicate: the Gromov product `(x|y)_I` of two independent hitting
/// samples and the distance from `I` to a geodesic joining them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm1Sample {
    pub dist_x: usize,
    pub dist_y: usize,
    pub dist_xy: usize,
    pub product: f64,
    pub geodesic_distance: usize,
}

/// The path `x = X_T, ..., X_0 = I, Y_1, ..., Y_{T'} = y` is a walk from `x`.
/// Translated by `x^{-1}` it is a walk from the identity with increments
/// `τ_T, ..., τ_1, τ'_1, ..., τ'_{T'}`; its shadow geodesic, translated back,
/// joins `y` to `x`.
pub fn thm1_sample(
    x: &WalkTrace,
    y: &WalkTrace,
    check_stride: usize,
    rng: &mut impl rand::Rng,
) -> Result<Thm1Sample> {
    let n = x.n;
    let increments: Vec<Transposition> =
        x.transpositions().rev().chain(y.transpositions()).collect();
    let joined = WalkTrace::from_transpositions(n, &increments)?;
    let xp = x.endpoint();
    let yp = y.endpoint();
    let shadow = shadow_geodesic_with(&joined, ShadowOptions { check_stride }, rng)?;
    let path = shadow.path.left_translate(&xp)?;
    if path.start() != &yp || path.target() != &xp {
        return Err(Error::NotGeodesic {
            step: 0,
            detail: "translated shadow path does not join the samples".into(),
        });
    }
    let dist_x = xp.distance_from_identity();
    let dist_y = yp.distance_from_identity();
    let dist_xy = cayley_distance(&xp, &yp)?;
    Ok(Thm1Sample {
        dist_x,
        dist_y,
        dist_xy,
        product: (dist_x + dist_y) as f64 / 2.0 - dist_xy as f64 / 2.0,
        geodesic_distance: point_to_path_distance(&Permutation::identity(n)?, &path)?,
    })
}

/// Gromov products of pairs of hitting samples at the identity, and the
/// distance from the identity to a geodesic between them.
///
/// Rows: `n, seed, a, rep, dist_xy, product, geodesic_distance`.
pub fn exp_thm1(p: &Thm1Params, cfg: &AnalyticConfig) -> Result<ExperimentResult> {
    let mut res = ExperimentResult::new(
        "thm1",
        &[
            "n",
            "seed",
            "a",
            "rep",
            "dist_xy",
            "product",
            "geodesic_distance",
        ],
    );
    res.param("small_a", p.small_a)
        .param("small_ns", format!("{:?}", p.small_ns))
        .param("small_reps", p.small_reps)
        .param("large_a", p.large_a)
        .param("large_n", p.large_n)
        .param("large_reps", p.large_reps)
        .param("seed", p.seed);
    for a in [p.small_a, p.large_a] {
        if !(a > 0.0 && a < 0.5) {
            return Err(Error::domain("a", a, "(0, 1/2)"));
        }
    }
    let mut run = |block: u64, n: usize, a: f64, reps: usize| -> Result<Vec<Thm1Sample>> {
        let samples = replicate(p.seed, block, reps, |_, rng| {
            let x = hitting_walk(n, a, rng)?;
            let y = hitting_walk(n, a, rng)?;
            thm1_sample(&x, &y, p.check_stride, rng)
        })?;
        for (rep, s) in samples.iter().enumerate() {
            res.row(vec![
                n.into(),
                p.seed.into(),
                a.into(),
                rep.into(),
                s.dist_xy.into(),
                s.product.into(),
                s.geodesic_distance.into(),
            ]);
        }
        Ok(samples)
    };

    let mut small = Vec::new();
    for (block, &n) in p.small_ns.iter().enumerate() {
        let s = run(block as u64, n, p.small_a, p.small_reps)?;
        let prod = mean_se(&s.iter().map(|x| x.product).collect::<Vec<_>>());
        let geo = mean_se(
            &s.iter()
                .map(|x| x.geodesic_distance as f64)
                .collect::<Vec<_>>(),
        );
        small.push((n, prod, geo));
    }
    let large = run(p.small_ns.len() as u64, p.large_n, p.large_a, p.large_reps)?;

    let a = p.small_a;
    for &(n, (mp, sp), (mg, sg)) in &small {
        res.stat(format!("mean_product[a={a},n={n}]"), mp, Some(sp));
        res.stat(format!("mean_geodesic_distance[a={a},n={n}]"), mg, Some(sg));
        res.check(Check::at_most(
            format!("product_bounded[n={n}]"),
            mp,
            p.max_mean_product,
        ));
        res.check(Check::at_most(
            format!("geodesic_distance_bounded[n={n}]"),
            mg,
            p.max_mean_geodesic_distance,
        ));
    }
    for w in small.windows(2) {
        let ((n0, (p0, s0), (g0, t0)), (n1, (p1, s1), (g1, t1))) = (w[0], w[1]);
        let tag = format!("{n0}->{n1}");
        res.check(Check::within(
            format!("product_stable[{tag}]"),
            p1,
            p0,
            p.stability_se * (s0 * s0 + s1 * s1).sqrt(),
        ));
        res.check(Check::within(
            format!("geodesic_distance_stable[{tag}]"),
            g1,
            g0,
            p.stability_se * (t0 * t0 + t1 * t1).sqrt(),
        ));
    }

    let a = p.large_a;
    let n = p.large_n as f64;
    let (mp, sp) = mean_se(&large.iter().map(|x| x.product / n).collect::<Vec<_>>());
    let (mg, sg) = mean_se(
        &large
            .iter()
            .map(|x| x.geodesic_distance as f64 / n)
            .collect::<Vec<_>>(),
    );
    let delta = gromov_delta_hitting(a, cfg)?;
    res.stat(format!("mean_product_over_n[a={a}]"), mp, Some(sp));
    res.stat(
        format!("mean_geodesic_distance_over_n[a={a}]"),
        mg,
        Some(sg),
    );
    res.stat(format!("gromov_delta_hitting[a={a}]"), delta, None);
    res.check(Check::within(
        format!("product_over_n[a={a}]"),
        mp,
        delta,
        p.delta_tolerance,
    ));
    Ok(res)
}
