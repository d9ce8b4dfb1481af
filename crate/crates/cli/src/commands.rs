use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{bail, Context, Result};
use cayley_core::analytic::{
    geodesic_count_formula, log_sphere_size, radius_of, sphere_size_exact, AnalyticConfig,
};
use cayley_core::experiments::*;
use cayley_core::geodesic::count_geodesics_oracle;
use cayley_core::samplers::{hitting_sample, nu0_sample, SphereSampler};
use cayley_core::walk::{self, WalkTrace};
use cayley_core::{CycleStructure, Error, SeededRng};

use crate::args::*;
use crate::config::FileConfig;

/// Invalid invocation detected after argument parsing.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Core errors caused by parameters rather than by a failed computation.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Domain { .. }
            | Error::Parse(_)
            | Error::TooLarge { .. }
            | Error::RadiusTooLarge { .. }
            | Error::EmptyGroundSet
            | Error::IndexOutOfRange { .. }
            | Error::SizeMismatch { .. }
    )
}

enum Output {
    Experiment(ExperimentResult),
    Trace(WalkTrace),
    Value { name: &'static str, value: String },
}

/// Runs one command; `Ok(false)` means a tolerance check failed under `--check`.
pub fn run(cli: Cli) -> Result<bool> {
    let common = cli.common;
    if let Some(jobs) = common.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let file = FileConfig::load(common.config.as_deref()).map_err(|e| usage(format!("{e:#}")))?;
    let seed_source = common.seed.or(file.seed);
    let seed = || -> u64 {
        let s = seed_source.unwrap_or_else(rand::random);
        eprintln!("seed: {s}");
        s
    };
    let output = dispatch(cli.command, &file, seed)?;
    emit(&output, &common)?;
    Ok(match &output {
        Output::Experiment(r) => {
            for c in &r.checks {
                eprintln!("{c}");
            }
            !common.check || r.passed()
        }
        _ => true,
    })
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn dispatch(cmd: Command, file: &FileConfig, seed: impl FnOnce() -> u64) -> Result<Output> {
    let cfg: &AnalyticConfig = &file.analytic;
    let out = match cmd {
        Command::SpeedCurve(a) => {
            let mut p = file.speed_curve.clone();
            set(&mut p.n, a.n);
            set(&mut p.c_grid, a.c);
            set(&mut p.reps, a.reps);
            set(&mut p.tolerance, a.tolerance);
            p.seed = seed();
            Output::Experiment(exp_speed_curve(&p, cfg)?)
        }
        Command::NoFragmentation(a) => {
            let mut p = file.no_fragmentation.clone();
            set(&mut p.n, a.n);
            set(&mut p.c, a.c);
            set(&mut p.reps, a.reps);
            set(&mut p.tolerance, a.tolerance);
            p.seed = seed();
            Output::Experiment(exp_no_fragmentation(&p)?)
        }
        Command::Thm1(a) => {
            let mut p = file.thm1.clone();
            set(&mut p.small_ns, a.n);
            set(&mut p.small_a, a.a);
            set(&mut p.small_reps, a.reps);
            set(&mut p.large_a, a.large_a);
            set(&mut p.large_n, a.large_n);
            set(&mut p.large_reps, a.large_reps);
            p.seed = seed();
            Output::Experiment(exp_thm1(&p, cfg)?)
        }
        Command::Thm8(a) => {
            let mut p = file.thm8.clone();
            set(&mut p.n, a.n);
            set(&mut p.a_values, a.a);
            set(&mut p.reps, a.reps);
            set(&mut p.trend_ns, a.trend_n);
            p.seed = seed();
            Output::Experiment(exp_thm8(&p, cfg)?)
        }
        Command::Singularity(a) => {
            let mut p = file.singularity.clone();
            set(&mut p.n, a.n);
            set(&mut p.a, a.a);
            set(&mut p.reps, a.reps);
            set(&mut p.max_error_rate, a.max_error_rate);
            p.seed = seed();
            Output::Experiment(exp_singularity(&p, cfg)?)
        }
        Command::Fig2(a) => {
            let mut p = file.fig2.clone();
            set(&mut p.a_grid, a.a);
            set(&mut p.refined_grid, a.refined_grid);
            let mut cfg = cfg.clone();
            set(&mut cfg.extrapolation_grid, a.grid);
            cfg.validate()?;
            Output::Experiment(exp_fig2(&p, &cfg)?)
        }
        Command::SphereLaw(a) => {
            let mut p = file.sphere_law.clone();
            set(&mut p.n, a.n);
            set(&mut p.a, a.a);
            set(&mut p.samples, a.samples);
            set(&mut p.tolerance, a.tolerance);
            p.seed = seed();
            Output::Experiment(exp_sphere_law(&p, cfg)?)
        }
        Command::HittingLaw(a) => {
            let mut p = file.hitting_law.clone();
            set(&mut p.n, a.n);
            set(&mut p.a, a.a);
            set(&mut p.samples, a.samples);
            set(&mut p.tolerance, a.tolerance);
            p.seed = seed();
            Output::Experiment(exp_hitting_law(&p)?)
        }
        Command::ShadowGap(a) => {
            let mut p = file.shadow_gap.clone();
            set(&mut p.ns, a.n);
            set(&mut p.c, a.c);
            set(&mut p.reps, a.reps);
            p.seed = seed();
            Output::Experiment(exp_shadow_gap(&p, cfg)?)
        }
        Command::FragmentationRate(a) => {
            let mut p = file.fragmentation_rate.clone();
            set(&mut p.n, a.n);
            set(&mut p.c, a.c);
            set(&mut p.reps, a.reps);
            set(&mut p.window, a.window);
            set(&mut p.tolerance, a.tolerance);
            p.seed = seed();
            Output::Experiment(exp_fragmentation_rate(&p, cfg)?)
        }
        Command::BranchingCheck(a) => match a.kind {
            BranchingKind::Ageing => {
                let mut p = file.ageing_collapse.clone();
                set(&mut p.p, a.p);
                set(&mut p.samples, a.samples);
                set(&mut p.tolerance, a.tolerance);
                p.seed = seed();
                Output::Experiment(exp_ageing_collapse(&p)?)
            }
            BranchingKind::ClusterWeight => {
                let mut p = file.cluster_weight.clone();
                set(&mut p.n, a.n);
                set(&mut p.a, a.a);
                set(&mut p.samples, a.samples);
                set(&mut p.tolerance, a.tolerance);
                p.seed = seed();
                Output::Experiment(exp_cluster_weight(&p, cfg)?)
            }
        },
        Command::SphereSample(a) => Output::Experiment(sphere_samples(&a, cfg, seed())?),
        Command::HittingSample(a) => Output::Experiment(hitting_samples(&a, seed())?),
        Command::GeodesicCount(a) => geodesic_count(&a)?,
        Command::Volume(a) => Output::Value {
            name: if a.exact {
                "sphere_size"
            } else {
                "ln_sphere_size"
            },
            value: if a.exact {
                sphere_size_exact(a.n, a.k)?.to_string()
            } else {
                log_sphere_size(a.n, a.k)?.to_string()
            },
        },
        Command::WalkTrace(a) => {
            let steps = match (a.steps, a.c) {
                (Some(s), _) => s,
                (None, Some(c)) if c >= 0.0 && c.is_finite() => {
                    (c * a.n as f64 / 2.0 + 1e-9).floor() as usize
                }
                _ => return Err(usage("walk-trace needs --steps or a non-negative --c")),
            };
            let seed = seed();
            let mut rng = SeededRng::new(seed, 0);
            Output::Trace(walk::run(a.n, steps, &mut rng)?.with_seed(seed))
        }
    };
    Ok(out)
}

fn sphere_samples(
    a: &SphereSampleArgs,
    cfg: &AnalyticConfig,
    seed: u64,
) -> Result<ExperimentResult> {
    let k = match (a.k, a.a) {
        (Some(k), _) => k,
        (None, Some(r)) if (0.0..1.0).contains(&r) => radius_of(a.n, r),
        _ => return Err(usage("sphere-sample needs --k or --a in [0, 1)")),
    };
    let sampler = SphereSampler::new(a.n, k, cfg)?;
    let perms = replicate(seed, 0, a.count, |_, rng| sampler.sample(rng))?;
    let mut r = ExperimentResult::new(
        "sphere_sample",
        &[
            "n",
            "seed",
            "k",
            "sample",
            "distance",
            "fixed_points",
            "cycles",
        ],
    );
    r.param("n", a.n)
        .param("k", k)
        .param("count", a.count)
        .param("seed", seed);
    for (i, p) in perms.iter().enumerate() {
        r.row(vec![
            a.n.into(),
            seed.into(),
            k.into(),
            i.into(),
            p.distance_from_identity().into(),
            p.fixed_points().into(),
            p.to_string().into(),
        ]);
    }
    Ok(r)
}

fn hitting_samples(a: &HittingSampleArgs, seed: u64) -> Result<ExperimentResult> {
    let draws = replicate(seed, 0, a.count, |_, rng| {
        if a.no_fragmentation {
            let s = nu0_sample(a.n, a.a, rng)?;
            Ok((s.sample, s.attempts))
        } else {
            Ok((hitting_sample(a.n, a.a, rng)?, 1))
        }
    })?;
    let mut r = ExperimentResult::new(
        "hitting_sample",
        &[
            "n",
            "seed",
            "a",
            "sample",
            "hitting_steps",
            "fragmentations",
            "attempts",
            "cycles",
        ],
    );
    r.param("n", a.n)
        .param("a", a.a)
        .param("count", a.count)
        .param("no_fragmentation", a.no_fragmentation)
        .param("seed", seed);
    for (i, (s, attempts)) in draws.iter().enumerate() {
        r.row(vec![
            a.n.into(),
            seed.into(),
            a.a.into(),
            i.into(),
            s.hitting_steps.into(),
            s.fragmentations.into(),
            (*attempts).into(),
            s.perm.to_string().into(),
        ]);
    }
    Ok(r)
}

fn geodesic_count(a: &GeodesicCountArgs) -> Result<Output> {
    if a.cycles.contains(&0) {
        return Err(usage("cycle lengths must be positive"));
    }
    let used: usize = a.cycles.iter().sum();
    let n = a.n.unwrap_or(used);
    if n < used {
        return Err(usage(format!(
            "--n {n} is smaller than the total cycle length {used}"
        )));
    }
    let sizes = a
        .cycles
        .iter()
        .copied()
        .chain(std::iter::repeat_n(1, n - used));
    let cs = CycleStructure::from_sizes(sizes);
    let count = geodesic_count_formula(&cs);
    if a.oracle {
        let oracle = count_geodesics_oracle(&cs.representative()?)?;
        if oracle != count {
            bail!("formula gives {count} but exhaustive count gives {oracle}");
        }
    }
    Ok(Output::Value {
        name: "geodesic_count",
        value: count.to_string(),
    })
}

fn emit(output: &Output, common: &Common) -> Result<()> {
    let sink: Box<dyn Write> = match &common.out {
        Some(path) => {
            Box::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match (output, common.format) {
        (Output::Experiment(r), Format::Csv) => r.write_csv(&mut w)?,
        (Output::Experiment(r), Format::Json) => writeln!(w, "{}", r.to_json()?)?,
        (Output::Trace(t), Format::Csv) => {
            writeln!(w, "# experiment: walk_trace")?;
            writeln!(w, "# n = {}", t.n)?;
            writeln!(w, "# steps = {}", t.len())?;
            if let Some(s) = t.seed {
                writeln!(w, "# seed = {s}")?;
            }
            t.write_csv(&mut w)?;
        }
        (Output::Trace(t), Format::Json) => writeln!(w, "{}", serde_json::to_string_pretty(t)?)?,
        (Output::Value { value, .. }, Format::Csv) => writeln!(w, "{value}")?,
        (Output::Value { name, value }, Format::Json) => {
            writeln!(w, "{}", serde_json::json!({ *name: value }))?;
        }
    }
    w.flush()?;
    Ok(())
}
