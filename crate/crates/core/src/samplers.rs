//! Random generation of the measures studied in this crate: uniform
//! permutations, the uniform law on a sphere, and the law of the walk when
//! it first reaches a sphere.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{b_of_a, AnalyticConfig};
use crate::error::{Error, Result};
use crate::perm::{Permutation, StepKind};
use crate::walk::{WalkState, WalkTrace};

/// Default number of rejection attempts before giving up.
pub const DEFAULT_RETRY_CAP: u64 = 1_000_000;

/// Uniform random permutation of `{1, ..., n}`, built by sequential
/// insertion: element `i` either opens a new cycle (probability `1/i`) or is
/// inserted after a uniformly chosen earlier element.
pub fn uniform_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    let mut image: Vec<u32> = Vec::with_capacity(n);
    for i in 0..n {
        let r = rng.random_range(0..=i);
        if r == i {
            image.push(i as u32);
        } else {
            image.push(image[r]);
            image[r] = i as u32;
        }
    }
    Ok(Permutation::from_zero_based(image))
}

/// Independent bits with `P(bit_i = 1) = b(i-1)/(b(i-1) + n)`, `b = b(a)`.
/// The expected number of ones is `an + o(n)`.
pub fn tilted_bernoulli_sequence<R: Rng + ?Sized>(
    n: usize,
    a: f64,
    cfg: &AnalyticConfig,
    rng: &mut R,
) -> Result<Vec<bool>> {
    let b = b_of_a(a, cfg)?;
    let nf = n as f64;
    Ok((1..=n)
        .map(|i| {
            let x = b * (i - 1) as f64;
            rng.random_bool(x / (x + nf))
        })
        .collect())
}

/// Sampler for the logarithmic law `P(X = j) = ξ^j / (j (-ln(1 - ξ)))`,
/// by inversion against a cached cumulative distribution.
#[derive(Debug, Clone)]
pub struct LogarithmicSampler {
    xi: f64,
    norm: f64,
    cdf: Vec<f64>,
}

impl LogarithmicSampler {
    const MAX_CACHE: usize = 1 << 20;

    pub fn new(xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi < 1.0) {
            return Err(Error::domain("xi", xi, "(0, 1)"));
        }
        let norm = -(-xi).ln_1p();
        let mut cdf = Vec::new();
        let mut acc = 0.0;
        let mut j = 1usize;
        while cdf.len() < Self::MAX_CACHE {
            let pmf = (j as f64 * xi.ln() - (j as f64).ln()).exp() / norm;
            acc += pmf;
            cdf.push(acc);
            if 1.0 - acc < 1e-15 || pmf < 1e-300 {
                break;
            }
            j += 1;
        }
        Ok(LogarithmicSampler { xi, norm, cdf })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn pmf(&self, j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        (j as f64 * self.xi.ln() - (j as f64).ln()).exp() / self.norm
    }

    pub fn mean(&self) -> f64 {
        self.xi / ((1.0 - self.xi) * self.norm)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c < u);
        if idx < self.cdf.len() {
            return idx + 1;
        }
        // Beyond the cache: continue the cumulative sum sequentially.
        let mut acc = *self.cdf.last().expect("cache is non-empty");
        let mut j = self.cdf.len();
        loop {
            j += 1;
            let p = self.pmf(j);
            acc += p;
            if acc >= u || p == 0.0 {
                return j;
            }
        }
    }
}

/// One draw from the logarithmic law with parameter `ξ`.
pub fn logarithmic_sample<R: Rng + ?Sized>(xi: f64, rng: &mut R) -> Result<usize> {
    Ok(LogarithmicSampler::new(xi)?.sample(rng))
}

/// Exact sampler for the uniform law on the sphere of radius `k` around the
/// identity, i.e. on permutations with `n - k` cycles.
///
/// Cycle sizes are drawn as `m = n - k` independent logarithmic variables
/// conditioned (by rejection) on summing to `n`; the parameter is tuned so
/// that the unconditioned sum has mean `n`. Elements are then shuffled,
/// cut into consecutive blocks of those sizes, and each block is read as a
/// cycle.
#[derive(Debug, Clone)]
pub struct SphereSampler {
    n: usize,
    k: usize,
    sizes: Option<LogarithmicSampler>,
    retry_cap: u64,
}

impl SphereSampler {
    pub fn new(n: usize, k: usize, cfg: &AnalyticConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        if k >= n {
            return Err(Error::RadiusTooLarge { k, n });
        }
        let m = n - k;
        let sizes = if k == 0 || m == 1 {
            None
        } else {
            let b = b_of_a(k as f64 / n as f64, cfg)?;
            let sampler = LogarithmicSampler::new(b / (1.0 + b))?;
            let mean_total = m as f64 * sampler.mean();
            if (mean_total - n as f64).abs() > 0.5 {
                return Err(Error::NoConvergence {
                    what: "sphere sampler mean matching",
                });
            }
            Some(sampler)
        };
        Ok(SphereSampler {
            n,
            k,
            sizes,
            retry_cap: DEFAULT_RETRY_CAP,
        })
    }

    pub fn with_retry_cap(mut self, cap: u64) -> Self {
        self.retry_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Cycle sizes in exchangeable order, summing to `n`.
    pub fn sample_sizes<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<usize>> {
        let m = self.n - self.k;
        let Some(sampler) = &self.sizes else {
            return Ok(if m == 1 {
                vec![self.n]
            } else {
                vec![1; self.n]
            });
        };
        let mut sizes = Vec::with_capacity(m);
        for _ in 0..self.retry_cap {
            sizes.clear();
            let mut total = 0usize;
            let mut ok = true;
            for drawn in 0..m {
                total += sampler.sample(rng);
                // Every remaining value is at least one.
                if total + (m - drawn - 1) > self.n {
                    ok = false;
                    break;
                }
                sizes.push(total);
            }
            if ok && total == self.n {
                let mut prev = 0;
                for s in sizes.iter_mut() {
                    let cum = *s;
                    *s = cum - prev;
                    prev = cum;
                }
                return Ok(sizes);
            }
        }
        Err(Error::RetryCap {
            what: "uniform_on_sphere",
            cap: self.retry_cap,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Permutation> {
        let sizes = self.sample_sizes(rng)?;
        let mut order: Vec<u32> = (0..self.n as u32).collect();
        order.shuffle(rng);
        let mut image = vec![0u32; self.n];
        let mut start = 0;
        for len in sizes {
            let block = &order[start..start + len];
            for (idx, &x) in block.iter().enumerate() {
                image[x as usize] = block[(idx + 1) % len];
            }
            start += len;
        }
        Ok(Permutation::from_zero_based(image))
    }
}

/// One uniform sample from the sphere of radius `k` in `S_n`.
pub fn uniform_on_sphere<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    cfg: &AnalyticConfig,
    rng: &mut R,
) -> Result<Permutation> {
    SphereSampler::new(n, k, cfg)?.sample(rng)
}

/// Position of the walk when it first reaches distance `⌊an⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingSample {
    pub perm: Permutation,
    /// Number of steps `T` taken to reach the sphere.
    pub hitting_steps: u64,
    /// Fragmentations before `T`.
    pub fragmentations: u64,
}

/// A conditioned sample together with the number of walks it took.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Nu0Sample {
    pub sample: HittingSample,
    pub attempts: u64,
}

/// Step budget of [`hitting_sample`], as a multiple of `n`.
pub const HITTING_STEP_CAP_FACTOR: u64 = 50;

/// Runs the walk from the identity until its distance first equals `⌊an⌋`.
///
/// Requires `a <= 1 - 5 ln(n)/n`: the walk's equilibrium distance is
/// `n - Θ(ln n)` and hitting times beyond it explode.
pub fn hitting_sample<R: Rng + ?Sized>(n: usize, a: f64, rng: &mut R) -> Result<HittingSample> {
    let target = hitting_target(n, a)?;
    let mut state = WalkState::new(n)?;
    let cap = HITTING_STEP_CAP_FACTOR * n as u64;
    while state.distance() < target {
        if state.steps() >= cap {
            return Err(Error::StepCap { target, cap });
        }
        state.step(rng);
    }
    Ok(HittingSample {
        hitting_steps: state.steps(),
        fragmentations: state.frag_total(),
        perm: state.into_perm(),
    })
}

/// Like [`hitting_sample`], but keeps every increment up to the hitting time.
pub fn hitting_walk<R: Rng + ?Sized>(n: usize, a: f64, rng: &mut R) -> Result<WalkTrace> {
    let target = hitting_target(n, a)?;
    let mut state = WalkState::new(n)?;
    let mut trace = WalkTrace::empty(n);
    let cap = HITTING_STEP_CAP_FACTOR * n as u64;
    while state.distance() < target {
        if state.steps() >= cap {
            return Err(Error::StepCap { target, cap });
        }
        trace.push(state.step(rng));
    }
    Ok(trace)
}

fn hitting_target(n: usize, a: f64) -> Result<usize> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    let ceiling = 1.0 - 5.0 * (n as f64).ln() / n as f64;
    if !(a >= 0.0 && a <= ceiling.max(0.0)) {
        return Err(Error::domain("a", a, "[0, 1 - 5 ln(n)/n]"));
    }
    Ok(crate::analytic::radius_of(n, a))
}

/// The hitting law conditioned on no fragmentation, by rejection: a walk of
/// exactly `⌊an⌋` steps is restarted as soon as it fragments a cycle.
pub fn nu0_sample<R: Rng + ?Sized>(n: usize, a: f64, rng: &mut R) -> Result<Nu0Sample> {
    nu0_sample_capped(n, a, DEFAULT_RETRY_CAP, rng)
}

pub fn nu0_sample_capped<R: Rng + ?Sized>(
    n: usize,
    a: f64,
    retry_cap: u64,
    rng: &mut R,
) -> Result<Nu0Sample> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if !(a > 0.0 && a < 0.5) {
        return Err(Error::domain("a", a, "(0, 1/2)"));
    }
    let target = crate::analytic::radius_of(n, a);
    'attempt: for attempt in 1..=retry_cap {
        let mut state = WalkState::new(n)?;
        for _ in 0..target {
            if state.step(rng).kind == StepKind::Fragmentation {
                continue 'attempt;
            }
        }
        return Ok(Nu0Sample {
            sample: HittingSample {
                hitting_steps: target as u64,
                fragmentations: 0,
                perm: state.into_perm(),
            },
            attempts: attempt,
        });
    }
    Err(Error::RetryCap {
        what: "nu0_sample",
        cap: retry_cap,
    })
}
