//! Branching processes and the cycle-adjacency graph of two permutations.
//!
//! All processes are simulated generation by generation with a cap on the
//! total population; runs that exceed the cap are reported as such and count
//! as survival.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Geometric, Poisson};
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::dsu::EdgeCountingDsu;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default population cap.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Outcome of one branching-process run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgenySample {
    /// Total progeny, or `None` when the population exceeded the cap.
    pub total: Option<u64>,
    /// Generation sizes `Z_0, Z_1, ...` up to extinction or the cap.
    pub generations: Vec<u64>,
}

impl ProgenySample {
    pub fn exceeded(&self) -> bool {
        self.total.is_none()
    }

    fn run(initial: u64, cap: u64, mut next: impl FnMut(u64) -> u64) -> Self {
        let mut generations = vec![initial];
        let mut total = initial;
        let mut z = initial;
        while z > 0 {
            if total > cap {
                return ProgenySample {
                    total: None,
                    generations,
                };
            }
            z = next(z);
            total += z;
            generations.push(z);
        }
        ProgenySample {
            total: Some(total),
            generations,
        }
    }
}

fn check_p(name: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(name, p, "(0, 1)"))
    }
}

/// Sum of `z` independent geometric variables counting failures before the
/// first success, i.e. a negative binomial draw.
fn negative_binomial<R: Rng + ?Sized>(z: u64, p: f64, geo: &Geometric, rng: &mut R) -> u64 {
    if z <= 32 {
        return (0..z).map(|_| geo.sample(rng)).sum();
    }
    let lambda = Gamma::new(z as f64, (1.0 - p) / p)
        .expect("positive shape and scale")
        .sample(rng);
    poisson(lambda, rng)
}

fn poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    Poisson::new(lambda)
        .expect("finite positive mean")
        .sample(rng) as u64
}

/// Galton-Watson process with offspring `P(X = j) = (1-p)^j p`, `j >= 0`,
/// started from one individual.
pub fn shifted_geometric_bp<R: Rng + ?Sized>(
    p: f64,
    rng: &mut R,
    cap: u64,
) -> Result<ProgenySample> {
    shifted_geometric_bp_from(p, 1, rng, cap)
}

/// As [`shifted_geometric_bp`], started from `initial` individuals.
pub fn shifted_geometric_bp_from<R: Rng + ?Sized>(
    p: f64,
    initial: u64,
    rng: &mut R,
    cap: u64,
) -> Result<ProgenySample> {
    check_p("p", p)?;
    let geo = Geometric::new(p).map_err(|_| Error::domain("p", p, "(0, 1)"))?;
    Ok(ProgenySample::run(initial, cap, |z| {
        negative_binomial(z, p, &geo, rng)
    }))
}

/// Poisson(c) Galton-Watson process from one individual.
pub fn pgw_total_progeny<R: Rng + ?Sized>(c: f64, rng: &mut R, cap: u64) -> Result<ProgenySample> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain("c", c, "(0, inf)"));
    }
    Ok(ProgenySample::run(1, cap, |z| poisson(c * z as f64, rng)))
}

/// Exact law of the total progeny of [`shifted_geometric_bp_from`], by the
/// hitting-time formula `P(total = k | Z_0 = j) = (j/k) P(S_k = k - j)`, where
/// `S_k` is a sum of `k` offspring variables (negative binomial).
/// With [`InitialGeneration::GeometricCycle`], `Z_0 ~ G(p)` on `{1, 2, ...}`.
pub fn shifted_geometric_progeny_pmf(p: f64, initial: InitialGeneration, k: u64) -> Result<f64> {
    check_p("p", p)?;
    if k == 0 {
        return Ok(0.0);
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let kf = k as f64;
    let given = |j: u64| -> f64 {
        let s = k - j;
        let ln_binom = ln_factorial(s + k - 1) - ln_factorial(k - 1) - ln_factorial(s);
        (j as f64 / kf) * (ln_binom + kf * lp + s as f64 * lq).exp()
    };
    Ok(match initial {
        InitialGeneration::SingleRoot => given(1),
        InitialGeneration::GeometricCycle => (1..=k)
            .map(|j| given(j) * ((j - 1) as f64 * lq + lp).exp())
            .sum(),
    })
}

/// Which child inherits the parent's remaining lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeirRule {
    First,
    Last,
    Random,
}

/// How generation zero is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialGeneration {
    /// One root with a lifetime drawn from the lifetime law.
    SingleRoot,
    /// A cycle of geometric size `G(p)`, each member with an independent
    /// lifetime, as when exploring the cluster of a point.
    GeometricCycle,
}

/// Ageing branching process: offspring `L ~ G(p)` on `{1, 2, ...}`,
/// lifetimes `L'` on `{0, 1, ...}` with `P(L' = 0) = p'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModifiedBPConfig {
    pub offspring_p: f64,
    pub lifetime_p: f64,
    pub heir: HeirRule,
    pub initial: InitialGeneration,
}

impl ModifiedBPConfig {
    pub fn new(offspring_p: f64, lifetime_p: f64) -> Self {
        ModifiedBPConfig {
            offspring_p,
            lifetime_p,
            heir: HeirRule::First,
            initial: InitialGeneration::SingleRoot,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_p("offspring_p", self.offspring_p)?;
        check_p("lifetime_p", self.lifetime_p)
    }
}

/// Exact simulation of the ageing process. An individual with lifetime
/// `T > 0` has `L` children; one of them (chosen by the heir rule) receives
/// `T - 1` and the others receive fresh lifetimes. Individuals with `T = 0`
/// are terminal.
pub fn modified_bp<R: Rng + ?Sized>(
    cfg: &ModifiedBPConfig,
    rng: &mut R,
    cap: u64,
) -> Result<ProgenySample> {
    cfg.validate()?;
    let offspring = Geometric::new(cfg.offspring_p).expect("validated");
    let lifetime = Geometric::new(cfg.lifetime_p).expect("validated");
    let z0 = match cfg.initial {
        InitialGeneration::SingleRoot => 1,
        InitialGeneration::GeometricCycle => 1 + offspring.sample(rng),
    };
    let mut current: Vec<u64> = (0..z0).map(|_| lifetime.sample(rng)).collect();
    let mut generations = vec![z0];
    let mut total = z0;
    let mut next = Vec::new();
    while !current.is_empty() {
        if total > cap {
            return Ok(ProgenySample {
                total: None,
                generations,
            });
        }
        next.clear();
        for &t in &current {
            if t == 0 {
                continue;
            }
            let kids = 1 + offspring.sample(rng) as usize;
            let heir = match cfg.heir {
                HeirRule::First => 0,
                HeirRule::Last => kids - 1,
                HeirRule::Random => rng.random_range(0..kids),
            };
            for k in 0..kids {
                next.push(if k == heir {
                    t - 1
                } else {
                    lifetime.sample(rng)
                });
            }
            if next.len() as u64 > cap {
                break;
            }
        }
        std::mem::swap(&mut current, &mut next);
        total += current.len() as u64;
        generations.push(current.len() as u64);
    }
    Ok(ProgenySample {
        total: Some(total),
        generations,
    })
}

/// Multigraph whose vertices are the cycles of `σ`, weighted by length, with
/// one edge per transposition in the canonical decomposition of `π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaGraph {
    n: usize,
    vertex_of: Vec<u32>,
    weights: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl GammaGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Edges as vertex pairs; self-loops and repeated edges are kept.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertex (cycle of `σ`) containing element `x`.
    pub fn vertex_of(&self, x: usize) -> usize {
        self.vertex_of[x - 1] as usize
    }

    fn dsu(&self) -> EdgeCountingDsu {
        let mut d = EdgeCountingDsu::new(self.vertex_count());
        for &(u, v) in &self.edges {
            d.add_edge(u, v);
        }
        d
    }

    /// Total weight of every connected component, in decreasing order.
    pub fn component_weights(&self) -> Vec<usize> {
        let mut d = self.dsu();
        let mut acc = vec![0usize; self.vertex_count()];
        for (v, &w) in self.weights.iter().enumerate() {
            let r = d.find(v);
            acc[r] += w;
        }
        let mut out: Vec<usize> = acc.into_iter().filter(|&w| w > 0).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Total weight of the component containing the cycle of element `x`.
    pub fn weighted_component(&self, x: usize) -> usize {
        let mut d = self.dsu();
        let root = d.find(self.vertex_of(x));
        (0..self.vertex_count())
            .filter(|&v| d.find(v) == root)
            .map(|v| self.weights[v])
            .sum()
    }
}

pub fn gamma_graph(sigma: &Permutation, pi: &Permutation) -> Result<GammaGraph> {
    if sigma.n() != pi.n() {
        return Err(Error::SizeMismatch {
            left: sigma.n(),
            right: pi.n(),
        });
    }
    let n = sigma.n();
    let mut vertex_of = vec![0u32; n];
    let mut weights = Vec::new();
    for (v, cycle) in sigma.cycles().into_iter().enumerate() {
        for &x in &cycle {
            vertex_of[x - 1] = v as u32;
        }
        weights.push(cycle.len());
    }
    let edges = pi
        .canonical_decomposition()
        .transpositions()
        .iter()
        .map(|t| (vertex_of[t.i() - 1] as usize, vertex_of[t.j() - 1] as usize))
        .collect();
    Ok(GammaGraph {
        n,
        vertex_of,
        weights,
        edges,
    })
}

/// Free function form of [`GammaGraph::weighted_component`].
pub fn weighted_component(g: &GammaGraph, x: usize) -> usize {
    g.weighted_component(x)
}
