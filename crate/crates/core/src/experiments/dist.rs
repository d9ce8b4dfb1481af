use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts of nonnegative integer outcomes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalDist {
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

/// Total variation distance on `{..., cap}` plus one bucket for everything
/// above `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TvReport {
    pub tv: f64,
    pub cap: u64,
    /// Mass above `cap` in the first distribution.
    pub truncated_mass_left: f64,
    /// Mass above `cap` in the second distribution (or law).
    pub truncated_mass_right: f64,
}

impl EmpiricalDist {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: u64) {
        *self.counts.entry(value).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, k: u64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn pmf(&self, k: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(k) as f64 / self.total as f64
    }

    /// Empirical `P(X > u)`.
    pub fn tail(&self, u: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let above: u64 = self.counts.range(u + 1..).map(|(_, c)| c).sum();
        above as f64 / self.total as f64
    }

    pub fn mean(&self) -> f64 {
        let s: f64 = self.counts.iter().map(|(&k, &c)| k as f64 * c as f64).sum();
        s / self.total as f64
    }

    fn nonempty(&self) -> Result<()> {
        if self.total == 0 {
            Err(Error::EmptyDistribution)
        } else {
            Ok(())
        }
    }

    /// `½ Σ |p̂ - q̂|` over the union of both supports.
    pub fn tv_distance(&self, other: &EmpiricalDist) -> Result<f64> {
        self.nonempty()?;
        other.nonempty()?;
        let mut keys: Vec<u64> = self
            .counts
            .keys()
            .chain(other.counts.keys())
            .copied()
            .collect();
        keys.sort_unstable();
        keys.dedup();
        Ok(0.5
            * keys
                .iter()
                .map(|&k| (self.pmf(k) - other.pmf(k)).abs())
                .sum::<f64>())
    }

    /// TV between two empirical laws with everything above `cap` merged.
    pub fn tv_truncated(&self, other: &EmpiricalDist, cap: u64) -> Result<TvReport> {
        self.nonempty()?;
        other.nonempty()?;
        let (tl, tr) = (self.tail(cap), other.tail(cap));
        let body: f64 = (0..=cap).map(|k| (self.pmf(k) - other.pmf(k)).abs()).sum();
        Ok(TvReport {
            tv: 0.5 * (body + (tl - tr).abs()),
            cap,
            truncated_mass_left: tl,
            truncated_mass_right: tr,
        })
    }

    /// TV against an exact law on `{0, 1, ...}` given by its mass function.
    /// The law's mass above `cap` is `1 - Σ_{k <= cap} law(k)`.
    pub fn tv_to_law(&self, law: impl Fn(u64) -> f64, cap: u64) -> Result<TvReport> {
        self.nonempty()?;
        let mut body = 0.0;
        let mut law_mass = 0.0;
        for k in 0..=cap {
            let q = law(k);
            law_mass += q;
            body += (self.pmf(k) - q).abs();
        }
        let law_tail = (1.0 - law_mass).max(0.0);
        let tail = self.tail(cap);
        Ok(TvReport {
            tv: 0.5 * (body + (tail - law_tail).abs()),
            cap,
            truncated_mass_left: tail,
            truncated_mass_right: law_tail,
        })
    }

    /// Histogram CSV with columns `k, count`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "count"])?;
        for (k, c) in &self.counts {
            w.write_record([k.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl FromIterator<u64> for EmpiricalDist {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut d = EmpiricalDist::new();
        for v in iter {
            d.add(v);
        }
        d
    }
}

/// Free function form of [`EmpiricalDist::tv_distance`].
pub fn tv_distance(d1: &EmpiricalDist, d2: &EmpiricalDist) -> Result<f64> {
    d1.tv_distance(d2)
}
