use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::perm::CycleStructure;

/// Sizes up to which sphere volumes are computed with exact integers.
pub const EXACT_STIRLING_MAX_N: usize = 40;

fn factorial(k: usize) -> BigUint {
    (2..=k as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of minimal factorizations of a permutation of cycle type `cs` into
/// transpositions: `t! ∏ m^{m-2}/(m-1)!` with `t = Σ (m - 1)`.
pub fn geodesic_count_formula(cs: &CycleStructure) -> BigUint {
    let mut num = factorial(cs.distance());
    let mut den = BigUint::one();
    for (&m, &mult) in cs.counts() {
        if m < 2 {
            continue;
        }
        let mm = BigUint::from(m).pow((m - 2) as u32);
        let f = factorial(m - 1);
        for _ in 0..mult {
            num *= &mm;
            den *= &f;
        }
    }
    let (q, r) = (&num / &den, &num % &den);
    debug_assert!(r.is_zero(), "geodesic count is always integral");
    q
}

fn log_cycle_weight(cs: &CycleStructure) -> f64 {
    cs.counts()
        .iter()
        .filter(|(&m, _)| m >= 2)
        .map(|(&m, &mult)| {
            let mf = m as f64;
            mult as f64 * ((mf - 2.0) * mf.ln() - ln_factorial((m - 1) as u64))
        })
        .sum()
}

/// Natural log of [`geodesic_count_formula`].
pub fn log_geodesic_count(cs: &CycleStructure) -> f64 {
    ln_factorial(cs.distance() as u64) + log_cycle_weight(cs)
}

/// Ratio of path-count weights of two cycle types on the same sphere. This is
/// also the ratio of their probabilities under the walk stopped at distance `t`
/// without fragmentation.
pub fn radon_nikodym_ratio(cs1: &CycleStructure, cs2: &CycleStructure) -> Result<f64> {
    if cs1.n() != cs2.n() {
        return Err(Error::IncompatibleCycleTypes {
            what: "n",
            left: cs1.n(),
            right: cs2.n(),
        });
    }
    if cs1.distance() != cs2.distance() {
        return Err(Error::IncompatibleCycleTypes {
            what: "distance",
            left: cs1.distance(),
            right: cs2.distance(),
        });
    }
    Ok((log_cycle_weight(cs1) - log_cycle_weight(cs2)).exp())
}

/// Unsigned Stirling numbers of the first kind `c(n, m)` for `m = 0..=n`.
pub fn stirling_row_exact(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for m in 0..=i {
            let mut v = BigUint::zero();
            if m >= 1 {
                v += &row[m - 1];
            }
            if m < i {
                v += &row[m] * (i - 1);
            }
            next[m] = v;
        }
        row = next;
    }
    row
}

/// Number of permutations of `{1, ..., n}` at distance exactly `k` from the
/// identity, i.e. with `n - k` cycles.
pub fn sphere_size_exact(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if k >= n {
        return Err(Error::RadiusTooLarge { k, n });
    }
    Ok(stirling_row_exact(n).swap_remove(n - k))
}

pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn log_add_exp(x: f64, y: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return y;
    }
    if y == f64::NEG_INFINITY {
        return x;
    }
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

/// Rows of `ln c(n, m)` for selected `n`, produced by a single sweep of the
/// two-term recurrence in log space.
#[derive(Debug, Clone)]
pub struct LogStirlingRows {
    rows: BTreeMap<usize, Vec<f64>>,
}

impl LogStirlingRows {
    pub fn compute(ns: &[usize]) -> Self {
        let max_n = ns.iter().copied().max().unwrap_or(0);
        let mut rows = BTreeMap::new();
        let mut row = vec![0.0f64];
        if ns.contains(&0) {
            rows.insert(0, row.clone());
        }
        for i in 1..=max_n {
            let w = ((i - 1) as f64).ln();
            let mut next = vec![f64::NEG_INFINITY; i + 1];
            for (m, slot) in next.iter_mut().enumerate() {
                let a = if m >= 1 {
                    row[m - 1]
                } else {
                    f64::NEG_INFINITY
                };
                let b = if m < i { row[m] + w } else { f64::NEG_INFINITY };
                *slot = log_add_exp(a, b);
            }
            row = next;
            if ns.contains(&i) {
                rows.insert(i, row.clone());
            }
        }
        LogStirlingRows { rows }
    }

    /// `ln c(n, m)`, if row `n` was requested.
    pub fn ln_cycles(&self, n: usize, m: usize) -> Option<f64> {
        self.rows.get(&n).and_then(|r| r.get(m).copied())
    }

    /// `ln |∂B(I, k)|` in `S_n`, if row `n` was requested and `k < n`.
    pub fn ln_sphere(&self, n: usize, k: usize) -> Option<f64> {
        if k >= n {
            return None;
        }
        self.ln_cycles(n, n - k)
    }

    pub fn row(&self, n: usize) -> Option<&[f64]> {
        self.rows.get(&n).map(Vec::as_slice)
    }
}

/// `ln |∂B(I, k)|`, exact for `n <= 40` and via the log-space recurrence above.
pub fn log_sphere_size(n: usize, k: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if k >= n {
        return Err(Error::RadiusTooLarge { k, n });
    }
    if n <= EXACT_STIRLING_MAX_N {
        return Ok(ln_biguint(&sphere_size_exact(n, k)?));
    }
    Ok(LogStirlingRows::compute(&[n])
        .ln_sphere(n, k)
        .expect("row computed"))
}

/// `ln |B(I, ⌊an⌋)|` in `S_n`.
pub fn ball_log_volume(n: usize, a: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyGroundSet);
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::domain("a", a, "(0, 1)"));
    }
    let r = crate::analytic::support::radius(n, a).min(n - 1);
    if n <= EXACT_STIRLING_MAX_N {
        let row = stirling_row_exact(n);
        let total: BigUint = (0..=r).map(|k| &row[n - k]).sum();
        return Ok(ln_biguint(&total));
    }
    let rows = LogStirlingRows::compute(&[n]);
    let row = rows.row(n).expect("row computed");
    Ok((0..=r).fold(f64::NEG_INFINITY, |acc, k| log_add_exp(acc, row[n - k])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_perm_distances(n: usize) -> Vec<usize> {
        // Heap's algorithm over image vectors.
        let mut a: Vec<usize> = (1..=n).collect();
        let mut c = vec![0usize; n];
        let dist = |a: &[usize]| {
            crate::Permutation::from_images(a)
                .unwrap()
                .distance_from_identity()
        };
        let mut out = vec![dist(&a)];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(dist(&a));
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }

    #[test]
    fn sphere_sizes_small() {
        assert_eq!(sphere_size_exact(4, 1).unwrap(), BigUint::from(6u32));
        assert_eq!(sphere_size_exact(4, 2).unwrap(), BigUint::from(11u32));
        assert!(sphere_size_exact(4, 4).is_err());
        let total: BigUint = (0..8).map(|k| sphere_size_exact(8, k).unwrap()).sum();
        assert_eq!(total, factorial(8));
        for n in 2..20usize {
            assert_eq!(
                sphere_size_exact(n, 1).unwrap(),
                BigUint::from(n * (n - 1) / 2)
            );
        }
    }

    #[test]
    fn sphere_sizes_match_enumeration() {
        for n in 1..=6 {
            let ds = all_perm_distances(n);
            for k in 0..n {
                let count = ds.iter().filter(|&&d| d == k).count();
                assert_eq!(
                    sphere_size_exact(n, k).unwrap(),
                    BigUint::from(count),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn log_rows_track_exact_values() {
        let rows = LogStirlingRows::compute(&[41, 120, 200]);
        for n in [41usize, 120, 200] {
            let exact = stirling_row_exact(n);
            for m in 1..=n {
                let want = ln_biguint(&exact[m]);
                let got = rows.ln_cycles(n, m).unwrap();
                assert!(
                    (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                    "n={n} m={m}"
                );
            }
        }
        assert!(rows.ln_cycles(50, 3).is_none());
    }

    #[test]
    fn ball_volume_grows_like_power_of_factorial() {
        let v = ball_log_volume(2000, 0.5).unwrap();
        let ratio = v / (2000.0 * 2000f64.ln());
        assert!((ratio - 0.5).abs() < 0.05, "{ratio}");
        let small = ball_log_volume(4, 0.5).unwrap();
        assert!((small - 18f64.ln()).abs() < 1e-12);
        let n = 60;
        let full = ball_log_volume(n, 0.999).unwrap();
        assert!((full - ln_factorial(n as u64)).abs() < 1e-9 * full);
    }

    #[test]
    fn geodesic_counts_small_types() {
        let count = |sizes: &[usize]| {
            geodesic_count_formula(&CycleStructure::from_sizes(sizes.iter().copied()))
        };
        assert_eq!(count(&[2]), BigUint::from(1u32));
        assert_eq!(count(&[3]), BigUint::from(3u32));
        assert_eq!(count(&[4]), BigUint::from(16u32));
        assert_eq!(count(&[2, 2]), BigUint::from(2u32));
        assert_eq!(count(&[1, 1]), BigUint::from(1u32));
        assert_eq!(count(&[3, 2, 1]), BigUint::from(9u32));
        let cs = CycleStructure::from_sizes([5, 3, 3, 2]);
        let exact = ln_biguint(&geodesic_count_formula(&cs));
        assert!((log_geodesic_count(&cs) - exact).abs() < 1e-10);
    }

    #[test]
    fn ratio_properties() {
        let a = CycleStructure::from_sizes([3, 1, 1, 1]);
        let b = CycleStructure::from_sizes([2, 2, 1, 1]);
        assert_eq!(radon_nikodym_ratio(&a, &a).unwrap(), 1.0);
        let want = 3.0 / 2.0;
        assert!((radon_nikodym_ratio(&a, &b).unwrap() - want).abs() < 1e-12);
        let c = CycleStructure::from_sizes([3, 3, 2, 1, 1, 1, 1]);
        let d = CycleStructure::from_sizes([2, 2, 3, 2, 1, 1, 1]);
        let ab = radon_nikodym_ratio(&a, &b).unwrap();
        let cd = radon_nikodym_ratio(&c, &d).unwrap();
        let prod_l = CycleStructure::from_sizes([3, 3, 3, 2, 1, 1, 1, 1, 1, 1, 1]);
        let prod_r = CycleStructure::from_sizes([2, 2, 2, 2, 3, 2, 1, 1, 1, 1, 1]);
        assert!((radon_nikodym_ratio(&prod_l, &prod_r).unwrap() - ab * cd).abs() < 1e-12);
        assert!(radon_nikodym_ratio(&a, &CycleStructure::from_sizes([3, 1, 1])).is_err());
        assert!(radon_nikodym_ratio(&a, &CycleStructure::from_sizes([4])).is_err());
    }
}
