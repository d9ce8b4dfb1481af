//! Geodesics in the transposition Cayley graph.
//!
//! A path is stored as a start vertex, a target vertex and the transpositions
//! applied on the right, one per edge. It is a geodesic exactly when every
//! step lowers the distance to the target by one.

use std::collections::{HashMap, VecDeque};
use std::io::Write;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{
    cayley_distance, CycleStructure, CycleTracker, Permutation, StepKind, Transposition,
};
use crate::walk::WalkTrace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    start: Permutation,
    target: Permutation,
    transpositions: Vec<Transposition>,
}

impl GeodesicPath {
    /// Validates that `start · τ_1 · ... · τ_L` is a geodesic ending at `target`.
    pub fn new(
        start: Permutation,
        target: Permutation,
        transpositions: Vec<Transposition>,
    ) -> Result<Self> {
        let path = GeodesicPath {
            start,
            target,
            transpositions,
        };
        path.validate()?;
        Ok(path)
    }

    pub fn start(&self) -> &Permutation {
        &self.start
    }

    pub fn target(&self) -> &Permutation {
        &self.target
    }

    pub fn transpositions(&self) -> &[Transposition] {
        &self.transpositions
    }

    pub fn len(&self) -> usize {
        self.transpositions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transpositions.is_empty()
    }

    /// Re-checks the geodesic property.
    pub fn validate(&self) -> Result<()> {
        if self.start.n() != self.target.n() {
            return Err(Error::SizeMismatch {
                left: self.start.n(),
                right: self.target.n(),
            });
        }
        // d(x_k, target) = d(target^{-1} x_k), and target^{-1} x_k evolves by
        // right multiplication, so every step must be a fragmentation.
        let mut rel = CycleTracker::new(self.target.inverse().compose(&self.start)?);
        for (k, t) in self.transpositions.iter().enumerate() {
            t.check_within(self.start.n())?;
            if rel.apply(t) != StepKind::Fragmentation {
                return Err(Error::NotGeodesic {
                    step: k + 1,
                    detail: format!("{t} does not reduce the distance to the target"),
                });
            }
        }
        if rel.distance_from_identity() != 0 {
            return Err(Error::NotGeodesic {
                step: self.len(),
                detail: format!(
                    "path stops {} short of its target",
                    rel.distance_from_identity()
                ),
            });
        }
        Ok(())
    }

    /// All vertices `x_0 = start, ..., x_L = target`.
    pub fn vertices(&self) -> impl Iterator<Item = Permutation> + '_ {
        let mut cur = self.start.clone();
        std::iter::once(self.start.clone()).chain(self.transpositions.iter().map(move |t| {
            cur.right_multiply(t);
            cur.clone()
        }))
    }

    /// The path `g·x_0, ..., g·x_L`, again a geodesic since left translation
    /// is an isometry.
    pub fn left_translate(&self, g: &Permutation) -> Result<GeodesicPath> {
        Ok(GeodesicPath {
            start: g.compose(&self.start)?,
            target: g.compose(&self.target)?,
            transpositions: self.transpositions.clone(),
        })
    }

    /// CSV with columns `step, i, j, distance_to_target`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "i", "j", "distance_to_target"])?;
        let len = self.len();
        for (s, t) in self.transpositions.iter().enumerate() {
            w.write_record([
                (s + 1).to_string(),
                t.i().to_string(),
                t.j().to_string(),
                (len - s - 1).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Splits cycle `c` at positions `p < q` the way right multiplication by
/// `(c[p] c[q])` does.
fn split_cycle(c: &[usize], p: usize, q: usize) -> (Vec<usize>, Vec<usize>) {
    let mut a = Vec::with_capacity(c.len() - (q - p));
    a.push(c[p]);
    a.extend_from_slice(&c[q + 1..]);
    a.extend_from_slice(&c[..p]);
    let mut b = Vec::with_capacity(q - p);
    b.push(c[q]);
    b.extend_from_slice(&c[p + 1..q]);
    (a, b)
}

/// A geodesic from `sigma` to the identity. Each step applies a transposition
/// chosen uniformly among all transpositions that split a cycle.
pub fn greedy_geodesic<R: Rng + ?Sized>(sigma: &Permutation, rng: &mut R) -> GeodesicPath {
    let mut cycles: Vec<Vec<usize>> = sigma.cycles().into_iter().filter(|c| c.len() > 1).collect();
    let mut ts = Vec::with_capacity(sigma.distance_from_identity());
    let pairs = |m: usize| (m * (m - 1) / 2) as u64;
    let mut total: u64 = cycles.iter().map(|c| pairs(c.len())).sum();
    while total > 0 {
        let mut r = rng.random_range(0..total);
        let idx = cycles
            .iter()
            .position(|c| {
                let w = pairs(c.len());
                if r < w {
                    true
                } else {
                    r -= w;
                    false
                }
            })
            .expect("weights sum to total");
        let c = cycles.swap_remove(idx);
        let m = c.len();
        let x = rng.random_range(0..m);
        let mut y = rng.random_range(0..m - 1);
        if y >= x {
            y += 1;
        }
        let (p, q) = (x.min(y), x.max(y));
        ts.push(Transposition::new_unchecked(c[p], c[q]));
        total -= pairs(m);
        let (a, b) = split_cycle(&c, p, q);
        for part in [a, b] {
            if part.len() > 1 {
                total += pairs(part.len());
                cycles.push(part);
            }
        }
    }
    let path = GeodesicPath {
        start: sigma.clone(),
        target: Permutation::identity(sigma.n()).expect("n >= 1"),
        transpositions: ts,
    };
    debug_assert!(path.validate().is_ok());
    path
}

/// Options for [`shadow_geodesic_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowOptions {
    /// Verify `γ = X_t · W` and `d(X_t, γ) <= |W|` every this many walk
    /// steps; 0 disables the check.
    pub check_stride: usize,
}

impl Default for ShadowOptions {
    fn default() -> Self {
        ShadowOptions { check_stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowResult {
    /// Geodesic from the walk's endpoint to the identity.
    pub path: GeodesicPath,
    /// `|K|` after processing each walk step, starting from the last one.
    pub k_history: Vec<usize>,
    /// Largest `|K|`; bounds `d(X_t, γ)` at every walk time.
    pub max_walk_gap: usize,
    /// Largest length of the deferred word `W` with `γ = X_t · W`.
    pub max_word_len: usize,
    /// Largest directly measured `d(X_t, γ)` over the checked times.
    pub max_measured_gap: usize,
    /// Walk increments skipped because they would have merged two cycles.
    pub skipped: usize,
    /// Steps appended at the end to reach the identity.
    pub residual_steps: usize,
}

/// [`shadow_geodesic_with`] using default options.
pub fn shadow_geodesic<R: Rng + ?Sized>(walk: &WalkTrace, rng: &mut R) -> Result<ShadowResult> {
    shadow_geodesic_with(walk, ShadowOptions::default(), rng)
}

/// Builds a geodesic `γ` from the walk's endpoint `σ = τ_1 ⋯ τ_N` back to
/// the identity that shadows the walk.
///
/// Increments are undone in reverse order. An increment that splits a cycle
/// of the current `γ` is applied; one that would merge two cycles is skipped
/// and deferred. The deferred word `W` is kept exactly so that `γ = X_t · W`
/// holds at every walk time `t`, and `K` collects the skipped increments
/// together with every applied increment sharing an element with a member
/// of `K`. The remaining permutation `W` is finished with
/// [`greedy_geodesic`], and the whole path is validated.
pub fn shadow_geodesic_with<R: Rng + ?Sized>(
    walk: &WalkTrace,
    opts: ShadowOptions,
    rng: &mut R,
) -> Result<ShadowResult> {
    let n = walk.n;
    let sigma = walk.endpoint();
    let mut gamma = CycleTracker::new(sigma.clone());
    let mut x = sigma.clone();
    let mut word: VecDeque<Transposition> = VecDeque::new();
    let mut in_k = vec![false; n + 1];
    let mut k_size = 0usize;
    let mut k_history = Vec::with_capacity(walk.len() + 1);
    k_history.push(0);
    let mut applied = Vec::with_capacity(sigma.distance_from_identity());
    let (mut skipped, mut max_word_len, mut max_measured_gap) = (0usize, 0usize, 0usize);

    for (done, t) in walk.transpositions().rev().enumerate() {
        let touches_k = in_k[t.i()] || in_k[t.j()];
        if gamma.kind_of(&t) == StepKind::Fragmentation {
            gamma.apply(&t);
            applied.push(t);
            for w in word.iter_mut() {
                *w = w.conjugate_by(&t);
            }
            if touches_k {
                k_size += 1;
            }
        } else {
            word.push_front(t);
            skipped += 1;
            k_size += 1;
            in_k[t.i()] = true;
            in_k[t.j()] = true;
        }
        if touches_k {
            in_k[t.i()] = true;
            in_k[t.j()] = true;
        }
        x.right_multiply(&t);
        k_history.push(k_size);
        max_word_len = max_word_len.max(word.len());

        let step = done + 1;
        if opts.check_stride > 0 && (step % opts.check_stride == 0 || step == walk.len()) {
            let mut xw = x.clone();
            for w in &word {
                xw.right_multiply(w);
            }
            if &xw != gamma.perm() {
                return Err(Error::NotGeodesic {
                    step,
                    detail: "shadow path lost track of the walk".into(),
                });
            }
            let gap = cayley_distance(&x, gamma.perm())?;
            if gap > word.len() || word.len() > k_size {
                return Err(Error::NotGeodesic {
                    step,
                    detail: format!("gap {gap} exceeds certified bound {}", word.len()),
                });
            }
            max_measured_gap = max_measured_gap.max(gap);
        }
    }

    let residual = greedy_geodesic(gamma.perm(), rng);
    let residual_steps = residual.len();
    applied.extend_from_slice(residual.transpositions());
    let path = GeodesicPath::new(sigma, Permutation::identity(n)?, applied)?;
    let max_walk_gap = k_history.iter().copied().max().unwrap_or(0);
    Ok(ShadowResult {
        path,
        k_history,
        max_walk_gap,
        max_word_len,
        max_measured_gap,
        skipped,
        residual_steps,
    })
}

/// Largest `n` accepted by [`count_geodesics_oracle`].
pub const ORACLE_MAX_N: usize = 7;

/// Number of geodesics from `sigma` to the identity, by the recursion
/// `N(σ) = Σ_{τ: d(στ) = d(σ) - 1} N(στ)` memoized on cycle type.
pub fn count_geodesics_oracle(sigma: &Permutation) -> Result<BigUint> {
    if sigma.n() > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            what: "count_geodesics_oracle",
            n: sigma.n(),
            max: ORACLE_MAX_N,
        });
    }
    fn rec(p: &Permutation, memo: &mut HashMap<CycleStructure, BigUint>) -> BigUint {
        if p.is_identity() {
            return BigUint::one();
        }
        let key = p.cycle_structure();
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let n = p.n();
        let mut total = BigUint::default();
        for i in 1..n {
            for j in i + 1..=n {
                if p.same_cycle(i, j) {
                    let mut q = p.clone();
                    q.right_multiply(&Transposition::new_unchecked(i, j));
                    total += rec(&q, memo);
                }
            }
        }
        memo.insert(key, total.clone());
        total
    }
    Ok(rec(sigma, &mut HashMap::new()))
}

/// `min_k d(p, x_k)` over the vertices of `path`.
pub fn point_to_path_distance(p: &Permutation, path: &GeodesicPath) -> Result<usize> {
    let mut rel = CycleTracker::new(p.inverse().compose(path.start())?);
    let mut best = rel.distance_from_identity();
    for t in path.transpositions() {
        rel.apply(t);
        best = best.min(rel.distance_from_identity());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::geodesic_count_formula;
    use crate::rng::SeededRng;
    use crate::samplers::uniform_permutation;
    use crate::walk::run;
    use std::collections::HashSet;

    #[test]
    fn greedy_paths() {
        let mut rng = SeededRng::new(1, 0);
        let id = Permutation::identity(5).unwrap();
        assert!(greedy_geodesic(&id, &mut rng).is_empty());
        let c3 = Permutation::parse_cycles("(1 2 3)", 3).unwrap();
        let mut seen = HashSet::new();
        for _ in 0..200 {
            let path = greedy_geodesic(&c3, &mut rng);
            assert_eq!(path.len(), 2);
            seen.insert(path.transpositions().to_vec());
        }
        assert_eq!(seen.len(), 3);
        for _ in 0..1000 {
            let s = uniform_permutation(8, &mut rng).unwrap();
            let path = greedy_geodesic(&s, &mut rng);
            path.validate().unwrap();
            assert_eq!(path.len(), 8 - s.cycle_count());
        }
    }

    #[test]
    fn validation_rejects_detours() {
        let t = |a, b| Transposition::new(a, b).unwrap();
        let s = Permutation::parse_cycles("(1 2 3)", 4).unwrap();
        let id = Permutation::identity(4).unwrap();
        assert!(GeodesicPath::new(s.clone(), id.clone(), vec![t(1, 2), t(1, 3)]).is_ok());
        assert!(GeodesicPath::new(
            s.clone(),
            id.clone(),
            vec![t(1, 4), t(1, 4), t(1, 2), t(1, 3)]
        )
        .is_err());
        assert!(GeodesicPath::new(s.clone(), id, vec![t(1, 2)]).is_err());
    }

    #[test]
    fn oracle_agrees_with_formula() {
        let t = |a, b| Transposition::new(a, b).unwrap();
        let single = Permutation::from_transpositions(4, &[t(1, 2)]).unwrap();
        assert_eq!(
            count_geodesics_oracle(&single).unwrap(),
            BigUint::from(1u32)
        );
        let c3 = Permutation::parse_cycles("(1 2 3)", 3).unwrap();
        assert_eq!(count_geodesics_oracle(&c3).unwrap(), BigUint::from(3u32));
        for sizes in [
            vec![7],
            vec![4, 3],
            vec![3, 2, 2],
            vec![5, 2],
            vec![2, 2, 2, 1],
        ] {
            let cs = CycleStructure::from_sizes(sizes);
            let rep = cs.representative().unwrap();
            assert_eq!(
                count_geodesics_oracle(&rep).unwrap(),
                geodesic_count_formula(&cs)
            );
        }
        assert!(count_geodesics_oracle(&Permutation::identity(8).unwrap()).is_err());
    }

    #[test]
    fn shadow_of_tree_walk_is_reversal() {
        let t = |a, b| Transposition::new(a, b).unwrap();
        let ts = vec![t(1, 2), t(3, 4), t(2, 3), t(5, 6), t(1, 6)];
        let trace = WalkTrace::from_transpositions(6, &ts).unwrap();
        assert_eq!(trace.fragmentations(), 0);
        let mut rng = SeededRng::new(2, 0);
        let res = shadow_geodesic(&trace, &mut rng).unwrap();
        assert_eq!(res.max_walk_gap, 0);
        assert!(res.k_history.iter().all(|&k| k == 0));
        let mut rev = ts.clone();
        rev.reverse();
        assert_eq!(res.path.transpositions(), &rev[..]);
        assert_eq!(res.residual_steps, 0);
    }

    #[test]
    fn shadow_handles_fragmenting_walks() {
        let mut rng = SeededRng::new(3, 0);
        for n in [4usize, 10, 50, 300] {
            for steps in [n / 2, n, 2 * n] {
                let trace = run(n, steps, &mut rng).unwrap();
                let res = shadow_geodesic(&trace, &mut rng).unwrap();
                assert_eq!(res.path.len(), trace.endpoint().distance_from_identity());
                assert!(res.max_measured_gap <= res.max_word_len);
                assert!(res.max_word_len <= res.max_walk_gap);
                assert_eq!(res.k_history.len(), steps + 1);
            }
        }
    }

    #[test]
    fn distances_to_paths() {
        let mut rng = SeededRng::new(4, 0);
        let s = uniform_permutation(20, &mut rng).unwrap();
        let path = greedy_geodesic(&s, &mut rng);
        let id = Permutation::identity(20).unwrap();
        assert_eq!(point_to_path_distance(&id, &path).unwrap(), 0);
        for v in path.vertices() {
            assert_eq!(point_to_path_distance(&v, &path).unwrap(), 0);
        }
        let q = uniform_permutation(20, &mut rng).unwrap();
        let brute = path
            .vertices()
            .map(|v| cayley_distance(&q, &v).unwrap())
            .min()
            .unwrap();
        assert_eq!(point_to_path_distance(&q, &path).unwrap(), brute);
        let g = uniform_permutation(20, &mut rng).unwrap();
        let moved = path.left_translate(&g).unwrap();
        moved.validate().unwrap();
        assert_eq!(point_to_path_distance(&g, &moved).unwrap(), 0);
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("step,i,j,distance_to_target\n"));
        assert!(text.trim_end().ends_with(",0") || path.is_empty());
    }
}
