use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Permutation, Transposition};
use crate::error::{Error, Result};

/// Cycle type of a permutation: `counts[k]` is the number `a_k` of cycles of
/// length `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleStructure {
    counts: BTreeMap<usize, usize>,
}

impl CycleStructure {
    pub fn from_sizes<I: IntoIterator<Item = usize>>(sizes: I) -> Self {
        let mut counts = BTreeMap::new();
        for k in sizes {
            assert!(k > 0, "cycle sizes are positive");
            *counts.entry(k).or_insert(0) += 1;
        }
        CycleStructure { counts }
    }

    /// From `(k, a_k)` pairs. Zero multiplicities are dropped.
    pub fn from_counts<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (k, a) in pairs {
            if k == 0 {
                return Err(Error::Parse("cycle size 0".into()));
            }
            if a > 0 {
                *counts.entry(k).or_insert(0) += a;
            }
        }
        Ok(CycleStructure { counts })
    }

    /// Cycle type of a single `k`-cycle padded with fixed points up to `n`.
    pub fn single_cycle(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::domain("cycle length", k as f64, "1..=n"));
        }
        Self::from_counts([(k, 1), (1, n - k)])
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn multiplicity(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.counts.iter().map(|(k, a)| k * a).sum()
    }

    pub fn cycle_count(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn distance(&self) -> usize {
        self.n() - self.cycle_count()
    }

    /// Cycle sizes in nondecreasing order, repeated by multiplicity.
    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .flat_map(|(&k, &a)| std::iter::repeat_n(k, a))
    }

    /// A representative permutation: cycles of consecutive labels, largest first.
    pub fn representative(&self) -> Result<Permutation> {
        let n = self.n();
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let mut image: Vec<u32> = (0..n as u32).collect();
        let mut start = 0usize;
        let mut sizes: Vec<usize> = self.sizes().collect();
        sizes.reverse();
        for k in sizes {
            for x in start..start + k {
                image[x] = if x + 1 == start + k { start } else { x + 1 } as u32;
            }
            start += k;
        }
        Ok(Permutation::from_zero_based(image))
    }
}

impl fmt::Display for CycleStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .rev()
            .map(|(k, a)| format!("{k}^{a}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// The canonical minimal factorization of a permutation into `d(π)`
/// transpositions.
///
/// Cycles are listed in order of their least element, each written starting
/// from that element, and every consecutive pair `(x, π(x))` inside a cycle
/// becomes one transposition. Multiplying the sequence left to right
/// reproduces the permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalDecomposition {
    n: usize,
    transpositions: Vec<Transposition>,
    terminal: Vec<bool>,
}

impl MinimalDecomposition {
    pub(crate) fn of(p: &Permutation) -> Self {
        let n = p.n();
        let mut transpositions = Vec::with_capacity(n);
        let mut uses = vec![0u8; n];
        for cycle in p.cycles() {
            for w in cycle.windows(2) {
                transpositions.push(Transposition::new_unchecked(w[0], w[1]));
                uses[w[0] - 1] = uses[w[0] - 1].saturating_add(1);
                uses[w[1] - 1] = uses[w[1] - 1].saturating_add(1);
            }
        }
        let terminal = uses.iter().map(|&u| u <= 1).collect();
        MinimalDecomposition {
            n,
            transpositions,
            terminal,
        }
    }

    pub fn n(&self) -> usize {
        self.n
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

    /// An element is terminal when it occurs in at most one transposition.
    pub fn is_terminal(&self, x: usize) -> bool {
        self.terminal[x - 1]
    }

    pub fn terminal_elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.terminal
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(x, _)| x + 1)
    }

    /// Left-to-right product of the transpositions.
    pub fn compose(&self) -> Permutation {
        Permutation::from_transpositions(self.n, &self.transpositions)
            .expect("decomposition elements lie in 1..=n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{cayley_distance, StepKind};
    use proptest::prelude::*;
    use std::collections::{HashMap, VecDeque};

    fn all_perms(n: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            let n = used.len();
            if prefix.len() == n {
                out.push(Permutation::from_images(prefix).unwrap());
                return;
            }
            for x in 1..=n {
                if !used[x - 1] {
                    used[x - 1] = true;
                    prefix.push(x);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[x - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    fn all_transpositions(n: usize) -> Vec<Transposition> {
        let mut v = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                v.push(Transposition::new(i, j).unwrap());
            }
        }
        v
    }

    /// BFS distances from the identity in the Cayley graph generated by all
    /// transpositions, multiplying on the right.
    fn bfs_from_identity(n: usize) -> HashMap<Permutation, usize> {
        let gens = all_transpositions(n);
        let id = Permutation::identity(n).unwrap();
        let mut dist = HashMap::new();
        dist.insert(id.clone(), 0);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            let d = dist[&p];
            for t in &gens {
                let (q, _) = p.apply_transposition(t).unwrap();
                if !dist.contains_key(&q) {
                    dist.insert(q.clone(), d + 1);
                    queue.push_back(q);
                }
            }
        }
        dist
    }

    #[test]
    fn worked_cycle_types() {
        let s = Permutation::parse_cycles("(1 14 5 11)(2)(3 9)(4 13 6)(7 12 8)(10)", 14).unwrap();
        let cs = s.cycle_structure();
        assert_eq!(cs, CycleStructure::from_sizes([4, 1, 2, 3, 3, 1]));
        assert_eq!(cs.distance(), 8);
        let id = Permutation::identity(7).unwrap().cycle_structure();
        assert_eq!(id.multiplicity(1), 7);
        assert_eq!(id.distance(), 0);
        let pi = Permutation::parse_cycles("(1 4 3 7)(2)(5 8)(6 10 9)", 10).unwrap();
        assert_eq!(pi.cycle_structure().cycle_count(), 4);
        assert_eq!(pi.distance_from_identity(), 6);
    }

    #[test]
    fn canonical_decomposition_matches_worked_example() {
        let pi = Permutation::parse_cycles("(1 4 3 7)(2)(5 8)(6 10 9)", 10).unwrap();
        let dec = pi.canonical_decomposition();
        let expected: Vec<Transposition> = [(1, 4), (4, 3), (3, 7), (5, 8), (6, 10), (10, 9)]
            .iter()
            .map(|&(a, b)| Transposition::new(a, b).unwrap())
            .collect();
        assert_eq!(dec.transpositions(), expected.as_slice());
        assert_eq!(dec.compose(), pi);
        let terminal: Vec<usize> = dec.terminal_elements().collect();
        assert_eq!(terminal, vec![1, 2, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn canonical_decomposition_of_identity_is_empty() {
        let id = Permutation::identity(5).unwrap();
        let dec = id.canonical_decomposition();
        assert!(dec.is_empty());
        assert!((1..=5).all(|x| dec.is_terminal(x)));
    }

    #[test]
    fn transposition_changes_distance_by_one_on_s5() {
        let gens = all_transpositions(5);
        for s in all_perms(5) {
            let before = s.cycle_count();
            for t in &gens {
                let (q, kind) = s.apply_transposition(t).unwrap();
                let after = q.cycle_count();
                match kind {
                    StepKind::Coagulation => assert_eq!(after + 1, before),
                    StepKind::Fragmentation => assert_eq!(after, before + 1),
                }
            }
        }
    }

    #[test]
    fn distance_formula_matches_bfs_up_to_s6() {
        for n in 1..=6 {
            let dist = bfs_from_identity(n);
            assert_eq!(dist.len(), (1..=n).product::<usize>());
            for (p, d) in &dist {
                assert_eq!(p.distance_from_identity(), *d, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn pairwise_distance_matches_bfs_on_s4() {
        let dist = bfs_from_identity(4);
        let perms = all_perms(4);
        for x in &perms {
            for y in &perms {
                // left-translation invariance: d(x, y) = d(I, x^{-1} y)
                let q = x.inverse().compose(y).unwrap();
                assert_eq!(cayley_distance(x, y).unwrap(), dist[&q]);
                assert_eq!(
                    cayley_distance(x, y).unwrap(),
                    cayley_distance(y, x).unwrap()
                );
            }
        }
    }

    #[test]
    fn triangle_inequality_on_s4() {
        let perms = all_perms(4);
        for x in &perms {
            for y in &perms {
                for z in perms.iter().step_by(5) {
                    let xy = cayley_distance(x, y).unwrap();
                    let yz = cayley_distance(y, z).unwrap();
                    let xz = cayley_distance(x, z).unwrap();
                    assert!(xz <= xy + yz);
                }
            }
        }
    }

    #[test]
    fn representative_has_requested_type() {
        let cs = CycleStructure::from_sizes([3, 3, 2, 1]);
        let r = cs.representative().unwrap();
        assert_eq!(r.cycle_structure(), cs);
        assert_eq!(cs.to_string(), "3^2 2^1 1^1");
    }

    fn perm_strategy(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1usize..=max_n)
            .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(&v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn inverse_preserves_cycle_type(p in perm_strategy(30)) {
            prop_assert_eq!(p.inverse().cycle_structure(), p.cycle_structure());
            prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        }

        #[test]
        fn decomposition_round_trips(p in perm_strategy(30)) {
            let dec = p.canonical_decomposition();
            prop_assert_eq!(dec.len(), p.distance_from_identity());
            prop_assert_eq!(dec.compose(), p.clone());
            // non-terminal elements occur in exactly two consecutive transpositions
            let ts = dec.transpositions();
            for x in 1..=p.n() {
                let hits: Vec<usize> = ts.iter().enumerate()
                    .filter(|(_, t)| t.touches(x)).map(|(k, _)| k).collect();
                if dec.is_terminal(x) {
                    prop_assert!(hits.len() <= 1);
                } else {
                    prop_assert_eq!(hits.len(), 2);
                    prop_assert_eq!(hits[1], hits[0] + 1);
                }
            }
        }
    }
}
