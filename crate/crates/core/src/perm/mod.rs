//! Exact permutation arithmetic on `{1, ..., n}`.
//!
//! Products follow the function-composition convention `(f·g)(x) = f(g(x))`,
//! and the random walk multiplies on the right. Under this convention the
//! canonical decomposition `(1 4)(4 3)(3 7)` multiplies back to `(1 4 3 7)`.
//!
//! Labels are 1-based everywhere in the public API; images are stored
//! 0-based internally.

mod cycles;
mod notation;
mod tracker;

pub use cycles::{CycleStructure, MinimalDecomposition};
pub use tracker::CycleTracker;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a transposition merged two cycles or split one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Coagulation,
    Fragmentation,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Coagulation => "coagulation",
            StepKind::Fragmentation => "fragmentation",
        }
    }

    /// Change in the distance from the identity caused by this event.
    pub fn distance_delta(self) -> i64 {
        match self {
            StepKind::Coagulation => 1,
            StepKind::Fragmentation => -1,
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A transposition `(i j)` with `1 <= i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transposition {
    i: usize,
    j: usize,
}

impl Transposition {
    /// Normalizes the pair so that `i < j`.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::DegenerateTransposition(a));
        }
        if a == 0 || b == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                n: a.max(b),
            });
        }
        Ok(Self::new_unchecked(a, b))
    }

    #[inline]
    pub(crate) fn new_unchecked(a: usize, b: usize) -> Self {
        debug_assert!(a != b && a > 0 && b > 0);
        if a < b {
            Transposition { i: a, j: b }
        } else {
            Transposition { i: b, j: a }
        }
    }

    #[inline]
    pub fn i(&self) -> usize {
        self.i
    }

    #[inline]
    pub fn j(&self) -> usize {
        self.j
    }

    pub fn touches(&self, x: usize) -> bool {
        self.i == x || self.j == x
    }

    pub fn shares_element(&self, other: &Transposition) -> bool {
        self.touches(other.i) || self.touches(other.j)
    }

    /// Image of `x` under this transposition.
    pub fn apply(&self, x: usize) -> usize {
        if x == self.i {
            self.j
        } else if x == self.j {
            self.i
        } else {
            x
        }
    }

    /// `t · self · t`, which is again a transposition.
    pub fn conjugate_by(&self, t: &Transposition) -> Transposition {
        Transposition::new_unchecked(t.apply(self.i), t.apply(self.j))
    }

    pub(crate) fn check_within(&self, n: usize) -> Result<()> {
        if self.j > n {
            return Err(Error::IndexOutOfRange { index: self.j, n });
        }
        Ok(())
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.i, self.j)
    }
}

/// A bijection of `{1, ..., n}`.
///
/// Serializes as `{"n": .., "cycles": "(1 3)(2)"}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "PermRepr", try_from = "PermRepr")]
pub struct Permutation {
    image: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    n: usize,
    cycles: String,
}

impl From<Permutation> for PermRepr {
    fn from(p: Permutation) -> Self {
        PermRepr {
            n: p.n(),
            cycles: p.to_string(),
        }
    }
}

impl TryFrom<PermRepr> for Permutation {
    type Error = Error;

    fn try_from(r: PermRepr) -> Result<Self> {
        Permutation::parse_cycles(&r.cycles, r.n)
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(Permutation {
            image: (0..n as u32).collect(),
        })
    }

    /// Builds a permutation from 1-based images: `images[x - 1] = σ(x)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        let mut seen = vec![false; n];
        let mut image = Vec::with_capacity(n);
        for &y in images {
            if y == 0 || y > n || seen[y - 1] {
                return Err(Error::NotABijection { n });
            }
            seen[y - 1] = true;
            image.push((y - 1) as u32);
        }
        Ok(Permutation { image })
    }

    /// Internal constructor from 0-based images already known to be a bijection.
    pub(crate) fn from_zero_based(image: Vec<u32>) -> Self {
        debug_assert!(is_bijection(&image));
        Permutation { image }
    }

    /// Product `τ_1 · τ_2 ⋯ τ_k` composed left to right.
    pub fn from_transpositions(n: usize, ts: &[Transposition]) -> Result<Self> {
        let mut p = Self::identity(n)?;
        for t in ts {
            t.check_within(n)?;
            p.right_multiply(t);
        }
        Ok(p)
    }

    /// The n-cycle `(1 2 ... n)`, handy in tests and examples.
    pub fn long_cycle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGroundSet);
        }
        Ok(Permutation {
            image: (0..n as u32).map(|x| (x + 1) % n as u32).collect(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// `σ(x)` for 1-based `x`. Panics when `x` is out of range.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x - 1] as usize + 1
    }

    /// 1-based images in order `σ(1), σ(2), ...`.
    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.image.iter().map(|&y| y as usize + 1)
    }

    #[inline]
    pub(crate) fn zero_based(&self) -> &[u32] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    fn check_same_n(&self, other: &Permutation) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// `(self · g)(x) = self(g(x))`.
    pub fn compose(&self, g: &Permutation) -> Result<Permutation> {
        self.check_same_n(g)?;
        let image = g.image.iter().map(|&y| self.image[y as usize]).collect();
        Ok(Permutation { image })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0u32; self.n()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y as usize] = x as u32;
        }
        Permutation { image }
    }

    /// In-place right multiplication `σ ← σ · t`.
    #[inline]
    pub(crate) fn right_multiply(&mut self, t: &Transposition) {
        self.image.swap(t.i - 1, t.j - 1);
    }

    pub fn same_cycle(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let start = (a - 1) as u32;
        let target = (b - 1) as u32;
        let mut x = self.image[start as usize];
        while x != start {
            if x == target {
                return true;
            }
            x = self.image[x as usize];
        }
        false
    }

    /// Returns `σ · t` and whether the step merged two cycles or split one.
    pub fn apply_transposition(&self, t: &Transposition) -> Result<(Permutation, StepKind)> {
        t.check_within(self.n())?;
        let kind = if self.same_cycle(t.i, t.j) {
            StepKind::Fragmentation
        } else {
            StepKind::Coagulation
        };
        let mut next = self.clone();
        next.right_multiply(t);
        Ok((next, kind))
    }

    pub fn cycle_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x] as usize;
            }
        }
        count
    }

    /// Cycles as 1-based element lists, each starting at its least element,
    /// ordered by least element. Fixed points are included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.image[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_structure(&self) -> CycleStructure {
        CycleStructure::from_sizes(self.cycles().iter().map(Vec::len))
    }

    /// Distance to the identity in the transposition Cayley graph.
    pub fn distance_from_identity(&self) -> usize {
        self.n() - self.cycle_count()
    }

    pub fn fixed_points(&self) -> usize {
        self.image
            .iter()
            .enumerate()
            .filter(|(x, &y)| *x as u32 == y)
            .count()
    }

    /// Length of the cycle containing `x`.
    pub fn cycle_len_of(&self, x: usize) -> usize {
        let start = (x - 1) as u32;
        let mut len = 1;
        let mut y = self.image[start as usize];
        while y != start {
            len += 1;
            y = self.image[y as usize];
        }
        len
    }

    /// Conjugates by relabeling: returns `ρ σ ρ^{-1}`, the permutation with the
    /// same cycles as `σ` but every element `x` renamed to `ρ(x)`.
    pub fn relabel(&self, rho: &Permutation) -> Result<Permutation> {
        rho.compose(self)?.compose(&rho.inverse())
    }

    pub fn canonical_decomposition(&self) -> MinimalDecomposition {
        MinimalDecomposition::of(self)
    }
}

/// `d(x, y) = d(I, x^{-1} y)`.
pub fn cayley_distance(x: &Permutation, y: &Permutation) -> Result<usize> {
    Ok(x.inverse().compose(y)?.distance_from_identity())
}

fn is_bijection(image: &[u32]) -> bool {
    let mut seen = vec![false; image.len()];
    image.iter().all(|&y| {
        let y = y as usize;
        y < seen.len() && !std::mem::replace(&mut seen[y], true)
    })
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[n={}; {}]", self.n(), self)
    }
}
