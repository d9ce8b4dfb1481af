//! The random transposition walk on `S_n`, coupled to the random graph in
//! which every performed transposition `(i j)` adds the edge `{i, j}`.
//!
//! Time is discrete: one uniformly random transposition per step, so `t`
//! steps correspond to time `t` of the rate-one continuous walk.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dsu::EdgeCountingDsu;
use crate::error::{Error, Result};
use crate::perm::{CycleTracker, Permutation, StepKind, Transposition};

/// A transposition chosen uniformly among the `n(n-1)/2` generators.
pub fn random_transposition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Transposition {
    let a = rng.random_range(1..=n);
    let mut b = rng.random_range(1..n);
    if b >= a {
        b += 1;
    }
    Transposition::new_unchecked(a, b)
}

/// One step of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEvent {
    pub t: Transposition,
    pub kind: StepKind,
    pub distance_after: usize,
}

/// Mutable walk state: the current permutation with its cycle labels and the
/// random graph of all transpositions performed so far.
#[derive(Debug, Clone)]
pub struct WalkState {
    tracker: CycleTracker,
    dsu: EdgeCountingDsu,
    steps: u64,
    frag_total: u64,
}

impl WalkState {
    /// Walk started at the identity of `S_n`.
    pub fn new(n: usize) -> Result<Self> {
        let perm = Permutation::identity(n)?;
        Ok(WalkState {
            tracker: CycleTracker::new(perm),
            dsu: EdgeCountingDsu::new(n),
            steps: 0,
            frag_total: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.tracker.n()
    }

    pub fn perm(&self) -> &Permutation {
        self.tracker.perm()
    }

    pub fn into_perm(self) -> Permutation {
        self.tracker.into_perm()
    }

    pub fn tracker(&self) -> &CycleTracker {
        &self.tracker
    }

    pub fn distance(&self) -> usize {
        self.tracker.distance_from_identity()
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn frag_total(&self) -> u64 {
        self.frag_total
    }

    pub fn component_count(&self) -> usize {
        self.dsu.component_count()
    }

    /// Performs the given transposition.
    pub fn apply(&mut self, t: Transposition) -> Result<StepEvent> {
        t.check_within(self.n())?;
        Ok(self.apply_unchecked(t))
    }

    fn apply_unchecked(&mut self, t: Transposition) -> StepEvent {
        let kind = self.tracker.apply(&t);
        self.dsu.add_edge(t.i() - 1, t.j() - 1);
        self.steps += 1;
        if kind == StepKind::Fragmentation {
            self.frag_total += 1;
        }
        StepEvent {
            t,
            kind,
            distance_after: self.distance(),
        }
    }

    /// Performs one uniformly random transposition. Requires `n >= 2`.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> StepEvent {
        let t = random_transposition(self.n(), rng);
        self.apply_unchecked(t)
    }

    /// Performs `steps` random transpositions without recording them.
    pub fn advance<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) {
        if self.n() < 2 {
            return;
        }
        for _ in 0..steps {
            self.step(rng);
        }
    }

    /// Cycles of the permutation in excess of the graph components. Each
    /// graph component is a union of cycles, and only fragmentations create
    /// the excess.
    pub fn extra_fragment_cycles(&self) -> usize {
        self.tracker.cycle_count() - self.dsu.component_count()
    }

    pub fn component_stats(&self) -> ComponentStats {
        let mut stats = ComponentStats::default();
        for (size, edges) in self.dsu.components() {
            stats.components += 1;
            *stats.size_histogram.entry(size).or_insert(0) += 1;
            let size64 = size as u64;
            if edges + 1 == size64 {
                stats.trees += 1;
            } else if edges == size64 {
                stats.unicyclic += 1;
                stats.unicyclic_weight += size;
            } else {
                stats.complex += 1;
            }
        }
        stats
    }

    /// Graph component `(size, edges)` containing element `x`.
    pub fn component_of(&self, x: usize) -> (usize, u64) {
        self.dsu.component_of(x - 1)
    }
}

/// Free function form of [`WalkState::step`].
pub fn step<R: Rng + ?Sized>(state: &mut WalkState, rng: &mut R) -> StepEvent {
    state.step(rng)
}

/// Free function form of [`WalkState::extra_fragment_cycles`].
pub fn extra_fragment_cycles(state: &WalkState) -> usize {
    state.extra_fragment_cycles()
}

/// Free function form of [`WalkState::component_stats`].
pub fn component_stats(state: &WalkState) -> ComponentStats {
    state.component_stats()
}

/// Census of the random graph's components.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub components: usize,
    /// Component size to number of components of that size.
    pub size_histogram: BTreeMap<usize, usize>,
    pub trees: usize,
    pub unicyclic: usize,
    /// Components with more edges than vertices.
    pub complex: usize,
    /// Total number of vertices on unicyclic components.
    pub unicyclic_weight: usize,
}

/// Recorded walk from the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub n: usize,
    pub seed: Option<u64>,
    pub events: Vec<StepEvent>,
    /// `d(σ_t)` for `t = 0, ..., steps`.
    pub distance_series: Vec<usize>,
}

impl WalkTrace {
    pub(crate) fn empty(n: usize) -> Self {
        WalkTrace {
            n,
            seed: None,
            events: Vec::new(),
            distance_series: vec![0],
        }
    }

    pub(crate) fn push(&mut self, e: StepEvent) {
        self.distance_series.push(e.distance_after);
        self.events.push(e);
    }

    /// Replays a given sequence of increments from the identity.
    pub fn from_transpositions(n: usize, ts: &[Transposition]) -> Result<Self> {
        let mut state = WalkState::new(n)?;
        let mut trace = WalkTrace::empty(n);
        for &t in ts {
            trace.push(state.apply(t)?);
        }
        Ok(trace)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn transpositions(
        &self,
    ) -> impl DoubleEndedIterator<Item = Transposition> + ExactSizeIterator + '_ {
        self.events.iter().map(|e| e.t)
    }

    pub fn fragmentations(&self) -> usize {
        self.events
            .iter()
            .filter(|e| e.kind == StepKind::Fragmentation)
            .count()
    }

    /// `σ_N = τ_1 τ_2 ... τ_N`.
    pub fn endpoint(&self) -> Permutation {
        let mut p = Permutation::identity(self.n).expect("trace has n >= 1");
        for t in self.transpositions() {
            p.right_multiply(&t);
        }
        p
    }

    /// CSV with columns `step, i, j, kind, distance`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "i", "j", "kind", "distance"])?;
        for (s, e) in self.events.iter().enumerate() {
            w.write_record([
                (s + 1).to_string(),
                e.t.i().to_string(),
                e.t.j().to_string(),
                e.kind.as_str().to_string(),
                e.distance_after.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs `steps` random transpositions from the identity of `S_n`.
pub fn run<R: Rng + ?Sized>(n: usize, steps: usize, rng: &mut R) -> Result<WalkTrace> {
    if n < 2 && steps > 0 {
        return Err(Error::domain("n", n as f64, "n >= 2 for a non-empty walk"));
    }
    let mut state = WalkState::new(n)?;
    let mut trace = WalkTrace::empty(n);
    trace.events.reserve(steps);
    for _ in 0..steps {
        trace.push(state.step(rng));
    }
    Ok(trace)
}
