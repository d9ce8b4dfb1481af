//! Random walks, spheres and geodesics in the Cayley graph of the symmetric
//! group generated by all transpositions.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: permutations, transpositions, cycle structures and an
//!   incremental cycle tracker.
//! * [`analytic`]: scalar limit objects (the speed curve `u`, Borel laws,
//!   Stirling numbers, geodesic counts, duality constants, Gromov products).
//! * [`samplers`]: uniform permutations, uniform samples on a sphere, and
//!   hitting-time samples of the random walk.
//! * [`walk`]: the random transposition walk with component bookkeeping.
//! * [`geodesic`]: geodesic paths, the shadow construction, and exhaustive
//!   counting oracles.
//! * [`branching`]: branching processes and the cycle-adjacency graph.
//! * [`experiments`]: seeded, parallel Monte Carlo drivers with tabular
//!   output and pass/fail checks.

pub mod analytic;
pub mod branching;
pub mod dsu;
pub mod error;
pub mod experiments;
pub mod geodesic;
pub mod perm;
pub mod rng;
pub mod samplers;
pub mod walk;

pub use error::{Error, Result};
pub use perm::{
    cayley_distance, CycleStructure, CycleTracker, MinimalDecomposition, Permutation, StepKind,
    Transposition,
};
pub use rng::{stream_id, SeededRng};
