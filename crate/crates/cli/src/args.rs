use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cayley",
    version,
    about = "Random walks, spheres and geodesics in the transposition Cayley graph",
    after_help = "Column schemas for every output are documented in docs/schemas/."
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Base seed; a random one is drawn and printed to stderr when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Exit with status 1 if any tolerance check fails.
    #[arg(long, global = true)]
    pub check: bool,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// TOML file with an [analytic] table and one table per experiment.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance after cn/2 steps against the speed curve u(c).
    SpeedCurve(SpeedCurveArgs),
    /// Probability of no fragmentation up to time cn/2.
    NoFragmentation(NoFragmentationArgs),
    /// Gromov products and shadow geodesics of pairs of hitting samples.
    Thm1(Thm1Args),
    /// Distance and Gromov product of two uniform sphere samples.
    Thm8(Thm8Args),
    /// Fixed-point statistic separating the uniform and hitting laws.
    Singularity(SingularityArgs),
    /// The sphere-exponent curve gamma(a) against xi = f^{-1}(a).
    Fig2(Fig2Args),
    /// Cycle-length law of a uniform sphere sample.
    SphereLaw(SphereLawArgs),
    /// Cycle-length law of the no-fragmentation hitting sample.
    HittingLaw(HittingLawArgs),
    /// Deferred set of the shadow geodesic against unicyclic weight.
    ShadowGap(ShadowGapArgs),
    /// Per-step fragmentation frequency in the supercritical regime.
    FragmentationRate(FragmentationRateArgs),
    /// Uniform samples on the sphere of radius k.
    SphereSample(SphereSampleArgs),
    /// Samples of the walk stopped on first reaching radius floor(an).
    HittingSample(HittingSampleArgs),
    /// Number of geodesics from a permutation of the given cycle type to the identity.
    GeodesicCount(GeodesicCountArgs),
    /// Number of permutations of S_n at distance k from the identity.
    Volume(VolumeArgs),
    /// Branching-process comparisons: ageing collapse or cluster weights.
    BranchingCheck(BranchingCheckArgs),
    /// One random transposition walk, step by step.
    WalkTrace(WalkTraceArgs),
}

#[derive(Debug, Args)]
pub struct SpeedCurveArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Time parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NoFragmentationArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Thm1Args {
    /// Sizes for the bounded regime, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Radius ratio of the bounded regime.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub large_a: Option<f64>,
    #[arg(long)]
    pub large_n: Option<usize>,
    #[arg(long)]
    pub large_reps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Thm8Args {
    #[arg(long)]
    pub n: Option<usize>,
    /// Radius ratios, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<f64>>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Extra sizes reported as a trend, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub trend_n: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct SingularityArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub max_error_rate: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    /// Radius ratios in (0, 1/2), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<f64>>,
    /// Extrapolation sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    /// Second extrapolation grid for the stability check, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub refined_grid: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct SphereLawArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct HittingLawArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ShadowGapArgs {
    /// Sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FragmentationRateArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SphereSampleArgs {
    #[arg(long)]
    pub n: usize,
    /// Radius; defaults to floor(an) when --a is given.
    #[arg(long, conflicts_with = "a")]
    pub k: Option<usize>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct HittingSampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub a: f64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Condition on no fragmentation before the hitting time.
    #[arg(long)]
    pub no_fragmentation: bool,
}

#[derive(Debug, Args)]
pub struct GeodesicCountArgs {
    /// Cycle lengths, e.g. `3` or `3,2,2`; fixed points may be omitted.
    #[arg(long, value_delimiter = ',', required = true)]
    pub cycles: Vec<usize>,
    /// Size of the ground set (defaults to the sum of the cycle lengths).
    #[arg(long)]
    pub n: Option<usize>,
    /// Also count by exhaustive recursion (n <= 7) and compare.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Print the exact integer instead of its natural logarithm.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchingKind {
    /// Ageing process against the shifted-geometric process.
    Ageing,
    /// Cluster weight of two sphere samples against branching progeny.
    ClusterWeight,
}

#[derive(Debug, Args)]
pub struct BranchingCheckArgs {
    #[arg(long, value_enum, default_value_t = BranchingKind::Ageing)]
    pub kind: BranchingKind,
    /// Offspring parameter (ageing).
    #[arg(long)]
    pub p: Option<f64>,
    /// Ground set size (cluster_weight).
    #[arg(long)]
    pub n: Option<usize>,
    /// Radius ratio (cluster_weight).
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WalkTraceArgs {
    #[arg(long)]
    pub n: usize,
    /// Number of steps.
    #[arg(long, conflicts_with = "c", required_unless_present = "c")]
    pub steps: Option<usize>,
    /// Run floor(cn/2) steps.
    #[arg(long)]
    pub c: Option<f64>,
}
