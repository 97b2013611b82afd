//! Deciding and approximating the r-robustness of directed graphs.
//!
//! r-robustness is the connectivity notion behind resilient-consensus
//! preconditions: a digraph is r-robust when every pair of nonempty,
//! disjoint vertex sets has at least one side containing a vertex with r
//! or more in-neighbors outside that side. Deciding it exactly is
//! coNP-complete, so this crate provides three complementary tools:
//!
//! * [`exact`] — a brute-force oracle for small graphs (ground truth),
//! * [`tester`] — a seeded Monte Carlo tester that certifies r-robustness
//!   or refutes (r+Δ)-robustness with an independently checkable witness
//!   partition,
//! * [`estimate`] — a binary-search estimator bracketing the maximal
//!   robustness in an interval of width O(Δ).
//!
//! [`generators`] builds planted-partition instances with known
//! robustness for validation, and [`graph`] holds the digraph
//! representation and reachability primitives everything else uses.
//!
//! All randomized entry points take an explicit 64-bit seed and are
//! reproducible across platforms and worker counts.

pub mod estimate;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod ratio;
pub mod sampling;
pub mod seeds;
pub mod tester;

pub use estimate::{interval_estimate, EstimateError, IntervalEstimate};
pub use exact::{
    exact_is_beta_close_robust, exact_is_beta_close_robust_with_cap, exact_is_r_robust,
    exact_is_r_robust_with_cap, exact_max_robustness, exact_max_robustness_with_cap, ExactVerdict,
    OracleError, TriPartition, DEFAULT_EXACT_VERTEX_CAP,
};
pub use generators::{generate_planted, generate_uniform_digraph, GeneratorError, PlantedSpec};
pub use graph::{degree_witness, Digraph, GraphError, ParseError, VertexSet};
pub use ratio::{Ratio, RatioError};
pub use sampling::{
    enumerate_partitions, random_partition, sample_size, sample_vertices, valid_partition_count,
    weighted_in_count, Block, PartitionIter, SamplePartition, SampleSet,
};
pub use tester::{
    amplification_repeats, amplified_test, either_side_reachable, extend_partition, move_pass,
    sampled_test, test_arbitrary, Mode, TestConfig, TestError, TestOutcome, Verdict,
};
