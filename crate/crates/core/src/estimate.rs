//! Binary-search bracketing of the maximal robustness.
//!
//! Each probe runs the amplified tester at a trial r. An accept raises
//! the lower bound to r; a reject lowers the upper bound to r +
//! delta_cap, which the reject witness justifies deterministically. The
//! search stops once the bracket is tighter than `(1 + beta) *
//! delta_cap`.

use thiserror::Error;

use crate::graph::{degree_witness, Digraph};
use crate::ratio::Ratio;
use crate::seeds::substream_seed;
use crate::tester::{amplified_test, TestConfig, TestError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EstimateError {
    #[error("delta_cap must be at least 1")]
    DeltaZero,
    #[error("interval slack beta must be positive")]
    BetaZero,
    #[error("sigma must be in (0, 1)")]
    BadSigma,
    #[error("graph has {n} vertices; estimation needs at least 2")]
    GraphTooSmall { n: usize },
    #[error(transparent)]
    Test(#[from] TestError),
}

/// One probe of the binary search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub r: usize,
    pub accepted: bool,
    /// The rejection came from the minimum-in-degree check rather than a
    /// sampled witness.
    pub from_degree_check: bool,
}

/// Bracket `[lo, hi]` for the maximal robustness, with the probe log.
///
/// After any reject-driven shrink the true maximum is strictly below
/// `hi`; `hi` itself is attainable only when never lowered from its
/// initialization `ceil(n/2)` (complete graphs sit exactly there), so
/// containment is checked inclusively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalEstimate {
    pub lo: usize,
    pub hi: usize,
    pub iterations: usize,
    pub probes: Vec<ProbeOutcome>,
    /// A computed trial r fell to 0 and was clamped to 1 at least once.
    pub clamped: bool,
}

impl IntervalEstimate {
    /// Inclusive containment check for a candidate maximal robustness.
    pub fn contains(&self, r: usize) -> bool {
        self.lo <= r && r <= self.hi
    }

    pub fn width(&self) -> usize {
        self.hi - self.lo
    }
}

/// Brackets the maximal robustness in an interval of width at most
/// `(1 + beta_num/beta_den) * delta_cap`, using the practical tester
/// profile with per-probe confidence `sigma / ceil(log2 n)` (union bound
/// over the at most `ceil(log2 n)` probes).
///
/// Deterministic given the seed. Probes use the degree-check-first
/// semantics of [`crate::tester::test_arbitrary`]; a degree rejection
/// shrinks `hi` by the same `hi = r + delta_cap` rule, which inherits the
/// tester's assumption that trial values keep `2r + delta_cap` below the
/// minimum in-degree — at larger trial r the degree pair only refutes
/// `(2r + delta_cap + 1)`-robustness, which is looser.
pub fn interval_estimate(
    g: &Digraph,
    delta_cap: usize,
    beta_num: u64,
    beta_den: u64,
    sigma: Ratio,
    seed: u64,
) -> Result<IntervalEstimate, EstimateError> {
    let n = g.n();
    if n < 2 {
        return Err(EstimateError::GraphTooSmall { n });
    }
    if delta_cap == 0 {
        return Err(EstimateError::DeltaZero);
    }
    if beta_num == 0 || beta_den == 0 {
        return Err(EstimateError::BetaZero);
    }
    if !sigma.is_proper_probability() {
        return Err(EstimateError::BadSigma);
    }

    let max_probes = ceil_log2(n);
    let per_probe_sigma = sigma
        .div_int(max_probes as u64)
        .expect("max_probes is positive");
    let hard_cap = max_probes + 2;

    let mut lo: usize = 0;
    let mut hi: usize = n.div_ceil(2);
    let mut probes = Vec::new();
    let mut clamped = false;
    let mut iterations = 0;

    // loop while hi - lo >= (1 + beta) * delta_cap, compared exactly:
    // (hi - lo) * beta_den >= delta_cap * (beta_den + beta_num)
    while iterations < hard_cap
        && (hi - lo) as u128 * beta_den as u128
            >= delta_cap as u128 * (beta_den as u128 + beta_num as u128)
    {
        let raw = lo as i64 + hi as i64 - delta_cap as i64;
        let mut r = raw.div_euclid(2);
        if r < 1 {
            r = 1;
            clamped = true;
        }
        let r = r as usize;

        let probe_seed = substream_seed(seed, iterations as u64);
        let cfg = TestConfig::practical(r, delta_cap, probe_seed);
        let (accepted, from_degree_check) = match degree_witness(g, r, delta_cap) {
            Some(_) => (false, true),
            None => {
                let out = amplified_test(g, &cfg, per_probe_sigma)?;
                (!out.is_reject(), false)
            }
        };
        probes.push(ProbeOutcome { r, accepted, from_degree_check });

        let width_before = hi - lo;
        if accepted {
            lo = r;
        } else {
            hi = r + delta_cap;
        }
        iterations += 1;
        if hi - lo >= width_before {
            // No progress is possible only for degenerate beta*delta < 2
            // at the clamp boundary; stop rather than spin.
            break;
        }
    }

    Ok(IntervalEstimate { lo, hi, iterations, probes, clamped })
}

fn ceil_log2(n: usize) -> usize {
    debug_assert!(n >= 2);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}
