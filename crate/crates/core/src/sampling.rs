//! Vertex sampling with replacement and 3-way partitions of the sample.
//!
//! Samples are multisets: a vertex drawn several times keeps its
//! multiplicity in all neighbor counts, but all copies share one block of
//! any partition, so partitions range over the distinct (support)
//! vertices only.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::graph::Digraph;

/// Number of vertices to sample so the tester's guarantees hold:
/// `ceil(max((8/eps^2) ln(32/(eps*delta)), (1/eps) ln(16/delta)))` with
/// `eps = delta_cap / n` and `delta` the per-run failure probability.
/// The ceiling keeps the bound on the safe side.
///
/// Panics if `delta_cap` is zero or exceeds `n`, or if `fail_prob` is not
/// in (0, 1).
pub fn sample_size(delta_cap: usize, n: usize, fail_prob: crate::ratio::Ratio) -> usize {
    assert!(
        delta_cap > 0 && delta_cap <= n,
        "need 0 < delta_cap <= n for a positive sampling error bound"
    );
    assert!(
        fail_prob.is_proper_probability(),
        "failure probability must be in (0, 1)"
    );
    let eps = delta_cap as f64 / n as f64;
    let delta = fail_prob.as_f64();
    let concentration = (8.0 / (eps * eps)) * (32.0 / (eps * delta)).ln();
    let nonempty = (1.0 / eps) * (16.0 / delta).ln();
    concentration.max(nonempty).ceil() as usize
}

/// A multiset of `t` vertex draws plus its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    draws: Vec<usize>,
    support: Vec<usize>,
    multiplicity: Vec<u32>,
}

impl SampleSet {
    pub fn from_draws(draws: Vec<usize>) -> Self {
        let mut sorted = draws.clone();
        sorted.sort_unstable();
        let mut support = Vec::new();
        let mut multiplicity = Vec::new();
        for v in sorted {
            if support.last() == Some(&v) {
                *multiplicity.last_mut().unwrap() += 1;
            } else {
                support.push(v);
                multiplicity.push(1);
            }
        }
        SampleSet {
            draws,
            support,
            multiplicity,
        }
    }

    /// The draws in sampling order, repetitions included.
    pub fn draws(&self) -> &[usize] {
        &self.draws
    }

    /// Distinct sampled vertices, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Occurrence count of `support()[i]` among the draws.
    pub fn multiplicity(&self, i: usize) -> u32 {
        self.multiplicity[i]
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Position of `v` in the support, if sampled.
    pub fn support_position(&self, v: usize) -> Option<usize> {
        self.support.binary_search(&v).ok()
    }
}

/// Draws `t` vertices uniformly at random with replacement from `0..n`.
pub fn sample_vertices(n: usize, t: usize, rng: &mut ChaCha12Rng) -> SampleSet {
    assert!(n >= 1 && t >= 1, "need n >= 1 and t >= 1");
    let draws = (0..t).map(|_| rng.gen_range(0..n)).collect();
    SampleSet::from_draws(draws)
}

/// Block labels of a 3-way partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Block {
    A = 0,
    B = 1,
    C = 2,
}

impl Block {
    fn from_digit(d: u64) -> Block {
        match d {
            0 => Block::A,
            1 => Block::B,
            _ => Block::C,
        }
    }
}

/// An assignment of every support vertex of a sample to one block.
/// All copies of a repeated vertex share its block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePartition {
    blocks: Vec<Block>,
}

impl SamplePartition {
    pub fn new(blocks: Vec<Block>) -> Self {
        SamplePartition { blocks }
    }

    /// Block of `support()[i]`.
    pub fn block(&self, i: usize) -> Block {
        self.blocks[i]
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn has_nonempty_a_and_b(&self) -> bool {
        self.blocks.contains(&Block::A) && self.blocks.contains(&Block::B)
    }
}

/// Sum of multiplicities of v's sampled in-neighbors whose block is in
/// `blocks`.
pub fn weighted_in_count(
    g: &Digraph,
    v: usize,
    sample: &SampleSet,
    part: &SamplePartition,
    blocks: &[Block],
) -> u64 {
    let mut total = 0u64;
    for (i, &u) in sample.support().iter().enumerate() {
        if blocks.contains(&part.block(i)) && g.in_neighbors(v).binary_search(&u).is_ok() {
            total += sample.multiplicity(i) as u64;
        }
    }
    total
}

/// Number of 3-way assignments of `support_len` vertices with both A and
/// B nonempty: `3^s - 2*2^s + 1` by inclusion-exclusion. `None` on u64
/// overflow (s > 40).
pub fn valid_partition_count(support_len: usize) -> Option<u64> {
    let s = support_len as u32;
    let pow3 = 3u64.checked_pow(s)?;
    let pow2 = 2u64.checked_pow(s)?;
    // summed before subtracting: 3^s + 1 >= 2^(s+1) but 3^s - 2*2^s underflows at s = 1
    Some(pow3 + 1 - 2 * pow2)
}

/// Decodes assignment index `k`: ternary digit `i` of `k` is the block of
/// `support()[i]`.
pub fn partition_from_index(support_len: usize, k: u64) -> SamplePartition {
    let mut blocks = Vec::with_capacity(support_len);
    let mut rest = k;
    for _ in 0..support_len {
        blocks.push(Block::from_digit(rest % 3));
        rest /= 3;
    }
    SamplePartition::new(blocks)
}

/// Iterator over all valid sample partitions (both A and B nonempty) in
/// ascending ternary-counter order.
pub struct PartitionIter {
    support_len: usize,
    next_index: u64,
    total: u64,
}

impl Iterator for PartitionIter {
    type Item = SamplePartition;

    fn next(&mut self) -> Option<SamplePartition> {
        while self.next_index < self.total {
            let part = partition_from_index(self.support_len, self.next_index);
            self.next_index += 1;
            if part.has_nonempty_a_and_b() {
                return Some(part);
            }
        }
        None
    }
}

/// All valid 3-way partitions of the sample's support, ascending by
/// ternary-counter index.
///
/// Panics if the support is empty or too large to index in a u64.
pub fn enumerate_partitions(sample: &SampleSet) -> PartitionIter {
    let s = sample.support_len();
    assert!(s >= 1, "cannot partition an empty support");
    let total = 3u64
        .checked_pow(s as u32)
        .expect("support too large for exhaustive enumeration");
    PartitionIter {
        support_len: s,
        next_index: 0,
        total,
    }
}

/// Uniform random block per support vertex, redrawn until both A and B
/// are nonempty (at most a handful of attempts in expectation).
///
/// Panics if the support has fewer than two vertices, where no valid
/// partition exists.
pub fn random_partition(sample: &SampleSet, rng: &mut ChaCha12Rng) -> SamplePartition {
    let s = sample.support_len();
    assert!(s >= 2, "a valid partition needs at least two support vertices");
    loop {
        let blocks: Vec<Block> = (0..s).map(|_| Block::from_digit(rng.gen_range(0..3))).collect();
        let part = SamplePartition::new(blocks);
        if part.has_nonempty_a_and_b() {
            return part;
        }
    }
}
