//! Graph constructors with known ground truth.
//!
//! The planted construction builds a digraph whose maximal robustness is
//! exactly `rbar` by design: three cliques A, B, C, exactly `rbar` random
//! cross in-edges into every vertex of A and B, and all of A and B as
//! in-neighbors of every vertex of C. The pair (A, B) is then a
//! violating witness at level `rbar + 1` while every small set stays
//! well connected.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::exact::TriPartition;
use crate::graph::{Digraph, VertexSet};
use crate::ratio::Ratio;
use crate::seeds::rng_from_seed;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("block sizes {size_a} + {size_b} exceed n = {n}")]
    BlocksTooLarge { size_a: usize, size_b: usize, n: usize },
    #[error("min block size {min_block} is below 2*rbar = {double_rbar}; the construction's robustness claim needs min(|A|,|B|,|C|) >= 2*rbar")]
    BlocksTooSmallForRbar { min_block: usize, double_rbar: usize },
    #[error("rbar must be at least 1")]
    RbarZero,
}

/// Parameters of the planted construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlantedSpec {
    pub n: usize,
    pub size_a: usize,
    pub size_b: usize,
    pub rbar: usize,
    pub seed: u64,
}

impl PlantedSpec {
    fn validate(&self) -> Result<usize, GeneratorError> {
        if self.rbar == 0 {
            return Err(GeneratorError::RbarZero);
        }
        if self.size_a + self.size_b > self.n {
            return Err(GeneratorError::BlocksTooLarge {
                size_a: self.size_a,
                size_b: self.size_b,
                n: self.n,
            });
        }
        let size_c = self.n - self.size_a - self.size_b;
        let min_block = self.size_a.min(self.size_b).min(size_c);
        if min_block < 2 * self.rbar {
            return Err(GeneratorError::BlocksTooSmallForRbar {
                min_block,
                double_rbar: 2 * self.rbar,
            });
        }
        Ok(size_c)
    }
}

/// Builds the planted instance and returns it together with the
/// ground-truth partition (in the shuffled labels).
///
/// Construction, before label shuffling: vertices `0..size_a` are A,
/// the next `size_b` are B, the rest C; every block is a complete
/// bidirectional digraph; each vertex of A gains in-edges from `rbar`
/// distinct vertices drawn uniformly from B∪C (symmetrically for B from
/// A∪C); every vertex of C gains all of A∪B as in-neighbors. A seeded
/// permutation then relabels all vertices.
///
/// Every vertex of A ends with exactly `rbar` in-neighbors outside A
/// (its random picks), so neither A nor B is `(rbar+1)`-reachable.
pub fn generate_planted(spec: &PlantedSpec) -> Result<(Digraph, TriPartition), GeneratorError> {
    let size_c = spec.validate()?;
    let n = spec.n;
    let mut rng = rng_from_seed(spec.seed);

    let block_a: Vec<usize> = (0..spec.size_a).collect();
    let block_b: Vec<usize> = (spec.size_a..spec.size_a + spec.size_b).collect();
    let block_c: Vec<usize> = (spec.size_a + spec.size_b..n).collect();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for block in [&block_a, &block_b, &block_c] {
        for &u in block.iter() {
            for &v in block.iter() {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
    }

    // rbar random in-edges per A/B vertex, drawn without replacement
    // from the opposite pool. These cannot duplicate clique or cross
    // edges: the picks come from other blocks, and the only cross edges
    // added below point into C while these point into A or B.
    let pool_for_a: Vec<usize> = block_b.iter().chain(block_c.iter()).copied().collect();
    let pool_for_b: Vec<usize> = block_a.iter().chain(block_c.iter()).copied().collect();
    for &u in &block_a {
        for idx in rand::seq::index::sample(&mut rng, pool_for_a.len(), spec.rbar) {
            edges.push((pool_for_a[idx], u));
        }
    }
    for &u in &block_b {
        for idx in rand::seq::index::sample(&mut rng, pool_for_b.len(), spec.rbar) {
            edges.push((pool_for_b[idx], u));
        }
    }

    // every vertex of C sees all of A and B as in-neighbors
    for &u in block_a.iter().chain(block_b.iter()) {
        for &v in &block_c {
            edges.push((u, v));
        }
    }

    let mut relabel: Vec<usize> = (0..n).collect();
    relabel.shuffle(&mut rng);
    let shuffled: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| (relabel[a], relabel[b]))
        .collect();

    let g = Digraph::from_edges(n, &shuffled).expect("construction yields a simple digraph");
    let truth = TriPartition::new(
        block_a.iter().map(|&v| relabel[v]).collect(),
        block_b.iter().map(|&v| relabel[v]).collect(),
        block_c.iter().map(|&v| relabel[v]).collect(),
    );
    debug_assert_eq!(size_c, truth.c.len());
    Ok((g, truth))
}

/// Serializes a ground-truth partition and its robustness to the side
/// file format written next to generated graphs.
pub fn write_ground_truth(truth: &TriPartition, rbar: usize) -> String {
    format!("A: {}\nB: {}\nrbar: {}", truth.a, truth.b, rbar)
}

/// Parses the side file format of [`write_ground_truth`], reconstructing
/// C as the complement within `0..n`.
pub fn parse_ground_truth(text: &str, n: usize) -> Option<(TriPartition, usize)> {
    let mut a = None;
    let mut b = None;
    let mut rbar = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(ids) = line.strip_prefix("A:") {
            a = Some(parse_ids(ids)?);
        } else if let Some(ids) = line.strip_prefix("B:") {
            b = Some(parse_ids(ids)?);
        } else if let Some(k) = line.strip_prefix("rbar:") {
            rbar = Some(k.trim().parse::<usize>().ok()?);
        }
    }
    let a = a?;
    let b = b?;
    let mut in_ab = vec![false; n];
    for v in a.iter().chain(b.iter()) {
        if v >= n {
            return None;
        }
        in_ab[v] = true;
    }
    let c: VertexSet = (0..n).filter(|&v| !in_ab[v]).collect();
    Some((TriPartition::new(a, b, c), rbar?))
}

fn parse_ids(s: &str) -> Option<VertexSet> {
    let mut ids = Vec::new();
    for tok in s.split_ascii_whitespace() {
        ids.push(tok.parse::<usize>().ok()?);
    }
    Some(VertexSet::new(ids))
}

/// Erdős–Rényi-style digraph: each ordered pair `(a, b)`, `a != b`, is an
/// edge independently with probability `edge_prob` (evaluated exactly as
/// a rational).
pub fn generate_uniform_digraph(n: usize, edge_prob: Ratio, seed: u64) -> Digraph {
    assert!(edge_prob.num() <= edge_prob.den(), "edge probability above 1");
    let num = u32::try_from(edge_prob.num()).expect("edge probability numerator too large");
    let den = u32::try_from(edge_prob.den()).expect("edge probability denominator too large");
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && (num == den || rng.gen_ratio(num, den)) {
                edges.push((a, b));
            }
        }
    }
    Digraph::from_edges(n, &edges).expect("pairs are distinct and loop-free")
}
