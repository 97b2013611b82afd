//! Brute-force robustness oracle for small graphs.
//!
//! Every 3-way assignment of vertices to (A, B, C) is enumerated with a
//! ternary counter, so runtime is Θ(3^n) and a size guard (default
//! [`DEFAULT_EXACT_VERTEX_CAP`]) rejects graphs where that is hopeless.
//! The oracle is the ground truth the sampled tester is validated
//! against.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Digraph, VertexSet};

/// Default maximum vertex count for exact enumeration; 3^13 is about
/// 1.6M assignments and completes in well under a second.
pub const DEFAULT_EXACT_VERTEX_CAP: usize = 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the exact-enumeration cap {cap}; raise the cap to force")]
    SizeGuard { n: usize, cap: usize },
    #[error("exact robustness needs at least 2 vertices, got {n}")]
    TooSmall { n: usize },
    #[error("beta = {num}/{den} out of range; need 1/n <= beta <= 1 for n = {n}")]
    BetaOutOfRange { num: u64, den: u64, n: usize },
}

/// Disjoint vertex sets `(a, b, c)` covering the whole graph, with `a`
/// and `b` nonempty. Violating witnesses and ground-truth partitions are
/// carried in this form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriPartition {
    pub a: VertexSet,
    pub b: VertexSet,
    pub c: VertexSet,
}

impl TriPartition {
    pub fn new(a: VertexSet, b: VertexSet, c: VertexSet) -> Self {
        TriPartition { a, b, c }
    }

    /// Checks the structural invariants against a graph of `n` vertices:
    /// `a` and `b` nonempty, all three pairwise disjoint, union `0..n`.
    pub fn is_valid_for(&self, n: usize) -> bool {
        if self.a.is_empty() || self.b.is_empty() {
            return false;
        }
        if self.a.len() + self.b.len() + self.c.len() != n {
            return false;
        }
        self.a.is_disjoint(&self.b)
            && self.a.is_disjoint(&self.c)
            && self.b.is_disjoint(&self.c)
    }
}

/// Result of an exact robustness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactVerdict {
    Robust,
    /// A pair of nonempty disjoint sets neither of which is r-reachable
    /// (restricted to qualifying sizes in the beta-close variant).
    NotRobust(TriPartition),
}

impl ExactVerdict {
    pub fn is_robust(&self) -> bool {
        matches!(self, ExactVerdict::Robust)
    }

    pub fn witness(&self) -> Option<&TriPartition> {
        match self {
            ExactVerdict::Robust => None,
            ExactVerdict::NotRobust(w) => Some(w),
        }
    }
}

/// Exact r-robustness with the default size guard.
pub fn exact_is_r_robust(g: &Digraph, r: usize) -> Result<ExactVerdict, OracleError> {
    exact_is_r_robust_with_cap(g, r, DEFAULT_EXACT_VERTEX_CAP)
}

/// Exact r-robustness: true iff for every pair of nonempty disjoint
/// vertex sets at least one side is r-reachable. On violation the
/// witness with the smallest ternary-counter index is returned,
/// independent of worker count.
pub fn exact_is_r_robust_with_cap(
    g: &Digraph,
    r: usize,
    cap: usize,
) -> Result<ExactVerdict, OracleError> {
    enumerate(g, cap, |_, _| true, r)
}

/// Largest r for which the graph is r-robust (0 if not even 1-robust),
/// with the default size guard.
pub fn exact_max_robustness(g: &Digraph) -> Result<usize, OracleError> {
    exact_max_robustness_with_cap(g, DEFAULT_EXACT_VERTEX_CAP)
}

/// Ascending scan over r; valid because r-robustness is monotone
/// downward in r. Terminates at the latest when r exceeds n, where no
/// set can be reachable.
pub fn exact_max_robustness_with_cap(g: &Digraph, cap: usize) -> Result<usize, OracleError> {
    let mut rbar = 0;
    for r in 1..=g.n() {
        if exact_is_r_robust_with_cap(g, r, cap)?.is_robust() {
            rbar = r;
        } else {
            break;
        }
    }
    Ok(rbar)
}

/// Beta-close r-robustness with the default size guard.
pub fn exact_is_beta_close_robust(
    g: &Digraph,
    r: usize,
    beta_num: u64,
    beta_den: u64,
) -> Result<ExactVerdict, OracleError> {
    exact_is_beta_close_robust_with_cap(g, r, beta_num, beta_den, DEFAULT_EXACT_VERTEX_CAP)
}

/// Like [`exact_is_r_robust_with_cap`] but only pairs with
/// `min(|A|, |B|) >= beta * n` are examined; the size comparison is the
/// exact integer test `min(|A|, |B|) * beta_den >= beta_num * n`.
pub fn exact_is_beta_close_robust_with_cap(
    g: &Digraph,
    r: usize,
    beta_num: u64,
    beta_den: u64,
    cap: usize,
) -> Result<ExactVerdict, OracleError> {
    let n = g.n() as u64;
    if beta_den == 0 || beta_num * n < beta_den || beta_num > beta_den {
        return Err(OracleError::BetaOutOfRange {
            num: beta_num,
            den: beta_den,
            n: g.n(),
        });
    }
    enumerate(
        g,
        cap,
        move |ca, cb| {
            let min_side = ca.min(cb) as u128;
            min_side * beta_den as u128 >= beta_num as u128 * n as u128
        },
        r,
    )
}

/// Shared enumeration core. `qualifies(|A|, |B|)` filters which pairs
/// must satisfy the reachability condition.
fn enumerate<F>(g: &Digraph, cap: usize, qualifies: F, r: usize) -> Result<ExactVerdict, OracleError>
where
    F: Fn(u32, u32) -> bool + Sync,
{
    let n = g.n();
    if n < 2 {
        return Err(OracleError::TooSmall { n });
    }
    if n > cap {
        return Err(OracleError::SizeGuard { n, cap });
    }
    let total = 3u64
        .checked_pow(n as u32)
        .and_then(|v| usize::try_from(v).ok())
        .ok_or(OracleError::SizeGuard { n, cap })?;

    // In-neighbor bitmasks; n <= cap <= 40 in any sane configuration,
    // and the 3^n counter above overflows u64 first anyway.
    let nb: Vec<u64> = (0..n)
        .map(|v| {
            g.in_neighbors(v)
                .iter()
                .fold(0u64, |acc, &w| acc | (1u64 << w))
        })
        .collect();

    // Assignment k maps vertex i to ternary digit i of k: 0 -> A,
    // 1 -> B, 2 -> C. Symmetry pruning keeps only assignments whose
    // lowest non-C vertex is in A; swapping A and B checks the same pair.
    let hit = (0..total)
        .into_par_iter()
        .with_min_len(1 << 12)
        .find_map_first(|k| {
            check_assignment(k as u64, n, &nb, r, &qualifies).map(|masks| (k, masks))
        });

    match hit {
        None => Ok(ExactVerdict::Robust),
        Some((_, (a_mask, b_mask))) => {
            let a: VertexSet = (0..n).filter(|&v| a_mask >> v & 1 == 1).collect();
            let b: VertexSet = (0..n).filter(|&v| b_mask >> v & 1 == 1).collect();
            let c: VertexSet = (0..n)
                .filter(|&v| (a_mask | b_mask) >> v & 1 == 0)
                .collect();
            Ok(ExactVerdict::NotRobust(TriPartition::new(a, b, c)))
        }
    }
}

/// Returns the (A, B) masks when assignment `k` is a valid, qualifying,
/// violating pair; `None` otherwise.
fn check_assignment<F>(
    k: u64,
    n: usize,
    nb: &[u64],
    r: usize,
    qualifies: &F,
) -> Option<(u64, u64)>
where
    F: Fn(u32, u32) -> bool,
{
    let mut a_mask = 0u64;
    let mut b_mask = 0u64;
    let mut rest = k;
    let mut seen_non_c = false;
    for v in 0..n {
        let digit = rest % 3;
        rest /= 3;
        match digit {
            0 => {
                a_mask |= 1 << v;
                seen_non_c = true;
            }
            1 => {
                if !seen_non_c {
                    return None; // symmetric twin already covered
                }
                b_mask |= 1 << v;
            }
            _ => {}
        }
    }
    if a_mask == 0 || b_mask == 0 {
        return None;
    }
    if !qualifies(a_mask.count_ones(), b_mask.count_ones()) {
        return None;
    }
    if side_reachable(a_mask, nb, r) || side_reachable(b_mask, nb, r) {
        return None;
    }
    Some((a_mask, b_mask))
}

fn side_reachable(mask: u64, nb: &[u64], r: usize) -> bool {
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if (nb[v] & !mask).count_ones() as usize >= r {
            return true;
        }
    }
    false
}
