//! Shared helpers for integration tests: small graph builders and a
//! definition-literal robustness oracle that stays independent of the
//! library's ternary-counter enumeration.
#![allow(dead_code)] // each test target uses a different subset

use rrobust::Digraph;

pub fn complete(n: usize) -> Digraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                edges.push((a, b));
            }
        }
    }
    Digraph::from_edges(n, &edges).unwrap()
}

/// Largest r for which `set_mask` is r-reachable: the maximum over its
/// vertices of the count of in-neighbors outside the set, straight from
/// the definition.
pub fn naive_reach(g: &Digraph, set_mask: u32) -> usize {
    let mut best = 0;
    for v in 0..g.n() {
        if set_mask >> v & 1 == 0 {
            continue;
        }
        let outside = g
            .in_neighbors(v)
            .iter()
            .filter(|&&w| set_mask >> w & 1 == 0)
            .count();
        best = best.max(outside);
    }
    best
}

/// Double subset enumeration: every nonempty A, then every nonempty B
/// inside A's complement. Returns the minimum over pairs of
/// `max(reach(A), reach(B))`; the graph is r-robust exactly when every
/// pair has a side with reach at least r, i.e. when r is at most this
/// minimum.
pub fn naive_max_robustness(g: &Digraph) -> usize {
    let n = g.n();
    assert!((2..=16).contains(&n), "naive oracle is for tiny graphs");
    let full = (1u32 << n) - 1;

    // reach is memoized per mask; each entry is computed literally
    let mut reach = vec![0usize; 1 << n];
    for mask in 1..=full {
        reach[mask as usize] = naive_reach(g, mask);
    }

    let mut best = usize::MAX;
    for a in 1..=full {
        let comp = !a & full;
        let mut b = comp;
        while b != 0 {
            best = best.min(reach[a as usize].max(reach[b as usize]));
            b = (b - 1) & comp;
        }
    }
    best
}

pub fn naive_is_r_robust(g: &Digraph, r: usize) -> bool {
    r <= naive_max_robustness(g)
}
