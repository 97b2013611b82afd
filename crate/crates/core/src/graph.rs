//! Directed-graph representation, edge-list I/O, and the degree and
//! reachability primitives the robustness algorithms are built on.
//!
//! Graphs are simple (no self-loops, no duplicate edges), 0-indexed, and
//! immutable after construction. Only in-neighbor lists are stored: every
//! robustness query counts in-neighbors of a vertex inside or outside a
//! set, never out-neighbors.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {id} out of range for graph with {n} vertices")]
    IdOutOfRange { id: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
}

/// Errors from [`Digraph::parse_edge_list`]. Line numbers are 1-based and
/// count every physical line, including comments.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing header line `n m`")]
    MissingHeader,
    #[error("line {line}: malformed: expected two integers, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex id {id} out of range (n = {n})")]
    IdOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {a} -> {b}")]
    DuplicateEdge { line: usize, a: usize, b: usize },
    #[error("edge count mismatch: header declares {declared}, file has {actual}")]
    EdgeCountMismatch { declared: usize, actual: usize },
}

/// An immutable directed graph stored as per-vertex sorted in-neighbor
/// lists.
///
/// An edge `a -> b` makes `a` an in-neighbor of `b`. In the edge-list file
/// format each edge is one line `a b` in that source-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    in_neighbors: Vec<Vec<usize>>,
    m: usize,
}

impl Digraph {
    /// Builds a graph with `n` vertices from `(source, destination)` pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut in_neighbors = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n {
                return Err(GraphError::IdOutOfRange { id: a, n });
            }
            if b >= n {
                return Err(GraphError::IdOutOfRange { id: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            in_neighbors[b].push(a);
        }
        let mut m = 0;
        for (v, list) in in_neighbors.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                let dup = list.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
                return Err(GraphError::DuplicateEdge(dup, v));
            }
            m += list.len();
        }
        Ok(Digraph { in_neighbors, m })
    }

    /// Parses the edge-list text format:
    ///
    /// ```text
    /// # comment lines start with '#'
    /// n m
    /// a b          (one directed edge a -> b per line, 0-indexed)
    /// ```
    pub fn parse_edge_list(text: &str) -> Result<Self, ParseError> {
        let mut header: Option<(usize, usize)> = None;
        let mut n = 0;
        let mut in_neighbors: Vec<Vec<usize>> = Vec::new();
        let mut seen = HashSet::new();
        let mut actual = 0usize;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_ascii_whitespace();
            let first = fields.next();
            let second = fields.next();
            let (a, b) = match (first, second, fields.next()) {
                (Some(a), Some(b), None) => {
                    match (a.parse::<usize>(), b.parse::<usize>()) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => {
                            return Err(ParseError::Malformed {
                                line: line_no,
                                text: line.to_string(),
                            })
                        }
                    }
                }
                _ => {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        text: line.to_string(),
                    })
                }
            };
            if header.is_none() {
                header = Some((a, b));
                n = a;
                in_neighbors = vec![Vec::new(); n];
                continue;
            }
            if a >= n {
                return Err(ParseError::IdOutOfRange { line: line_no, id: a, n });
            }
            if b >= n {
                return Err(ParseError::IdOutOfRange { line: line_no, id: b, n });
            }
            if a == b {
                return Err(ParseError::SelfLoop { line: line_no, vertex: a });
            }
            if !seen.insert((a, b)) {
                return Err(ParseError::DuplicateEdge { line: line_no, a, b });
            }
            in_neighbors[b].push(a);
            actual += 1;
        }

        let (_, declared) = header.ok_or(ParseError::MissingHeader)?;
        if declared != actual {
            return Err(ParseError::EdgeCountMismatch { declared, actual });
        }
        for list in &mut in_neighbors {
            list.sort_unstable();
        }
        Ok(Digraph {
            in_neighbors,
            m: actual,
        })
    }

    /// Canonical edge-list text: header line, then edges in ascending
    /// `(source, destination)` order and no trailing newline, so equal
    /// graphs serialize to identical bytes and round-trip through
    /// [`Digraph::parse_edge_list`].
    pub fn write_edge_list(&self) -> String {
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(self.m);
        for (b, list) in self.in_neighbors.iter().enumerate() {
            for &a in list {
                edges.push((a, b));
            }
        }
        edges.sort_unstable();
        let mut out = format!("{} {}", self.n(), self.m);
        for (a, b) in edges {
            out.push('\n');
            out.push_str(&format!("{} {}", a, b));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.in_neighbors.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted in-neighbor list of `v`.
    ///
    /// Panics if `v` is out of range.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_neighbors[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_neighbors[v].len()
    }

    /// Minimum in-degree and the smallest vertex id attaining it.
    ///
    /// Panics on the empty graph.
    pub fn min_in_degree(&self) -> (usize, usize) {
        assert!(self.n() > 0, "min_in_degree on empty graph");
        let mut best = (0, usize::MAX);
        for v in 0..self.n() {
            let d = self.in_degree(v);
            if d < best.1 {
                best = (v, d);
            }
        }
        best
    }

    /// Number of in-neighbors of `v` that lie outside `set`.
    pub fn outside_count(&self, v: usize, set: &VertexSet) -> usize {
        self.in_neighbors[v]
            .iter()
            .filter(|&&w| !set.contains(w))
            .count()
    }

    /// Whether `set` contains a vertex with at least `r` in-neighbors
    /// outside `set`.
    ///
    /// Panics if `set` is empty.
    pub fn is_r_reachable(&self, set: &VertexSet, r: usize) -> bool {
        assert!(!set.is_empty(), "reachability of the empty set is undefined");
        set.iter().any(|v| self.outside_count(v, set) >= r)
    }

    /// The largest `r` for which `set` is r-reachable: the maximum over
    /// its vertices of the outside in-neighbor count.
    ///
    /// Panics if `set` is empty.
    pub fn reach_index(&self, set: &VertexSet) -> usize {
        assert!(!set.is_empty(), "reach index of the empty set is undefined");
        set.iter()
            .map(|v| self.outside_count(v, set))
            .max()
            .unwrap()
    }
}

/// If the graph's minimum in-degree is at most `2r + delta_cap`, returns a
/// minimum-in-degree vertex `v`; the pair `({v}, V \ {v})` then refutes
/// `(2r + delta_cap + 1)`-robustness, since `{v}` has only `d_min` outside
/// in-neighbors and every vertex of `V \ {v}` has at most one (`v` itself).
/// Returns `None` exactly when `d_min > 2r + delta_cap`, the precondition
/// of the sampled tester.
///
/// Single pass over the stored degree lists; `r` must be positive.
pub fn degree_witness(g: &Digraph, r: usize, delta_cap: usize) -> Option<usize> {
    assert!(r > 0, "degree_witness requires r > 0");
    assert!(g.n() >= 2, "degree_witness requires at least two vertices");
    let (v, d_min) = g.min_in_degree();
    if d_min <= 2 * r + delta_cap {
        Some(v)
    } else {
        None
    }
}

/// A set of vertex ids, stored sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    ids: Vec<usize>,
}

impl VertexSet {
    /// Builds a set from arbitrary ids; sorts and drops duplicates.
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet { ids }
    }

    pub fn empty() -> Self {
        VertexSet { ids: Vec::new() }
    }

    /// The full vertex set `0..n`.
    pub fn full(n: usize) -> Self {
        VertexSet {
            ids: (0..n).collect(),
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet { ids: vec![v] }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.ids.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.ids
    }

    /// All ids in `0..n` that are not in `self`.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut ids = Vec::with_capacity(n - self.ids.len());
        let mut it = self.ids.iter().peekable();
        for v in 0..n {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                ids.push(v);
            }
        }
        VertexSet { ids }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let mut a = self.ids.iter().peekable();
        let mut b = other.ids.iter().peekable();
        while let (Some(&&x), Some(&&y)) = (a.peek(), b.peek()) {
            match x.cmp(&y) {
                std::cmp::Ordering::Less => {
                    a.next();
                }
                std::cmp::Ordering::Greater => {
                    b.next();
                }
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    /// Space-separated ascending ids.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.ids {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", v)?;
            first = false;
        }
        Ok(())
    }
}
