//! Exponential equation systems.
//!
//! A system has `num_x` base variables `X_1..X_n` and `num_y` exponent
//! variables `Y_1..Y_n`. Each [`Edge`] `(i, j, c)` is the equation
//!
//! ```text
//! X_i ^ (Y_1^c_1 * ... * Y_n^c_n) = X_j
//! ```
//!
//! Vertices are 0-based in memory and 1-based in every textual surface.

use serde::{Deserialize, Serialize};

/// Largest coefficient magnitude accepted by [`validate`]. Keeps every
/// path weight comfortably inside `i128`.
pub const MAX_COEFF: i64 = i32::MAX as i64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub coeffs: Vec<i64>,
}

impl Edge {
    pub fn new(tail: usize, head: usize, coeffs: Vec<i64>) -> Self {
        Self { tail, head, coeffs }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// `X_i = X_j`: the exponent is the empty product.
    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `coeffs · z`.
    pub fn dot(&self, z: &[i64]) -> i128 {
        self.coeffs
            .iter()
            .zip(z)
            .map(|(&c, &v)| c as i128 * v as i128)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpSystem {
    /// Number of `X` variables (vertices of the relation digraph).
    pub num_x: usize,
    /// Number of `Y` variables (length of every coefficient vector).
    pub num_y: usize,
    pub edges: Vec<Edge>,
}

impl ExpSystem {
    /// A system with `n` variables of each sort.
    pub fn new(n: usize, edges: Vec<Edge>) -> Self {
        Self::with_sorts(n, n, edges)
    }

    pub fn with_sorts(num_x: usize, num_y: usize, edges: Vec<Edge>) -> Self {
        Self { num_x, num_y, edges }
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|e| e.is_loop() && !e.is_identity())
    }

    /// True if two edges join the same unordered pair of vertices.
    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges
            .iter()
            .filter(|e| !e.is_loop())
            .any(|e| !seen.insert((e.tail.min(e.head), e.tail.max(e.head))))
    }

    /// `Σ |C_k(i,j)|` over every edge and every `k`.
    pub fn total_abs_coeff(&self) -> u128 {
        self.edges
            .iter()
            .flat_map(|e| e.coeffs.iter())
            .map(|c| c.unsigned_abs() as u128)
            .sum()
    }
}

/// Lists every broken invariant of `sys`. Empty means well-formed.
pub fn validate(sys: &ExpSystem) -> Vec<String> {
    let mut out = Vec::new();
    if sys.num_x == 0 {
        out.push("system has no X variables".to_string());
    }
    if sys.num_y == 0 {
        out.push("system has no Y variables".to_string());
    }
    for (idx, e) in sys.edges.iter().enumerate() {
        let label = idx + 1;
        if e.tail >= sys.num_x {
            out.push(format!("edge {label}: tail X{} out of range 1..={}", e.tail + 1, sys.num_x));
        }
        if e.head >= sys.num_x {
            out.push(format!("edge {label}: head X{} out of range 1..={}", e.head + 1, sys.num_x));
        }
        if e.coeffs.len() != sys.num_y {
            out.push(format!(
                "edge {label}: coefficient vector has length {}, expected {}",
                e.coeffs.len(),
                sys.num_y
            ));
        }
        if let Some(c) = e.coeffs.iter().find(|c| c.abs() > MAX_COEFF) {
            out.push(format!("edge {label}: coefficient {c} exceeds supported magnitude {MAX_COEFF}"));
        }
    }
    out
}

/// Output of [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalized {
    pub system: ExpSystem,
    /// `relabel[old] = new` for every original vertex.
    pub relabel: Vec<usize>,
}

/// Removes identity equations `X_i = X_j` by merging their endpoints and
/// drops tautological loops `X_i = X_i`.
///
/// Merged classes are renumbered by their smallest original vertex, so the
/// result does not depend on the order of the identity edges.
pub fn normalize(sys: &ExpSystem) -> Normalized {
    let mut uf = UnionFind::new(sys.num_x);
    for e in sys.edges.iter().filter(|e| e.is_identity()) {
        uf.union(e.tail, e.head);
    }

    let mut root_label = vec![usize::MAX; sys.num_x];
    let mut next = 0;
    let relabel: Vec<usize> = (0..sys.num_x)
        .map(|v| {
            let r = uf.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            root_label[r]
        })
        .collect();

    let edges = sys
        .edges
        .iter()
        .filter(|e| !e.is_identity())
        .map(|e| Edge::new(relabel[e.tail], relabel[e.head], e.coeffs.clone()))
        .collect();

    Normalized {
        system: ExpSystem::with_sorts(next, sys.num_y, edges),
        relabel,
    }
}

/// Disjoint-set forest with path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}
