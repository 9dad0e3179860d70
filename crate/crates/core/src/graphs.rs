//! The relation digraph of a system: weak components, a spanning forest,
//! the fundamental cycle basis it induces, and signed path sums.
//!
//! Orientation convention: a step walks its edge tail→head when the sign is
//! `+1` and head→tail when it is `-1`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::eqsys::{ExpSystem, UnionFind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub edge: usize,
    /// `+1` or `-1`.
    pub sign: i8,
}

impl Step {
    pub fn forward(edge: usize) -> Self {
        Self { edge, sign: 1 }
    }

    pub fn backward(edge: usize) -> Self {
        Self { edge, sign: -1 }
    }
}

/// A closed walk through distinct edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedCycle {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPath {
    pub from: usize,
    pub to: usize,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Vertex blocks, each sorted, ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
    /// `component_of[v]` indexes into `blocks`.
    pub component_of: Vec<usize>,
}

impl Components {
    /// The canonical representative: the smallest vertex of the block.
    pub fn representative(&self, block: usize) -> usize {
        self.blocks[block][0]
    }

    pub fn representative_of(&self, v: usize) -> usize {
        self.representative(self.component_of[v])
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

pub fn weak_components(sys: &ExpSystem) -> Components {
    let mut uf = UnionFind::new(sys.num_x);
    for e in &sys.edges {
        uf.union(e.tail, e.head);
    }
    let mut block_of_root = vec![usize::MAX; sys.num_x];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let component_of = (0..sys.num_x)
        .map(|v| {
            let r = uf.find(v);
            if block_of_root[r] == usize::MAX {
                block_of_root[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[block_of_root[r]].push(v);
            block_of_root[r]
        })
        .collect();
    Components { blocks, component_of }
}

/// A spanning forest rooted at each component's representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    /// Forest edge indices in increasing order.
    pub edges: Vec<usize>,
    in_forest: Vec<bool>,
    /// `(edge, parent vertex)` for every non-root vertex.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    /// Vertices in breadth-first order from each root, roots first in
    /// their block order.
    order: Vec<usize>,
    components: Components,
}

impl SpanningForest {
    pub fn contains(&self, edge: usize) -> bool {
        self.in_forest[edge]
    }

    pub fn components(&self) -> &Components {
        &self.components
    }

    /// `(edge, parent vertex)`, or `None` for a root.
    pub fn parent_of(&self, v: usize) -> Option<(usize, usize)> {
        self.parent[v]
    }

    /// Every vertex appears after its parent.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }
}

/// Greedy forest: edges are taken in list order whenever they join two
/// previously separate trees.
pub fn spanning_forest(sys: &ExpSystem) -> SpanningForest {
    let mut uf = UnionFind::new(sys.num_x);
    let mut in_forest = vec![false; sys.edges.len()];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); sys.num_x];
    for (idx, e) in sys.edges.iter().enumerate() {
        if uf.union(e.tail, e.head) {
            in_forest[idx] = true;
            adj[e.tail].push((idx, e.head));
            adj[e.head].push((idx, e.tail));
        }
    }

    let components = weak_components(sys);
    let mut parent = vec![None; sys.num_x];
    let mut depth = vec![0; sys.num_x];
    let mut seen = vec![false; sys.num_x];
    let mut order = Vec::with_capacity(sys.num_x);
    for block in 0..components.len() {
        let root = components.representative(block);
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(edge, w) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((edge, u));
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    let edges = (0..sys.edges.len()).filter(|&i| in_forest[i]).collect();
    SpanningForest { edges, in_forest, parent, depth, order, components }
}

/// Sign for walking `edge` from vertex `from` to its other endpoint.
fn step_from(sys: &ExpSystem, edge: usize, from: usize) -> Step {
    if sys.edges[edge].tail == from {
        Step::forward(edge)
    } else {
        Step::backward(edge)
    }
}

/// The unique forest path between two vertices of one weak component.
pub fn tree_path(sys: &ExpSystem, forest: &SpanningForest, from: usize, to: usize) -> Result<SignedPath> {
    let comps = forest.components();
    if comps.component_of[from] != comps.component_of[to] {
        return Err(Error::VerticesDisconnected { from: from + 1, to: to + 1 });
    }
    let (mut u, mut v) = (from, to);
    let mut up = Vec::new();
    let mut down = Vec::new();
    while forest.depth[u] > forest.depth[v] {
        let (edge, p) = forest.parent[u].expect("non-root vertex has a parent");
        up.push(step_from(sys, edge, u));
        u = p;
    }
    while forest.depth[v] > forest.depth[u] {
        let (edge, p) = forest.parent[v].expect("non-root vertex has a parent");
        down.push(step_from(sys, edge, p));
        v = p;
    }
    while u != v {
        let (eu, pu) = forest.parent[u].expect("non-root vertex has a parent");
        let (ev, pv) = forest.parent[v].expect("non-root vertex has a parent");
        up.push(step_from(sys, eu, u));
        down.push(step_from(sys, ev, pv));
        u = pu;
        v = pv;
    }
    up.extend(down.into_iter().rev());
    Ok(SignedPath { from, to, steps: up })
}

/// One cycle per non-forest edge: the edge walked forward, then the forest
/// path from its head back to its tail. Loops give singleton cycles.
pub fn fundamental_cycles(sys: &ExpSystem) -> Vec<SignedCycle> {
    fundamental_cycles_in(sys, &spanning_forest(sys))
}

pub fn fundamental_cycles_in(sys: &ExpSystem, forest: &SpanningForest) -> Vec<SignedCycle> {
    sys.edges
        .iter()
        .enumerate()
        .filter(|&(idx, _)| !forest.contains(idx))
        .map(|(idx, e)| {
            let back = tree_path(sys, forest, e.head, e.tail).expect("edge endpoints share a component");
            let mut steps = Vec::with_capacity(back.steps.len() + 1);
            steps.push(Step::forward(idx));
            steps.extend(back.steps);
            SignedCycle { steps }
        })
        .collect()
}

/// `Σ sign · (coeffs(e) · z)` over the steps.
pub fn path_weight(sys: &ExpSystem, steps: &[Step], z: &[i64]) -> i128 {
    steps
        .iter()
        .map(|s| s.sign as i128 * sys.edges[s.edge].dot(z))
        .sum()
}

/// `Σ sign · coeffs(e)`: the linear form a walk contributes.
pub fn walk_row(sys: &ExpSystem, steps: &[Step]) -> Vec<i128> {
    let mut row = vec![0i128; sys.num_y];
    for s in steps {
        for (acc, &c) in row.iter_mut().zip(&sys.edges[s.edge].coeffs) {
            *acc += s.sign as i128 * c as i128;
        }
    }
    row
}

/// Endpoint reached by walking `steps` from `start`, or `None` if a step
/// does not leave from the current vertex.
pub fn walk_end(sys: &ExpSystem, start: usize, steps: &[Step]) -> Option<usize> {
    steps.iter().try_fold(start, |at, s| {
        let e = &sys.edges[s.edge];
        let (src, dst) = if s.sign > 0 { (e.tail, e.head) } else { (e.head, e.tail) };
        (src == at).then_some(dst)
    })
}
