//! Seeded corpora shared by the integration tests.

#![allow(dead_code)]

use exprado::{normalize, Edge, ExpSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 20_261_015;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// `n <= 4`, between 1 and 5 equations, coefficients in `[-2, 2]`,
/// normalized.
pub fn random_system(rng: &mut ChaCha8Rng) -> ExpSystem {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=5);
    let edges = (0..m)
        .map(|_| {
            let coeffs = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            Edge::new(rng.gen_range(0..n), rng.gen_range(0..n), coeffs)
        })
        .collect();
    normalize(&ExpSystem::new(n, edges)).system
}

/// Multigraph on at most 5 vertices with at most 7 edges, loops and
/// parallel edges allowed.
pub fn random_multigraph(rng: &mut ChaCha8Rng) -> (usize, Vec<(usize, usize)>) {
    let v = rng.gen_range(1..=5);
    let e = rng.gen_range(0..=7);
    (v, (0..e).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v))).collect())
}

/// Edge `e` carries the indicator vector of `e`, so a walk's row is its
/// signed edge incidence vector.
pub fn indicator_system(v: usize, edges: &[(usize, usize)]) -> ExpSystem {
    let m = edges.len();
    let edges = edges
        .iter()
        .enumerate()
        .map(|(i, &(t, h))| {
            let mut c = vec![0; m];
            c[i] = 1;
            Edge::new(t, h, c)
        })
        .collect();
    ExpSystem::with_sorts(v, m, edges)
}

/// Every simple cycle as `(edge, sign)` steps, found by depth-first search
/// from its smallest vertex. Each cycle of length at least 2 appears once
/// per direction.
pub fn simple_cycles(v: usize, edges: &[(usize, usize)]) -> Vec<Vec<(usize, i8)>> {
    fn dfs(
        start: usize,
        at: usize,
        edges: &[(usize, usize)],
        on_path: &mut Vec<bool>,
        used: &mut Vec<bool>,
        path: &mut Vec<(usize, i8)>,
        out: &mut Vec<Vec<(usize, i8)>>,
    ) {
        for (e, &(t, h)) in edges.iter().enumerate() {
            if t == h || used[e] {
                continue;
            }
            let (next, sign) = if t == at {
                (h, 1)
            } else if h == at {
                (t, -1)
            } else {
                continue;
            };
            if next == start {
                let mut cycle = path.clone();
                cycle.push((e, sign));
                out.push(cycle);
            } else if next > start && !on_path[next] {
                used[e] = true;
                on_path[next] = true;
                path.push((e, sign));
                dfs(start, next, edges, on_path, used, path, out);
                path.pop();
                on_path[next] = false;
                used[e] = false;
            }
        }
    }
    let mut out: Vec<Vec<(usize, i8)>> = edges
        .iter()
        .enumerate()
        .filter(|(_, &(t, h))| t == h)
        .map(|(e, _)| vec![(e, 1)])
        .collect();
    for s in 0..v {
        let mut on_path = vec![false; v];
        on_path[s] = true;
        dfs(s, s, edges, &mut on_path, &mut vec![false; edges.len()], &mut Vec::new(), &mut out);
    }
    out
}

/// Nonempty subset of the entries summing to zero.
pub fn subset_sum_zero(xs: &[i64]) -> bool {
    (1u32..1 << xs.len()).any(|mask| {
        xs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).sum::<i64>() == 0
    })
}
