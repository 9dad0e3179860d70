//! Bounded evaluation of exponential systems and exhaustive search for
//! monochromatic solutions with every variable in `[2, var_bound]`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::colouring::{Colour, ColouringSpec};
use super::{Outcome, SearchReport};
use crate::eqsys::{Edge, ExpSystem};
use crate::graphs::spanning_forest;

pub const DEFAULT_CEILING: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeCheck {
    Pass,
    Fail,
    CeilingExceeded,
}

fn within(v: &BigUint, ceiling: Option<&BigUint>) -> bool {
    ceiling.is_none_or(|c| v <= c)
}

/// `(num, den)` with `Π Y_k^C_k = num / den`, or `None` past the ceiling.
fn exponent_parts(edge: &Edge, ys: &[u64], ceiling: Option<&BigUint>) -> Option<(BigUint, BigUint)> {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (&c, &y) in edge.coeffs.iter().zip(ys) {
        if c == 0 {
            continue;
        }
        let target = if c > 0 { &mut num } else { &mut den };
        for _ in 0..c.unsigned_abs() {
            *target *= y;
            if !within(target, ceiling) {
                return None;
            }
        }
    }
    Some((num, den))
}

fn capped_pow(base: u64, exp: &BigUint, ceiling: Option<&BigUint>) -> Option<BigUint> {
    let e = exp.to_u32()?;
    if let Some(c) = ceiling {
        // base^e >= 2^((bits(base) - 1) * e)
        let floor_bits = (64 - base.leading_zeros() as u64 - 1) * e as u64;
        if floor_bits > c.bits() {
            return None;
        }
    }
    let v = BigUint::from(base).pow(e);
    within(&v, ceiling).then_some(v)
}

/// Direct numeric check of every equation. With exponent `num / den`, the
/// equation `X_i^(num/den) = X_j` is decided as `X_i^num = X_j^den`. Any
/// intermediate above `ceiling` makes that edge `CeilingExceeded`.
pub fn eval_exp(sys: &ExpSystem, xs: &[u64], ys: &[u64], ceiling: Option<&BigUint>) -> Vec<EdgeCheck> {
    sys.edges
        .iter()
        .map(|e| {
            let Some((num, den)) = exponent_parts(e, ys, ceiling) else {
                return EdgeCheck::CeilingExceeded;
            };
            let lhs = capped_pow(xs[e.tail], &num, ceiling);
            let rhs = capped_pow(xs[e.head], &den, ceiling);
            match (lhs, rhs) {
                (Some(l), Some(r)) if l == r => EdgeCheck::Pass,
                (Some(_), Some(_)) => EdgeCheck::Fail,
                _ => EdgeCheck::CeilingExceeded,
            }
        })
        .collect()
}

/// Re-verification used for every reported solution.
pub fn is_monochromatic_exp_solution(sys: &ExpSystem, col: &ColouringSpec, xs: &[u64], ys: &[u64]) -> bool {
    let values: Vec<u64> = xs.iter().chain(ys).copied().collect();
    xs.len() == sys.num_x
        && ys.len() == sys.num_y
        && values.iter().all(|&v| v >= 2)
        && values.windows(2).all(|w| col.colour(w[0]) == col.colour(w[1]))
        && eval_exp(sys, xs, ys, None).iter().all(|&c| c == EdgeCheck::Pass)
}

/// `x^(p/q)` when it is an integer in `[2, bound]`; `gcd(p, q) = 1`.
fn raise(x: u64, p: u64, q: u64, bound: u64) -> Option<u64> {
    let w = if q == 1 {
        x
    } else {
        let q = u32::try_from(q).ok().filter(|&q| q < 64)?;
        let w = x.nth_root(q);
        (w.checked_pow(q)? == x).then_some(w)?
    };
    let v = w.checked_pow(u32::try_from(p).ok()?)?;
    (2..=bound).contains(&v).then_some(v)
}

struct Component {
    root: usize,
    /// `(vertex, edge, parent, forward)` in breadth-first order; `forward`
    /// when the parent is the edge's tail.
    tree: Vec<(usize, usize, usize, bool)>,
    /// Non-forest edges inside the component.
    closing: Vec<usize>,
}

struct ExpSearch<'a> {
    sys: &'a ExpSystem,
    table: Vec<Colour>,
    bound: u64,
    exp_cap: u64,
    components: Vec<Component>,
    /// Y variables with a nonzero coefficient somewhere.
    active_y: Vec<usize>,
}

#[derive(Default)]
struct Partial {
    best: Option<Vec<u64>>,
    skipped: u64,
}

impl Partial {
    fn offer(&mut self, cand: Vec<u64>) {
        if self.best.as_ref().is_none_or(|b| cand < *b) {
            self.best = Some(cand);
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.skipped += other.skipped;
        if let Some(b) = other.best {
            self.offer(b);
        }
        self
    }
}

impl<'a> ExpSearch<'a> {
    fn new(sys: &'a ExpSystem, col: &ColouringSpec, bound: u64, ceiling: &BigUint) -> Self {
        let forest = spanning_forest(sys);
        let comps = forest.components();
        let mut components: Vec<Component> = comps
            .blocks
            .iter()
            .map(|b| Component { root: b[0], tree: Vec::new(), closing: Vec::new() })
            .collect();
        for &v in forest.bfs_order() {
            if let Some((edge, parent)) = forest.parent_of(v) {
                let forward = sys.edges[edge].tail == parent;
                components[comps.component_of[v]].tree.push((v, edge, parent, forward));
            }
        }
        for (idx, e) in sys.edges.iter().enumerate() {
            if !forest.contains(idx) {
                components[comps.component_of[e.tail]].closing.push(idx);
            }
        }
        let active_y = (0..sys.num_y)
            .filter(|&k| sys.edges.iter().any(|e| e.coeffs[k] != 0))
            .collect();
        Self {
            sys,
            table: col.table_upto(bound),
            bound,
            exp_cap: ceiling.to_u64().unwrap_or(u64::MAX),
            components,
            active_y,
        }
    }

    /// Reduced `(p, q)` per edge, or `None` past the ceiling.
    fn exponents(&self, ys: &[u64]) -> Option<Vec<(u64, u64)>> {
        let cap = self.exp_cap;
        let mul = |acc: u64, y: u64, times: u64| -> Option<u64> {
            (0..times).try_fold(acc, |a, _| a.checked_mul(y).filter(|&v| v <= cap))
        };
        self.sys
            .edges
            .iter()
            .map(|e| {
                let (mut num, mut den) = (1u64, 1u64);
                for (&c, &y) in e.coeffs.iter().zip(ys) {
                    if c > 0 {
                        num = mul(num, y, c as u64)?;
                    } else if c < 0 {
                        den = mul(den, y, c.unsigned_abs())?;
                    }
                }
                let g = num.gcd(&den);
                Some((num / g, den / g))
            })
            .collect()
    }

    /// Smallest feasible root value for each component, or `None`.
    fn min_xs(&self, exps: &[(u64, u64)], class: &[u64], colour: Colour) -> Option<Vec<u64>> {
        // A loop X^(p/q) = X with X >= 2 needs p = q whatever X is.
        if self.sys.edges.iter().zip(exps).any(|(e, &(p, q))| e.is_loop() && p != q) {
            return None;
        }
        let mut xs = vec![0u64; self.sys.num_x];
        for comp in &self.components {
            let ok = class.iter().any(|&r| {
                xs[comp.root] = r;
                for &(v, edge, parent, forward) in &comp.tree {
                    let (p, q) = exps[edge];
                    let next = if forward { raise(xs[parent], p, q, self.bound) } else { raise(xs[parent], q, p, self.bound) };
                    match next {
                        Some(val) if self.table[val as usize] == colour => xs[v] = val,
                        _ => return false,
                    }
                }
                comp.closing.iter().all(|&edge| {
                    let e = &self.sys.edges[edge];
                    let (p, q) = exps[edge];
                    raise(xs[e.tail], p, q, self.bound) == Some(xs[e.head])
                })
            });
            if !ok {
                return None;
            }
        }
        Some(xs)
    }

    /// Enumerates the active Y coordinates after the first in lexicographic
    /// order; inactive ones sit at the class minimum.
    fn scan(&self, colour: Colour, class: &[u64], first: u64) -> Partial {
        let mut out = Partial::default();
        let mut ys = vec![class[0]; self.sys.num_y];
        let active = &self.active_y;
        if let Some(&k) = active.first() {
            ys[k] = first;
        }
        let rest = active.len().saturating_sub(1);
        let mut idx = vec![0usize; rest];
        loop {
            for (slot, &k) in active.iter().skip(1).enumerate() {
                ys[k] = class[idx[slot]];
            }
            match self.exponents(&ys) {
                None => out.skipped += 1,
                Some(exps) => {
                    if let Some(xs) = self.min_xs(&exps, class, colour) {
                        out.offer(xs.into_iter().chain(ys.iter().copied()).collect());
                    }
                }
            }
            let mut i = rest;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < class.len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    fn run(&self) -> Partial {
        let mut classes: BTreeMap<Colour, Vec<u64>> = BTreeMap::new();
        for x in 2..=self.bound {
            classes.entry(self.table[x as usize]).or_default().push(x);
        }
        classes
            .iter()
            .flat_map(|(&colour, class)| {
                let firsts: Vec<u64> = if self.active_y.is_empty() { vec![class[0]] } else { class.clone() };
                firsts.into_iter().map(move |f| (colour, class, f))
            })
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(colour, class, first)| self.scan(colour, class, first))
            .reduce(Partial::default, Partial::merge)
    }
}

/// First monochromatic solution in lexicographic order of
/// `(X_1..X_n, Y_1..Y_n)` with all values in `[2, var_bound]`.
///
/// For a fixed `Y` every `X` in a weak component is a positive rational
/// power of the component root, so the lexicographically smallest `X` is
/// the smallest feasible root per component; the search enumerates `Y`
/// within each colour class and derives `X` along the spanning forest.
/// `Y` assignments whose exponents exceed `ceiling` are counted in
/// `skipped`.
pub fn search_exp(sys: &ExpSystem, col: &ColouringSpec, var_bound: u64, ceiling: &BigUint) -> SearchReport {
    let variables: Vec<String> = (1..=sys.num_x)
        .map(|i| format!("X{i}"))
        .chain((1..=sys.num_y).map(|i| format!("Y{i}")))
        .collect();
    let mut report = SearchReport {
        bounds: vec![(2, var_bound); variables.len()],
        variables,
        ceiling: Some(ceiling.to_string()),
        skipped: 0,
        outcome: Outcome::ExhaustedNoSolution,
    };
    if var_bound < 2 || sys.num_y == 0 {
        return report;
    }
    let result = ExpSearch::new(sys, col, var_bound, ceiling).run();
    report.skipped = result.skipped;
    if let Some(best) = result.best {
        let (xs, ys) = best.split_at(sys.num_x);
        assert!(is_monochromatic_exp_solution(sys, col, xs, ys), "search_exp reported a non-solution");
        report.outcome = Outcome::Found { assignment: best };
    }
    report
}
