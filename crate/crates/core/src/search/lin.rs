//! Monochromatic solutions of integer linear systems over `[1, bound]`,
//! and Rado numbers `P(A; k)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::colouring::{Colour, ColouringSpec};
use super::{Outcome, SearchReport};
use crate::rado::IntMatrix;

/// Lexicographic enumeration of `[1, bound]^n`, restricted to one colour
/// class after the first coordinate. The last variable is solved from a
/// row with a nonzero last entry when there is one.
struct LinSearch<'a> {
    rows: Vec<Vec<i128>>,
    pivot: Option<usize>,
    n: usize,
    bound: u64,
    table: &'a [Colour],
    classes: HashMap<Colour, Vec<u64>>,
}

impl<'a> LinSearch<'a> {
    fn new(a: &IntMatrix, table: &'a [Colour], bound: u64) -> Option<Self> {
        let rows: Vec<Vec<i128>> = a
            .to_i64_rows()?
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let n = a.cols();
        let pivot = rows.iter().position(|r| r[n - 1] != 0);
        let mut classes: HashMap<Colour, Vec<u64>> = HashMap::new();
        for x in 1..=bound {
            classes.entry(table[x as usize]).or_default().push(x);
        }
        Some(Self { rows, pivot, n, bound, table, classes })
    }

    /// Calls `visit` on every monochromatic solution in lexicographic
    /// order until it returns false.
    fn run(&self, visit: &mut dyn FnMut(&[u64]) -> bool) {
        let mut x = vec![0u64; self.n];
        let mut partial = vec![0i128; self.rows.len()];
        for first in 1..=self.bound {
            let colour = self.table[first as usize];
            let class = &self.classes[&colour];
            x[0] = first;
            self.add(&mut partial, 0, first as i128);
            let keep_going = if self.n == 1 {
                self.check_done(&partial, &x, visit)
            } else {
                self.descend(1, class, colour, &mut x, &mut partial, visit)
            };
            self.add(&mut partial, 0, -(first as i128));
            if !keep_going {
                return;
            }
        }
    }

    fn add(&self, partial: &mut [i128], col: usize, v: i128) {
        for (p, r) in partial.iter_mut().zip(&self.rows) {
            *p += r[col] * v;
        }
    }

    fn check_done(&self, partial: &[i128], x: &[u64], visit: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if partial.iter().all(|&p| p == 0) {
            visit(x)
        } else {
            true
        }
    }

    fn descend(
        &self,
        pos: usize,
        class: &[u64],
        colour: Colour,
        x: &mut Vec<u64>,
        partial: &mut Vec<i128>,
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        let last = pos == self.n - 1;
        if last {
            if let Some(r) = self.pivot {
                let coeff = self.rows[r][pos];
                let rest = partial[r];
                if rest % coeff != 0 {
                    return true;
                }
                let v = -rest / coeff;
                if v < 1 || v > self.bound as i128 || self.table[v as usize] != colour {
                    return true;
                }
                x[pos] = v as u64;
                self.add(partial, pos, v);
                let keep = self.check_done(partial, x, visit);
                self.add(partial, pos, -v);
                return keep;
            }
        }
        for &v in class {
            x[pos] = v;
            self.add(partial, pos, v as i128);
            let keep = if last {
                self.check_done(partial, x, visit)
            } else {
                self.descend(pos + 1, class, colour, x, partial, visit)
            };
            self.add(partial, pos, -(v as i128));
            if !keep {
                return false;
            }
        }
        true
    }
}

/// Plain lexicographic scan with big-integer arithmetic, used when the
/// matrix entries do not fit `i64`.
fn run_big(a: &IntMatrix, table: &[Colour], bound: u64, visit: &mut dyn FnMut(&[u64]) -> bool) {
    let n = a.cols();
    let mut x = vec![1u64; n];
    loop {
        let colour = table[x[0] as usize];
        if x.iter().all(|&v| table[v as usize] == colour) {
            let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            if a.apply(&xs).iter().all(Zero::is_zero) && !visit(&x) {
                return;
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = 1;
        }
    }
}

fn for_each_solution(a: &IntMatrix, col: &ColouringSpec, bound: u64, visit: &mut dyn FnMut(&[u64]) -> bool) {
    if a.cols() == 0 || bound == 0 {
        return;
    }
    let table = col.table_upto(bound);
    match LinSearch::new(a, &table, bound) {
        Some(s) => s.run(visit),
        None => run_big(a, &table, bound, visit),
    }
}

/// Exact check used to re-verify reported solutions.
pub fn is_monochromatic_solution(a: &IntMatrix, col: &ColouringSpec, x: &[u64]) -> bool {
    let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    x.len() == a.cols()
        && x.iter().all(|&v| v >= 1)
        && x.windows(2).all(|w| col.colour(w[0]) == col.colour(w[1]))
        && a.apply(&xs).iter().all(Zero::is_zero)
}

/// First monochromatic solution of `A x = 0` in `[1, bound]^n`, in
/// lexicographic order.
pub fn search_lin(a: &IntMatrix, col: &ColouringSpec, bound: u64) -> SearchReport {
    let mut found = None;
    for_each_solution(a, col, bound, &mut |x| {
        found = Some(x.to_vec());
        false
    });
    let outcome = match found {
        Some(x) => {
            assert!(is_monochromatic_solution(a, col, &x), "search_lin reported a non-solution");
            Outcome::Found { assignment: x }
        }
        None => Outcome::ExhaustedNoSolution,
    };
    SearchReport {
        variables: (1..=a.cols()).map(|i| format!("z{i}")).collect(),
        bounds: vec![(1, bound); a.cols()],
        ceiling: None,
        skipped: 0,
        outcome,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum RadoNumber {
    Exact(u64),
    /// No value up to and including this bound.
    ExceedsMax(u64),
}

/// Backtracking search for a `colours`-colouring of `[1, n]` in which no
/// solution from `by_max` is monochromatic. Colours are introduced in
/// increasing order, which removes colour-permutation symmetry.
fn avoiding_colouring_exists(n: usize, colours: usize, by_max: &[Vec<Vec<u64>>]) -> bool {
    fn go(x: usize, n: usize, k: usize, used: usize, col: &mut Vec<usize>, by_max: &[Vec<Vec<u64>>]) -> bool {
        if x > n {
            return true;
        }
        for c in 0..k.min(used + 1) {
            col[x] = c;
            let clash = by_max[x].iter().any(|s| s.iter().all(|&v| col[v as usize] == c));
            if !clash && go(x + 1, n, k, used.max(c + 1), col, by_max) {
                return true;
            }
        }
        false
    }
    let mut col = vec![usize::MAX; n + 1];
    go(1, n, colours, 0, &mut col, by_max)
}

/// `P(A; k)`: least `N` such that every `k`-colouring of `[1, N]` has a
/// monochromatic solution inside `[1, N]`.
pub fn rado_number(a: &IntMatrix, colours: usize, max_n: u64) -> RadoNumber {
    assert!(colours >= 1, "at least one colour");
    let mut by_max: Vec<Vec<Vec<u64>>> = vec![Vec::new(); max_n as usize + 1];
    for_each_solution(a, &ColouringSpec::constant(0), max_n, &mut |x| {
        let m = *x.iter().max().expect("nonempty solution");
        by_max[m as usize].push(x.to_vec());
        true
    });
    for n in 1..=max_n as usize {
        if by_max[..=n].iter().all(Vec::is_empty) {
            continue;
        }
        if !avoiding_colouring_exists(n, colours, &by_max) {
            return RadoNumber::Exact(n as u64);
        }
    }
    RadoNumber::ExceedsMax(max_n)
}
