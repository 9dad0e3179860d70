//! Certificates in both directions.
//!
//! For a solution `z` of the linear system, put `y_k = b^(z_k)` and
//! `x_i = a^(b^(k_i))` where `k_i` is the signed path sum of `coeffs · z`
//! from the component root. Then `x_i ^ (Π y_k^C_k) = a^(b^(k_i + C·z))`,
//! so each equation holds exactly when `k_j - k_i = C·z`. Towers are never
//! built; everything is checked on `(k, z)`.
//!
//! In the other direction a colouring `c` with no monochromatic solution
//! of the linear system yields `c ∘ ν` on the exponential side.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::eqsys::ExpSystem;
use crate::error::{Error, Result};
use crate::graphs::{fundamental_cycles, path_weight, spanning_forest};
use crate::rado::{sign_normalized, IntMatrix};
use crate::search::{search_lin, ColouringSpec, Outcome};

/// Number of prime factors of `x`, counted with multiplicity.
pub fn nu(mut x: u64) -> Result<u64> {
    if x <= 1 {
        return Err(Error::Domain(format!("nu is undefined at {x}")));
    }
    let mut count = 0;
    for p in [2u64, 3] {
        while x.is_multiple_of(p) {
            x /= p;
            count += 1;
        }
    }
    let mut p = 5u64;
    while p.saturating_mul(p) <= x {
        for q in [p, p + 2] {
            while x.is_multiple_of(q) {
                x /= q;
                count += 1;
            }
        }
        p += 6;
    }
    if x > 1 {
        count += 1;
    }
    Ok(count)
}

/// [`nu`] for values past `u64`, by trial division until the cofactor
/// fits.
pub fn nu_big(x: &BigUint) -> Result<u64> {
    fn rem(r: &BigUint, p: u32) -> u32 {
        let digits: Vec<u32> = r.iter_u32_digits().collect();
        digits.iter().rev().fold(0u64, |acc, &d| ((acc << 32) | d as u64) % p as u64) as u32
    }
    fn divide_out(r: &mut BigUint, p: u32) -> u64 {
        let mut c = 0;
        while rem(r, p) == 0 {
            *r /= p;
            c += 1;
        }
        c
    }
    if let Some(small) = x.to_u64() {
        return nu(small);
    }
    let mut r = x.clone();
    let mut count = divide_out(&mut r, 2) + divide_out(&mut r, 3);
    // While `r` needs more than 64 bits, every candidate below 2^32 has
    // its square below `r`, so trial division must continue.
    let mut p = 5u32;
    while r.to_u64().is_none() {
        let Some(q) = p.checked_add(2) else {
            return Err(Error::Domain(format!("{x} has no prime factor below 2^32 to split off")));
        };
        count += divide_out(&mut r, p) + divide_out(&mut r, q);
        p = q.saturating_add(4);
    }
    let rest = r.to_u64().expect("checked by the loop condition");
    Ok(count + if rest > 1 { nu(rest)? } else { 0 })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TowerValue {
    Plain { value: u64 },
    /// `base^exp`, kept symbolic when it does not fit `u64`.
    Power { base: u64, exp: u64 },
    /// `a^(b^k)`.
    Tower { a: u64, b: u64, k: u64 },
}

impl TowerValue {
    /// `base^exp` as `Plain` when it fits, else `Power`.
    pub fn power(base: u64, exp: u64) -> Self {
        match u32::try_from(exp).ok().and_then(|e| base.checked_pow(e)) {
            Some(value) => Self::Plain { value },
            None => Self::Power { base, exp },
        }
    }

    /// The integer denoted, unless it exceeds `ceiling`.
    pub fn evaluate(&self, ceiling: &BigUint) -> Option<BigUint> {
        let capped = |base: u64, exp: &BigUint| -> Option<BigUint> {
            let e = exp.to_u32()?;
            if base >= 2 && (e as u64) > ceiling.bits() {
                return None;
            }
            let v = BigUint::from(base).pow(e);
            (&v <= ceiling).then_some(v)
        };
        match *self {
            Self::Plain { value } => {
                let v = BigUint::from(value);
                (&v <= ceiling).then_some(v)
            }
            Self::Power { base, exp } => capped(base, &BigUint::from(exp)),
            Self::Tower { a, b, k } => capped(a, &capped(b, &BigUint::from(k))?),
        }
    }
}

impl fmt::Display for TowerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Plain { value } => write!(f, "{value}"),
            Self::Power { base, exp } => write!(f, "{base}^{exp}"),
            Self::Tower { a, b, k } => write!(f, "{a}^({b}^{k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: u64,
    pub b: u64,
    pub z: Vec<u64>,
    pub k: Vec<u64>,
    pub xs: Vec<TowerValue>,
    pub ys: Vec<TowerValue>,
    /// Some raw path sum was negative and its component was shifted.
    pub shifted: bool,
}

/// Lexicographically smallest `z` in `[1, bound]^n` with `A z = 0`.
pub fn find_positive_solution(a: &IntMatrix, bound: u64) -> Option<Vec<u64>> {
    match search_lin(a, &ColouringSpec::constant(0), bound).outcome {
        Outcome::Found { assignment } => Some(assignment),
        Outcome::ExhaustedNoSolution => None,
    }
}

/// Retries [`find_positive_solution`] with bounds `start, 2·start, ...`
/// up to `cap`. Returns the solution and the bound that produced it.
pub fn find_positive_solution_doubling(a: &IntMatrix, start: u64, cap: u64) -> Option<(Vec<u64>, u64)> {
    let mut bound = start.max(1);
    loop {
        let b = bound.min(cap);
        if let Some(z) = find_positive_solution(a, b) {
            return Some((z, b));
        }
        if b >= cap {
            return None;
        }
        bound = bound.saturating_mul(2);
    }
}

/// `W(z) = (Σ |C_k(i,j)|) · Σ z_i`.
pub fn weight(sys: &ExpSystem, z: &[u64]) -> u128 {
    sys.total_abs_coeff() * z.iter().map(|&v| v as u128).sum::<u128>()
}

fn check_z(sys: &ExpSystem, z: &[u64]) -> Result<Vec<i64>> {
    if z.len() != sys.num_y {
        return Err(Error::DimensionMismatch { expected: sys.num_y, found: z.len() });
    }
    z.iter()
        .map(|&v| match i64::try_from(v) {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(Error::Domain(format!("z entries must lie in [1, {}], got {v}", i64::MAX))),
        })
        .collect()
}

/// Path sums from each component root along the spanning forest, before
/// any shift. Fails if `z` misses a fundamental cycle row.
fn raw_k(sys: &ExpSystem, z: &[i64]) -> Result<Vec<i128>> {
    for (row, cycle) in fundamental_cycles(sys).iter().enumerate() {
        if path_weight(sys, &cycle.steps, z) != 0 {
            return Err(Error::NotASolution { row });
        }
    }
    let forest = spanning_forest(sys);
    let mut k = vec![0i128; sys.num_x];
    for &v in forest.bfs_order() {
        if let Some((edge, parent)) = forest.parent_of(v) {
            let e = &sys.edges[edge];
            let w = e.dot(z);
            k[v] = if e.tail == parent { k[parent] + w } else { k[parent] - w };
        }
    }
    Ok(k)
}

/// Path sums shifted so each weak component has minimum 0. The flag
/// reports whether any shift was needed.
fn shifted_k(sys: &ExpSystem, z: &[u64]) -> Result<(Vec<u64>, bool)> {
    let zi = check_z(sys, z)?;
    let mut k = raw_k(sys, &zi)?;
    let comps = spanning_forest(sys).components().clone();
    let mut shifted = false;
    for block in &comps.blocks {
        let min = block.iter().map(|&v| k[v]).min().unwrap_or(0);
        if min < 0 {
            shifted = true;
            for &v in block {
                k[v] -= min;
            }
        }
    }
    let k = k
        .into_iter()
        .map(|v| u64::try_from(v).map_err(|_| Error::Domain(format!("path sum {v} does not fit u64"))))
        .collect::<Result<_>>()?;
    Ok((k, shifted))
}

/// `k_i` with `k_j - k_i = coeffs(e)·z` on every edge and minimum 0 in
/// each weak component.
pub fn compute_k(sys: &ExpSystem, z: &[u64]) -> Result<Vec<u64>> {
    shifted_k(sys, z).map(|(k, _)| k)
}

pub fn lift(sys: &ExpSystem, z: &[u64], a: u64, b: u64) -> Result<Witness> {
    if a < 2 || b < 2 {
        return Err(Error::Domain(format!("tower bases must be at least 2, got a={a}, b={b}")));
    }
    let (k, shifted) = shifted_k(sys, z)?;
    let w = Witness {
        a,
        b,
        z: z.to_vec(),
        xs: k.iter().map(|&k| TowerValue::Tower { a, b, k }).collect(),
        ys: z.iter().map(|&e| TowerValue::power(b, e)).collect(),
        k,
        shifted,
    };
    assert!(verify_witness(sys, &w), "lifted witness violates an edge identity");
    Ok(w)
}

/// Checks every edge identity `k_i + coeffs(e)·z = k_j` and that `xs`,
/// `ys` are the towers and powers the data describes.
pub fn verify_witness(sys: &ExpSystem, w: &Witness) -> bool {
    let Ok(z) = check_z(sys, &w.z) else {
        return false;
    };
    let shape_ok = w.a >= 2
        && w.b >= 2
        && w.k.len() == sys.num_x
        && w.xs.len() == sys.num_x
        && w.ys.len() == sys.num_y;
    if !shape_ok {
        return false;
    }
    let xs_ok = w
        .xs
        .iter()
        .zip(&w.k)
        .all(|(x, &k)| *x == TowerValue::Tower { a: w.a, b: w.b, k });
    let ys_ok = w.ys.iter().zip(&w.z).all(|(y, &e)| match *y {
        TowerValue::Plain { value } => {
            u32::try_from(e).ok().and_then(|e| w.b.checked_pow(e)) == Some(value)
        }
        TowerValue::Power { base, exp } => base == w.b && exp == e,
        TowerValue::Tower { .. } => false,
    });
    xs_ok
        && ys_ok
        && sys.edges.iter().all(|e| {
            e.tail < sys.num_x
                && e.head < sys.num_x
                && w.k[e.tail] as i128 + e.dot(&z) == w.k[e.head] as i128
        })
}

/// `c ∘ ν` on the exponential side; constant colourings stay constant.
pub fn forbidding_colouring(c: &ColouringSpec) -> ColouringSpec {
    match c {
        ColouringSpec::RadoP { p } => ColouringSpec::RadoPNu { p: *p },
        ColouringSpec::Constant { colour } => ColouringSpec::Constant { colour: *colour },
        other => ColouringSpec::compose_nu(other.clone()),
    }
}

/// `a, b^(x_1), ..., b^(x_n), a^(b^1), ..., a^(b^W)`.
pub fn expand_pattern(xs: &[u64], w: u64, a: u64, b: u64) -> Vec<TowerValue> {
    std::iter::once(TowerValue::Plain { value: a })
        .chain(xs.iter().map(|&x| TowerValue::power(b, x)))
        .chain((1..=w).map(|k| TowerValue::Tower { a, b, k }))
        .collect()
}

/// Applying `ν ∘ ν` to both sides of edge `(i, j)` gives
/// `coeffs · ν(Y) + ν²(X_i) - ν²(X_j) = 0`. Summing these around each
/// fundamental cycle with its orientation signs cancels the `ν²` terms and
/// leaves the cycle row of the linear system.
pub fn nu_squared_reduce(sys: &ExpSystem) -> Result<IntMatrix> {
    if let Some(edge) = sys.edges.iter().position(|e| e.is_identity()) {
        return Err(Error::NotNormalized { edge: edge + 1 });
    }
    let (ny, nx) = (sys.num_y, sys.num_x);
    let augmented: Vec<Vec<i128>> = sys
        .edges
        .iter()
        .map(|e| {
            let mut row = vec![0i128; ny + nx];
            for (r, &c) in row.iter_mut().zip(&e.coeffs) {
                *r = c as i128;
            }
            row[ny + e.tail] += 1;
            row[ny + e.head] -= 1;
            row
        })
        .collect();
    let rows = fundamental_cycles(sys)
        .iter()
        .map(|cycle| {
            let mut acc = vec![0i128; ny + nx];
            for s in &cycle.steps {
                for (a, &v) in acc.iter_mut().zip(&augmented[s.edge]) {
                    *a += s.sign as i128 * v;
                }
            }
            assert!(acc[ny..].iter().all(|&v| v == 0), "ν² terms did not cancel around a cycle");
            let y: Vec<BigInt> = acc[..ny].iter().map(|&v| BigInt::from(v)).collect();
            sign_normalized(&y)
        })
        .collect();
    IntMatrix::new(ny, rows)
}

/// Convenience for callers that need a tower materialized for direct
/// evaluation; `None` past `ceiling`.
pub fn materialize(values: &[TowerValue], ceiling: &BigUint) -> Option<Vec<u64>> {
    values
        .iter()
        .map(|v| v.evaluate(ceiling).and_then(|b| b.to_u64()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqsys::Edge;
    use crate::linearize::build_linear_system;
    use proptest::prelude::*;

    fn naive_nu(mut x: u64) -> u64 {
        let mut c = 0;
        let mut p = 2;
        while x > 1 {
            while x.is_multiple_of(p) {
                x /= p;
                c += 1;
            }
            p += 1;
        }
        c
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(72).unwrap(), 5);
        assert_eq!(nu(8).unwrap(), 3);
        for q in [2, 3, 5, 7, 97, 1_000_003] {
            assert_eq!(nu(q).unwrap(), 1);
        }
        assert!(nu(1).is_err() && nu(0).is_err());
        for x in 2..3000 {
            assert_eq!(nu(x).unwrap(), naive_nu(x), "{x}");
        }
        assert_eq!(nu_big(&(BigUint::from(999_983u64).pow(5) * 12u32)).unwrap(), 8);
        assert_eq!(nu_big(&BigUint::from(72u32)).unwrap(), 5);
    }

    #[test]
    fn positive_solutions() {
        let a = IntMatrix::from_rows(3, &[[1, 1, -1]]).unwrap();
        assert_eq!(find_positive_solution(&a, 4), Some(vec![1, 1, 2]));
        assert_eq!(find_positive_solution(&IntMatrix::empty(2), 1), Some(vec![1, 1]));
        let d = IntMatrix::from_rows(2, &[[2, -1]]).unwrap();
        assert_eq!(find_positive_solution(&d, 10), Some(vec![1, 2]));
        let hard = IntMatrix::from_rows(2, &[[7, -5]]).unwrap();
        assert_eq!(find_positive_solution(&hard, 4), None);
        assert_eq!(find_positive_solution_doubling(&hard, 1, 64), Some((vec![5, 7], 8)));
    }

    #[test]
    fn weights() {
        let one = ExpSystem::new(2, vec![Edge::new(0, 1, vec![1, 1])]);
        assert_eq!(weight(&one, &[1, 2]), 6);
        let zero = ExpSystem::new(2, vec![Edge::new(0, 1, vec![0, 0])]);
        assert_eq!(weight(&zero, &[1, 2]), 0);
        let two = ExpSystem::new(2, vec![Edge::new(0, 1, vec![2, 0]), Edge::new(0, 1, vec![0, 1])]);
        assert_eq!(weight(&two, &[1, 1]), 6);
    }

    #[test]
    fn k_examples() {
        let s = ExpSystem::new(2, vec![Edge::new(0, 1, vec![1, 1])]);
        assert_eq!(compute_k(&s, &[1, 2]).unwrap(), vec![0, 3]);
        let rev = ExpSystem::new(2, vec![Edge::new(1, 0, vec![1, 0])]);
        assert_eq!(compute_k(&rev, &[3, 1]).unwrap(), vec![3, 0]);
        let par = ExpSystem::new(2, vec![Edge::new(0, 1, vec![2, 0]), Edge::new(0, 1, vec![0, 1])]);
        assert_eq!(compute_k(&par, &[1, 1]), Err(Error::NotASolution { row: 0 }));
        assert_eq!(compute_k(&par, &[1, 2]).unwrap(), vec![0, 2]);
    }

    #[test]
    fn lift_example() {
        let s = ExpSystem::new(2, vec![Edge::new(0, 1, vec![1, 1])]);
        let w = lift(&s, &[1, 2], 2, 3).unwrap();
        assert_eq!(w.ys, vec![TowerValue::Plain { value: 3 }, TowerValue::Plain { value: 9 }]);
        assert_eq!(w.k, vec![0, 3]);
        assert!(verify_witness(&s, &w));
        let xs = materialize(&w.xs, &BigUint::from(u64::MAX)).unwrap();
        assert_eq!(xs, vec![2, 1 << 27]);
        assert!(!w.shifted);

        let mut bad = w.clone();
        bad.k = vec![0, 2];
        bad.xs[1] = TowerValue::Tower { a: 2, b: 3, k: 2 };
        assert!(!verify_witness(&s, &bad));

        let empty = ExpSystem::new(1, vec![]);
        assert!(verify_witness(&empty, &lift(&empty, &[1], 2, 2).unwrap()));
    }

    #[test]
    fn lift_shifts_negative_sums() {
        let s = ExpSystem::new(2, vec![Edge::new(0, 1, vec![-1, 0])]);
        let w = lift(&s, &[2, 1], 2, 2).unwrap();
        assert_eq!(w.k, vec![2, 0]);
        assert!(w.shifted);
    }

    #[test]
    fn big_exponents_stay_symbolic() {
        assert_eq!(TowerValue::power(2, 70), TowerValue::Power { base: 2, exp: 70 });
        assert_eq!(TowerValue::power(2, 3), TowerValue::Plain { value: 8 });
        assert_eq!(TowerValue::Tower { a: 2, b: 3, k: 2 }.to_string(), "2^(3^2)");
        assert_eq!(TowerValue::Tower { a: 2, b: 3, k: 0 }.evaluate(&BigUint::from(10u32)), Some(BigUint::from(2u32)));
        assert_eq!(TowerValue::Tower { a: 2, b: 2, k: 10 }.evaluate(&BigUint::from(1u64 << 40)), None);
    }

    #[test]
    fn forbidding_examples() {
        let f = forbidding_colouring(&ColouringSpec::rado(3).unwrap());
        assert_eq!(f, ColouringSpec::RadoPNu { p: 3 });
        assert_eq!(f.colour(64), 2);
        assert_eq!(f.colour(36), 1);
        assert_eq!(forbidding_colouring(&ColouringSpec::constant(4)), ColouringSpec::constant(4));
        let m = forbidding_colouring(&ColouringSpec::modulo(2).unwrap());
        assert_eq!(m.colour(8), 1);
    }

    #[test]
    fn patterns() {
        let p = expand_pattern(&[1, 2], 2, 2, 3);
        let vals = materialize(&p, &BigUint::from(u64::MAX)).unwrap();
        assert_eq!(vals, vec![2, 3, 9, 8, 512]);
        let sisto = materialize(&expand_pattern(&[1], 1, 5, 7), &BigUint::from(u64::MAX)).unwrap();
        assert_eq!(sisto, vec![5, 7, 5u64.pow(7)]);
        assert_eq!(expand_pattern(&[], 0, 2, 2), vec![TowerValue::Plain { value: 2 }]);
    }

    #[test]
    fn reduction_examples() {
        let par = ExpSystem::new(2, vec![Edge::new(0, 1, vec![2, 0]), Edge::new(0, 1, vec![0, 1])]);
        assert_eq!(nu_squared_reduce(&par).unwrap(), IntMatrix::from_rows(2, &[[2, -1]]).unwrap());
        let forest = ExpSystem::new(2, vec![Edge::new(0, 1, vec![1, 0])]);
        assert_eq!(nu_squared_reduce(&forest).unwrap().nrows(), 0);
        let tri = ExpSystem::new(
            3,
            vec![Edge::new(0, 1, vec![1, 0, 0]), Edge::new(1, 2, vec![0, 1, 0]), Edge::new(0, 2, vec![0, 0, 1])],
        );
        assert_eq!(nu_squared_reduce(&tri).unwrap(), IntMatrix::from_rows(3, &[[1, 1, -1]]).unwrap());
        let ident = ExpSystem::new(2, vec![Edge::new(0, 1, vec![0, 0])]);
        assert_eq!(nu_squared_reduce(&ident), Err(Error::NotNormalized { edge: 1 }));
    }

    fn arb_system() -> impl Strategy<Value = ExpSystem> {
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, proptest::collection::vec(-2i64..=2, n)), 0..=5)
                .prop_map(move |es| {
                    let edges = es.into_iter().map(|(t, h, c)| Edge::new(t, h, c)).collect();
                    crate::eqsys::normalize(&ExpSystem::new(n, edges)).system
                })
        })
    }

    proptest! {
        #[test]
        fn nu_is_completely_additive(x in 2u64..1_000_000, y in 2u64..1_000_000, m in 1u32..=3) {
            prop_assert_eq!(nu(x * y).unwrap(), nu(x).unwrap() + nu(y).unwrap());
            prop_assert_eq!(nu(x.pow(m)).unwrap(), m as u64 * nu(x).unwrap());
        }

        #[test]
        fn lift_is_sound_and_bounded(sys in arb_system(), a in 2u64..=3, b in 2u64..=3) {
            let lin = build_linear_system(&sys);
            if let Some(z) = find_positive_solution(&lin.matrix, 6) {
                let w = lift(&sys, &z, a, b).unwrap();
                prop_assert!(verify_witness(&sys, &w));
                let cap = 2 * weight(&sys, &z);
                prop_assert!(w.k.iter().all(|&k| (k as u128) <= cap));
            }
        }

        #[test]
        fn reduction_matches_linearization(sys in arb_system()) {
            prop_assert_eq!(nu_squared_reduce(&sys).unwrap(), build_linear_system(&sys).matrix);
        }
    }
}
