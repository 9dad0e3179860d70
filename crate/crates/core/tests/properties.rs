mod common;

use num_bigint::BigUint;
use proptest::prelude::*;

use common::{random_system, rng};
use exprado::decide::{DecideOptions, DecisionReport, Verdict};
use exprado::rado::is_partition_regular;
use exprado::search::{
    eval_exp, rado_number, search_exp, search_lin, ColouringSpec, EdgeCheck, Outcome, RadoNumber, DEFAULT_CEILING,
};
use exprado::witness::forbidding_colouring;
use exprado::{build_linear_system, decide, normalize, Edge, ExpSystem, IntMatrix};

fn satisfies(sys: &ExpSystem, xs: &[u64], ys: &[u64]) -> bool {
    eval_exp(sys, xs, ys, None).iter().all(|&c| c == EdgeCheck::Pass)
}

fn assignments(len: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

fn arb_raw_system() -> impl Strategy<Value = ExpSystem> {
    (1usize..=3).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n, proptest::collection::vec(-1i64..=1, n), any::<bool>()), 0..=4)
            .prop_map(move |es| {
                let edges = es
                    .into_iter()
                    .map(|(t, h, c, zero)| Edge::new(t, h, if zero { vec![0; n] } else { c }))
                    .collect();
                ExpSystem::new(n, edges)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent(sys in arb_raw_system()) {
        let once = normalize(&sys);
        let twice = normalize(&once.system);
        prop_assert_eq!(&twice.system, &once.system);
        prop_assert!(once.system.edges.iter().all(|e| !e.is_identity()));
        let mut hit = vec![false; once.system.num_x];
        for &v in &once.relabel {
            hit[v] = true;
        }
        prop_assert!(hit.iter().all(|&h| h));
    }

    #[test]
    fn normalize_preserves_solutions(sys in arb_raw_system()) {
        let norm = normalize(&sys);
        let n = sys.num_x;
        for ys in assignments(sys.num_y, 2, 4) {
            for xs in assignments(n, 2, 4) {
                if satisfies(&sys, &xs, &ys) {
                    let mut induced = vec![0; norm.system.num_x];
                    for (old, &new) in norm.relabel.iter().enumerate() {
                        induced[new] = xs[old];
                    }
                    prop_assert!(satisfies(&norm.system, &induced, &ys));
                }
            }
            for xs in assignments(norm.system.num_x, 2, 4) {
                if satisfies(&norm.system, &xs, &ys) {
                    let pulled: Vec<u64> = norm.relabel.iter().map(|&v| xs[v]).collect();
                    prop_assert!(satisfies(&sys, &pulled, &ys));
                }
            }
        }
    }

    #[test]
    fn report_json_round_trips(sys in arb_raw_system()) {
        prop_assume!(sys.edges.len() <= 3);
        let opts = DecideOptions { verify_bound: Some(12), ..DecideOptions::default() };
        let report = decide(&sys, &opts).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: DecisionReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, report);
    }
}

#[test]
fn exhausted_searches_stay_exhausted_below() {
    let mut r = rng(21);
    let col = ColouringSpec::rado_nu(3).unwrap();
    let ceiling = BigUint::from(DEFAULT_CEILING);
    let mut checked = 0;
    for _ in 0..40 {
        let sys = random_system(&mut r);
        if search_exp(&sys, &col, 16, &ceiling).outcome == Outcome::ExhaustedNoSolution {
            for b in [2, 5, 9, 15] {
                assert_eq!(search_exp(&sys, &col, b, &ceiling).outcome, Outcome::ExhaustedNoSolution);
            }
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn constant_search_agrees_with_one_colour_rado_number() {
    let matrices = [
        IntMatrix::from_rows(3, &[[1, 1, -1]]).unwrap(),
        IntMatrix::from_rows(2, &[[2, -1]]).unwrap(),
        IntMatrix::from_rows(2, &[[3, -5]]).unwrap(),
        IntMatrix::from_rows(3, &[[1, 1, 1]]).unwrap(),
        IntMatrix::from_rows(3, &[[1, -2, 1], [1, 1, -3]]).unwrap(),
    ];
    for m in &matrices {
        for bound in [1, 3, 6, 10] {
            let found = search_lin(m, &ColouringSpec::constant(0), bound).outcome.is_found();
            let within = matches!(rado_number(m, 1, bound), RadoNumber::Exact(p) if p <= bound);
            assert_eq!(found, within, "{m} bound {bound}");
        }
    }
}

/// For every non-regular matrix in the corpus some small prime's Rado
/// colouring leaves `[1, 2000]` without a monochromatic solution.
#[test]
fn rado_colourings_exclude_non_regular_matrices() {
    let corpus: Vec<IntMatrix> = [
        vec![vec![2, -1]],
        vec![vec![3, -1]],
        vec![vec![3, -2]],
        vec![vec![2, 2, -1]],
        vec![vec![1, 1, -3]],
        vec![vec![2, 3, -1]],
        vec![vec![1, -1, 0], vec![0, 1, -2]],
    ]
    .iter()
    .map(|rows| IntMatrix::from_rows(rows[0].len(), rows).unwrap())
    .collect();
    for m in &corpus {
        assert!(is_partition_regular(m).unwrap().is_none(), "{m}");
        let excluded = [2, 3, 5, 7, 11, 13].iter().any(|&p| {
            let col = ColouringSpec::rado(p).unwrap();
            search_lin(m, &col, 2000).outcome == Outcome::ExhaustedNoSolution
        });
        assert!(excluded, "no listed prime excludes {m}");
    }
}

/// If `c` admits no monochromatic solution of the linear system with
/// entries up to `B`, then `c ∘ ν` admits none of the exponential system
/// with values up to `2^B`: the `ν` of the `Y` values of any solution is a
/// monochromatic linear solution.
#[test]
fn forbidding_colourings_are_sound_at_desk_scale() {
    let mut r = rng(22);
    let ceiling = BigUint::from(DEFAULT_CEILING);
    let mut checked = 0;
    for _ in 0..120 {
        let sys = random_system(&mut r);
        let lin = build_linear_system(&sys);
        for p in [2, 3, 5] {
            let c = ColouringSpec::rado(p).unwrap();
            if search_lin(&lin.matrix, &c, 6).outcome == Outcome::ExhaustedNoSolution {
                let f = forbidding_colouring(&c);
                let e = search_exp(&sys, &f, 40, &ceiling);
                assert_eq!(e.outcome, Outcome::ExhaustedNoSolution, "{sys:?} under {f:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 20, "{checked}");
}

#[test]
fn decide_verdict_matches_columns_property() {
    let mut r = rng(23);
    for _ in 0..60 {
        let sys = random_system(&mut r);
        let report = decide(&sys, &DecideOptions { verify_bound: Some(10), ..DecideOptions::default() }).unwrap();
        let pr = is_partition_regular(&build_linear_system(&sys).matrix).unwrap().is_some();
        assert_eq!(report.verdict == Verdict::Pr, pr);
    }
}
