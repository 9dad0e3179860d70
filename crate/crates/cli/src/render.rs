//! Text rendering for every subcommand.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use exprado::decide::{Certificate, DecisionReport, Verdict};
use exprado::search::{eval_exp, Colour, EdgeCheck, Outcome, RadoNumber, SearchReport, SENTINEL};
use exprado::witness::{expand_pattern, materialize, verify_witness, weight, Witness};
use exprado::ExpSystem;

fn tuple<T: ToString>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn set(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn decision(r: &DecisionReport) -> String {
    let mut out = String::new();
    let verdict = match r.verdict {
        Verdict::Pr => "partition regular",
        Verdict::NotPr => "not partition regular",
    };
    let _ = writeln!(out, "verdict: {verdict}");
    let _ = writeln!(out, "digest: {}", r.input_digest);
    let _ = writeln!(out, "normalized: {} variables, {} equations", r.system.n, r.system.edges.len());
    if r.linear_system.rows.is_empty() {
        let _ = writeln!(out, "linear system: empty ({} columns)", r.linear_system.cols);
    } else {
        let _ = writeln!(out, "linear system:");
        for row in &r.linear_system.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
    }
    match &r.certificate {
        Certificate::ColumnsPartition { blocks } => {
            let parts: Vec<String> = blocks.iter().enumerate().map(|(i, b)| format!("S_{i}={}", set(b))).collect();
            let _ = writeln!(out, "columns partition: {}", parts.join(" "));
        }
        Certificate::ForbiddingColouring { prime, colouring, verification, .. } => {
            for a in &verification.attempts {
                let result = match &a.found_solution {
                    Some(s) => format!("monochromatic solution {}", tuple(s)),
                    None => "no monochromatic solution".to_string(),
                };
                let _ = writeln!(out, "  p={}: {result} (skipped {})", a.prime, a.skipped);
            }
            match (prime, colouring) {
                (Some(_), Some(c)) => {
                    let _ = writeln!(
                        out,
                        "forbidding colouring: {c} (verified at bound {}, ceiling {})",
                        verification.var_bound, verification.ceiling
                    );
                }
                _ => {
                    let _ = writeln!(out, "no candidate prime verified at bound {}", verification.var_bound);
                }
            }
        }
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "witness: a={} b={} z={} k={}", w.witness.a, w.witness.b, tuple(&w.witness.z), tuple(&w.witness.k));
        for (i, x) in w.witness.xs.iter().enumerate() {
            let _ = writeln!(out, "  X{} = {x}", i + 1);
        }
        for (i, y) in w.witness.ys.iter().enumerate() {
            let _ = writeln!(out, "  Y{} = {y}", i + 1);
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

#[derive(Serialize)]
pub struct WitnessOutput {
    pub witness: Witness,
    pub verified: bool,
    pub weight: u128,
    /// Direct evaluation, when every value is at most 10^18.
    pub direct_check: Option<Vec<EdgeCheck>>,
    pub pattern: Option<Vec<String>>,
}

impl WitnessOutput {
    pub fn new(sys: &ExpSystem, witness: Witness, pattern: bool) -> Self {
        let cap = BigUint::from(10u64.pow(18));
        let direct_check = match (materialize(&witness.xs, &cap), materialize(&witness.ys, &cap)) {
            (Some(xs), Some(ys)) => Some(eval_exp(sys, &xs, &ys, None)),
            _ => None,
        };
        let w = weight(sys, &witness.z);
        let pattern = pattern.then(|| {
            let budget = u64::try_from(2 * w).unwrap_or(u64::MAX).min(64);
            expand_pattern(&witness.z, budget, witness.a, witness.b)
                .iter()
                .map(ToString::to_string)
                .collect()
        });
        Self { verified: verify_witness(sys, &witness), weight: w, witness, direct_check, pattern }
    }
}

pub fn witness(r: &WitnessOutput) -> String {
    let w = &r.witness;
    let mut out = format!("a={} b={} z={} k={}\n", w.a, w.b, tuple(&w.z), tuple(&w.k));
    for (i, x) in w.xs.iter().enumerate() {
        let _ = writeln!(out, "X{} = {x}", i + 1);
    }
    for (i, y) in w.ys.iter().enumerate() {
        let _ = writeln!(out, "Y{} = {y}", i + 1);
    }
    let _ = writeln!(out, "weight: {}", r.weight);
    let _ = writeln!(out, "verified: {}", r.verified);
    if let Some(checks) = &r.direct_check {
        let pass = checks.iter().all(|&c| c == EdgeCheck::Pass);
        let _ = writeln!(out, "direct evaluation: {}", if pass { "pass" } else { "FAIL" });
    }
    if let Some(p) = &r.pattern {
        let _ = writeln!(out, "pattern: {}", p.join(", "));
    }
    out
}

pub fn search(r: &SearchReport) -> String {
    let mut out = match &r.outcome {
        Outcome::Found { assignment } => {
            let parts: Vec<String> = r.variables.iter().zip(assignment).map(|(v, x)| format!("{v}={x}")).collect();
            format!("found: {}\n", parts.join(" "))
        }
        Outcome::ExhaustedNoSolution => "exhausted: no monochromatic solution\n".to_string(),
    };
    if let Some((lo, hi)) = r.bounds.first() {
        let _ = writeln!(out, "bounds: [{lo}, {hi}]");
    }
    if let Some(c) = &r.ceiling {
        let _ = writeln!(out, "ceiling: {c}");
    }
    let _ = writeln!(out, "skipped: {}", r.skipped);
    out
}

#[derive(Serialize)]
pub struct ColourRow {
    pub x: u64,
    /// `None` where the colouring is undefined.
    pub colour: Option<Colour>,
}

#[derive(Serialize)]
pub struct ColouringOutput {
    pub spec: String,
    pub restrict: Option<u64>,
    pub colours: Vec<ColourRow>,
}

pub fn colour_json(c: Colour) -> Option<Colour> {
    (c != SENTINEL).then_some(c)
}

pub fn colouring(r: &ColouringOutput) -> String {
    let mut out = String::new();
    for row in &r.colours {
        let c = row.colour.map_or("undefined".to_string(), |c| c.to_string());
        let _ = writeln!(out, "{} {c}", row.x);
    }
    out
}

pub fn bounded_number(r: &RadoNumber) -> String {
    match r {
        RadoNumber::Exact(n) => format!("{n}\n"),
        RadoNumber::ExceedsMax(n) => format!("exceeds {n}\n"),
    }
}
