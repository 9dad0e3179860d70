//! The full decision pipeline: normalize, linearize, test the columns
//! property, then attach a certificate for the verdict.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dsl::{parse_system, print_colouring, print_system};
use crate::eqsys::{normalize, validate, ExpSystem};
use crate::error::{Error, Result};
use crate::graphs::SignedCycle;
use crate::linearize::build_linear_system;
use crate::rado::{columns_property, DEFAULT_COLUMN_CAP};
use crate::search::{search_exp, ColouringSpec, Outcome, DEFAULT_CEILING};
use crate::witness::{find_positive_solution_doubling, forbidding_colouring, lift, weight, Witness};

/// Primes tried, in order, when the prime is chosen automatically.
pub const PRIME_CANDIDATES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Upper limit for the automatic verification bound.
pub const MAX_AUTO_VERIFY_BOUND: u64 = 40;

const AUTO_VERIFY_BUDGET: f64 = 2.0e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeChoice {
    Auto,
    Fixed(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideOptions {
    pub witness: bool,
    pub a: u64,
    pub b: u64,
    pub prime: PrimeChoice,
    /// `None` picks a bound from the size of the system.
    pub verify_bound: Option<u64>,
    pub ceiling: u64,
    /// Largest entry tried when looking for a positive `z`.
    pub z_bound: u64,
    pub column_cap: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            witness: true,
            a: 2,
            b: 2,
            prime: PrimeChoice::Auto,
            verify_bound: None,
            ceiling: DEFAULT_CEILING,
            z_bound: 64,
            column_cap: DEFAULT_COLUMN_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pr,
    NotPr,
}

/// 1-based edge for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub tail: usize,
    pub head: usize,
    pub coeffs: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    pub n: usize,
    pub edges: Vec<EdgeJson>,
}

impl SystemJson {
    pub fn from_system(sys: &ExpSystem) -> Self {
        Self {
            n: sys.num_x,
            edges: sys
                .edges
                .iter()
                .map(|e| EdgeJson { tail: e.tail + 1, head: e.head + 1, coeffs: e.coeffs.clone() })
                .collect(),
        }
    }
}

/// `(edge, sign)` with 1-based edge numbers of the normalized system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub edge: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearJson {
    pub cols: usize,
    pub rows: Vec<Vec<i64>>,
    /// `cycles[r]` generates `rows[r]`.
    pub cycles: Vec<Vec<StepJson>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeAttempt {
    pub prime: u64,
    pub colouring: String,
    pub found_solution: Option<Vec<u64>>,
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    /// Some prime's colouring left the whole searched range without a
    /// monochromatic solution.
    pub verified: bool,
    pub var_bound: u64,
    pub ceiling: String,
    pub attempts: Vec<PrimeAttempt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// Blocks `S_0, S_1, ...` of 1-based column indices.
    ColumnsPartition { blocks: Vec<Vec<usize>> },
    ForbiddingColouring {
        prime: Option<u64>,
        /// Colouring of the exponential system, `c_p ∘ ν`.
        colouring: Option<String>,
        /// Colouring `c_p` of the linear system it comes from.
        linear_colouring: Option<String>,
        verification: Verification,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub witness: Witness,
    /// `W(z)`.
    pub weight: u128,
    /// Entry bound at which `z` was found.
    pub z_search_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionReport {
    /// SHA-256 of the input text, hex.
    pub input_digest: String,
    pub system: SystemJson,
    /// `relabel[i]` is the normalized vertex of input vertex `i + 1`,
    /// 1-based.
    pub relabel: Vec<usize>,
    pub linear_system: LinearJson,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub witness: Option<WitnessReport>,
    pub warnings: Vec<String>,
    pub options: DecideOptions,
}

impl DecisionReport {
    /// 0 for PR, 1 for not PR, 2 when no forbidding colouring verified.
    pub fn exit_code(&self) -> i32 {
        match (&self.verdict, &self.certificate) {
            (Verdict::Pr, _) => 0,
            (Verdict::NotPr, Certificate::ForbiddingColouring { verification, .. }) if verification.verified => 1,
            _ => 2,
        }
    }
}

/// Largest bound up to [`MAX_AUTO_VERIFY_BOUND`] whose search lattice
/// stays within a fixed work budget.
pub fn auto_verify_bound(sys: &ExpSystem) -> u64 {
    let active = (0..sys.num_y)
        .filter(|&k| sys.edges.iter().any(|e| e.coeffs[k] != 0))
        .count() as i32;
    let scale = sys.num_x.max(1) as f64;
    (4..=MAX_AUTO_VERIFY_BOUND)
        .rev()
        .find(|&b| ((b - 1) as f64).powi(active + 1) * scale <= AUTO_VERIFY_BUDGET)
        .unwrap_or(4)
}

fn cycles_json(cycles: &[SignedCycle]) -> Vec<Vec<StepJson>> {
    cycles
        .iter()
        .map(|c| c.steps.iter().map(|s| StepJson { edge: s.edge + 1, sign: s.sign }).collect())
        .collect()
}

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Parses `text` and runs [`decide`], digesting the text as given.
pub fn decide_text(text: &str, opts: &DecideOptions) -> Result<DecisionReport> {
    let sys = parse_system(text)?;
    decide_with_digest(&sys, digest(text), opts)
}

/// Runs the pipeline on an in-memory system; the digest covers its
/// canonical text.
pub fn decide(sys: &ExpSystem, opts: &DecideOptions) -> Result<DecisionReport> {
    decide_with_digest(sys, digest(&print_system(sys)), opts)
}

fn decide_with_digest(input: &ExpSystem, input_digest: String, opts: &DecideOptions) -> Result<DecisionReport> {
    let problems = validate(input);
    if !problems.is_empty() {
        return Err(Error::InvalidSystem(problems));
    }
    if opts.a < 2 || opts.b < 2 {
        return Err(Error::Domain(format!("a and b must be at least 2, got a={}, b={}", opts.a, opts.b)));
    }
    if let PrimeChoice::Fixed(p) = opts.prime {
        ColouringSpec::rado(p)?;
    }

    let norm = normalize(input);
    let sys = &norm.system;
    let lin = build_linear_system(sys);
    let rows = lin.matrix.to_i64_rows().expect("cycle rows of validated systems fit i64");

    let mut warnings = Vec::new();
    let merged = input.edges.iter().filter(|e| e.is_identity()).count();
    if merged > 0 {
        warnings.push(format!("{merged} identity equation(s) removed by normalization"));
    }
    if sys.has_loops() {
        warnings.push("system contains loop equations X_i ^ (...) = X_i".to_string());
    }
    if sys.has_parallel_edges() {
        warnings.push("parallel equations between the same pair of variables".to_string());
    }

    let partition = columns_property(&lin.matrix, opts.column_cap)?;
    let (verdict, certificate, witness) = match partition {
        Some(p) => {
            let blocks = p.blocks.iter().map(|b| b.iter().map(|&j| j + 1).collect()).collect();
            let witness = if opts.witness {
                match find_positive_solution_doubling(&lin.matrix, 1, opts.z_bound) {
                    Some((z, bound)) => {
                        let w = lift(sys, &z, opts.a, opts.b)?;
                        if w.shifted {
                            warnings.push("k-shift applied: negative path sums moved to start at 0".to_string());
                        }
                        Some(WitnessReport { weight: weight(sys, &z), witness: w, z_search_bound: bound })
                    }
                    None => {
                        warnings.push(format!("no positive solution with entries <= {}; witness omitted", opts.z_bound));
                        None
                    }
                }
            } else {
                None
            };
            (Verdict::Pr, Certificate::ColumnsPartition { blocks }, witness)
        }
        None => (Verdict::NotPr, forbidding_certificate(sys, opts), None),
    };

    Ok(DecisionReport {
        input_digest,
        system: SystemJson::from_system(sys),
        relabel: norm.relabel.iter().map(|&v| v + 1).collect(),
        linear_system: LinearJson { cols: lin.matrix.cols(), rows, cycles: cycles_json(&lin.cycles) },
        verdict,
        certificate,
        witness,
        warnings,
        options: opts.clone(),
    })
}

fn forbidding_certificate(sys: &ExpSystem, opts: &DecideOptions) -> Certificate {
    let var_bound = opts.verify_bound.unwrap_or_else(|| auto_verify_bound(sys));
    let ceiling = BigUint::from(opts.ceiling);
    let primes: Vec<u64> = match opts.prime {
        PrimeChoice::Auto => PRIME_CANDIDATES.to_vec(),
        PrimeChoice::Fixed(p) => vec![p],
    };
    let mut attempts = Vec::new();
    let mut chosen = None;
    for p in primes {
        let linear = ColouringSpec::rado(p).expect("candidate primes are prime");
        let colouring = forbidding_colouring(&linear);
        let report = search_exp(sys, &colouring, var_bound, &ceiling);
        let found = match report.outcome {
            Outcome::Found { assignment } => Some(assignment),
            Outcome::ExhaustedNoSolution => None,
        };
        let ok = found.is_none();
        attempts.push(PrimeAttempt {
            prime: p,
            colouring: print_colouring(&colouring),
            found_solution: found,
            skipped: report.skipped,
        });
        if ok {
            chosen = Some((p, print_colouring(&colouring), print_colouring(&linear)));
            break;
        }
    }
    let verification = Verification {
        verified: chosen.is_some(),
        var_bound,
        ceiling: opts.ceiling.to_string(),
        attempts,
    };
    match chosen {
        Some((p, colouring, linear)) => Certificate::ForbiddingColouring {
            prime: Some(p),
            colouring: Some(colouring),
            linear_colouring: Some(linear),
            verification,
        },
        None => Certificate::ForbiddingColouring { prime: None, colouring: None, linear_colouring: None, verification },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PR: &str = "system 4\neq X1 ^ Y1*Y2 = X3\neq X2 ^ Y3*Y4 = X3\n";
    const NPR: &str = "system 2\neq X1 ^ Y1^2 = X2\neq X1 ^ Y2 = X2\n";

    #[test]
    fn pr_example() {
        let r = decide_text(PR, &DecideOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pr);
        assert!(r.linear_system.rows.is_empty());
        assert_eq!(r.certificate, Certificate::ColumnsPartition { blocks: vec![vec![1, 2, 3, 4]] });
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w.witness.z, vec![1, 1, 1, 1]);
        assert_eq!(w.witness.k, vec![0, 0, 2, 0]);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn npr_example() {
        let r = decide_text(NPR, &DecideOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotPr);
        assert_eq!(r.linear_system.rows, vec![vec![2, -1]]);
        let Certificate::ForbiddingColouring { prime, colouring, verification, .. } = &r.certificate else {
            panic!("expected a forbidding colouring");
        };
        assert_eq!(*prime, Some(3));
        assert_eq!(colouring.as_deref(), Some("radop-nu:3"));
        assert_eq!(verification.var_bound, 40);
        assert!(verification.attempts[0].found_solution.is_some());
        assert_eq!(r.exit_code(), 1);
        assert!(r.warnings.iter().any(|w| w.contains("parallel")));
    }

    #[test]
    fn empty_system_is_pr() {
        let r = decide_text("system 2\n", &DecideOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pr);
        assert_eq!(r.certificate, Certificate::ColumnsPartition { blocks: vec![vec![1, 2]] });
    }

    #[test]
    fn fixed_prime_that_fails_is_inconclusive() {
        let opts = DecideOptions { prime: PrimeChoice::Fixed(2), ..DecideOptions::default() };
        let r = decide_text(NPR, &opts).unwrap();
        assert_eq!(r.exit_code(), 2);
        assert!(decide_text(NPR, &DecideOptions { prime: PrimeChoice::Fixed(4), ..opts }).is_err());
    }

    #[test]
    fn auto_bound_shrinks_with_size() {
        let small = parse_system(NPR).unwrap();
        assert_eq!(auto_verify_bound(&small), 40);
        let big = parse_system("system 6\neq X1 ^ Y1*Y2*Y3*Y4*Y5*Y6 = X2\n").unwrap();
        assert!(auto_verify_bound(&big) < 40);
    }

    #[test]
    fn digest_is_stable() {
        let a = decide_text(PR, &DecideOptions::default()).unwrap();
        let b = decide_text(PR, &DecideOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.input_digest.len(), 64);
    }
}
