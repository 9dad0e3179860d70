//! Brute-force oracles: bounded evaluation of exponential systems,
//! monochromatic solution search, Rado numbers and van der Waerden numbers.

mod colouring;
mod exp;
mod lin;
mod vdw;

use serde::{Deserialize, Serialize};

pub use colouring::{d_restrict, Colour, ColouringSpec, MAX_RESTRICT_INDEX, SENTINEL};
pub use exp::{eval_exp, is_monochromatic_exp_solution, search_exp, EdgeCheck, DEFAULT_CEILING};
pub use lin::{is_monochromatic_solution, rado_number, search_lin, RadoNumber};
pub use vdw::{find_progression, vdw_number};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    /// Values in the order of [`SearchReport::variables`].
    Found { assignment: Vec<u64> },
    ExhaustedNoSolution,
}

impl Outcome {
    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub variables: Vec<String>,
    /// Inclusive range searched for each variable.
    pub bounds: Vec<(u64, u64)>,
    /// Value ceiling for intermediate exponents, when one applies.
    pub ceiling: Option<String>,
    /// Candidates left undecided because an intermediate passed the
    /// ceiling. Never counted as non-solutions.
    pub skipped: u64,
    pub outcome: Outcome,
}
