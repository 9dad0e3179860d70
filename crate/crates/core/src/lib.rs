//! Partition regularity of exponential equation systems
//!
//! ```text
//! X_i ^ (Y_1^C_1 * ... * Y_n^C_n) = X_j      for each edge (i, j)
//! ```
//!
//! A system is partition regular exactly when the linear system read off
//! its cycle space is, which Rado's columns property decides. [`decide`]
//! runs the whole pipeline and returns a report with a certificate for the
//! verdict: a lifted witness for regular systems, a colouring `c_p ∘ ν`
//! checked by exhaustive search for the others.

pub mod decide;
pub mod dsl;
pub mod eqsys;
pub mod error;
pub mod graphs;
pub mod linearize;
pub mod rado;
pub mod search;
pub mod witness;

pub use decide::{decide, decide_text, Certificate, DecideOptions, DecisionReport, PrimeChoice, Verdict};
pub use dsl::{parse_colouring, parse_matrix, parse_system, print_colouring, print_matrix, print_system, ParseError};
pub use eqsys::{normalize, validate, Edge, ExpSystem, Normalized};
pub use error::{Error, Result};
pub use graphs::{fundamental_cycles, spanning_forest, weak_components, SignedCycle, SignedPath, Step};
pub use linearize::{build_linear_system, LinSystem};
pub use rado::{columns_property, is_partition_regular, ColumnsPartition, IntMatrix, Rational};
pub use search::{search_exp, search_lin, ColouringSpec, Outcome, SearchReport};
pub use witness::{lift, nu, verify_witness, TowerValue, Witness};
