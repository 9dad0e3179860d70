//! The cycle-indexed linear system attached to an exponential system.
//!
//! Each fundamental cycle contributes the row `Σ sign · coeffs(e)`; a
//! solution `z` of the linear system is exactly an exponent vector for
//! which signed path sums are path independent.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::eqsys::ExpSystem;
use crate::graphs::{fundamental_cycles, walk_row, SignedCycle};
use crate::rado::{sign_normalized, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinSystem {
    pub matrix: IntMatrix,
    /// `cycles[r]` generates row `r`.
    pub cycles: Vec<SignedCycle>,
}

/// One row per fundamental cycle, sign-normalized so the leading nonzero
/// entry is positive. Zero rows are kept so rows stay aligned with cycles.
pub fn build_linear_system(sys: &ExpSystem) -> LinSystem {
    let cycles = fundamental_cycles(sys);
    let rows = cycles
        .iter()
        .map(|c| {
            let raw: Vec<BigInt> = walk_row(sys, &c.steps).into_iter().map(BigInt::from).collect();
            sign_normalized(&raw)
        })
        .collect();
    let matrix = IntMatrix::new(sys.num_y, rows).expect("every cycle row has num_y entries");
    LinSystem { matrix, cycles }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqsys::Edge;

    #[test]
    fn parallel_pair_gives_doubling_row() {
        let sys = ExpSystem::new(2, vec![Edge::new(0, 1, vec![2, 0]), Edge::new(0, 1, vec![0, 1])]);
        let lin = build_linear_system(&sys);
        assert_eq!(lin.matrix, IntMatrix::from_rows(2, &[[2, -1]]).unwrap());
    }

    #[test]
    fn forest_gives_empty_system() {
        let sys = ExpSystem::new(4, vec![Edge::new(0, 2, vec![1, 1, 0, 0]), Edge::new(1, 2, vec![0, 0, 1, 1])]);
        let lin = build_linear_system(&sys);
        assert_eq!(lin.matrix.nrows(), 0);
        assert_eq!(lin.matrix.cols(), 4);
    }

    #[test]
    fn triangle_row() {
        // u + v - w with u = (1,0,0), v = (0,2,0), w = (0,0,1)
        let sys = ExpSystem::new(
            3,
            vec![Edge::new(0, 1, vec![1, 0, 0]), Edge::new(1, 2, vec![0, 2, 0]), Edge::new(0, 2, vec![0, 0, 1])],
        );
        assert_eq!(build_linear_system(&sys).matrix, IntMatrix::from_rows(3, &[[1, 2, -1]]).unwrap());
    }

    #[test]
    fn loop_row_is_its_coefficients() {
        let sys = ExpSystem::new(2, vec![Edge::new(0, 0, vec![1, -1])]);
        assert_eq!(build_linear_system(&sys).matrix, IntMatrix::from_rows(2, &[[1, -1]]).unwrap());
    }
}
