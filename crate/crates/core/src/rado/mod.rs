//! Exact linear algebra, Rado's columns property, and Rado colourings.

mod columns;
mod cp;
mod linalg;

pub use columns::{
    columns_property, is_partition_regular, single_equation_oracle, ColumnsPartition, DEFAULT_COLUMN_CAP,
};
pub use cp::{is_prime, rado_colour, rado_colour_big};
pub use linalg::{in_span, rank, sign_normalized, IntMatrix, Rational, SpanBasis};
