//! Exact linear algebra: integer Smith normal forms (generic over the
//! scalar) and sparse echelon forms over `Z/p^a`.

pub mod local;
mod matrix;
mod smith;

pub use matrix::Matrix;
pub use smith::{smith_normal_form, SmithForm};

/// Machine-integer matrices: module actions, stage maps, small presentations.
pub type IntMatrix = Matrix<i64>;
/// Matrices whose entries may grow, as in the cocycle presentations.
pub type BigMatrix = Matrix<num_bigint::BigInt>;
