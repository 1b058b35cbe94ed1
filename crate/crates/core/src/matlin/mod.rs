//! Dense complex linear algebra and the vectorization calculus.
//!
//! Vectorization puts the row (output-space) index slow: `|A>> = sum_{i,mu} A[i,mu] |i> (x) |mu>`,
//! so for a `d' x d` operator `|A>>` lives on `K (x) H`. Every Choi construction in the
//! crate inherits this ordering.

mod eigen;
mod matrix;
mod ops;

pub use eigen::{herm_eig, HermitianEigen};
pub use matrix::Matrix;
pub use ops::{
    devectorize, herm_exp, hs_inner, kron, kron_all, partial_trace, permute_subsystems, psd_sqrt,
    trace_norm, vectorize, SubsystemShape,
};
