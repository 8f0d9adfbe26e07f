//! Complementary (quasi-orthogonal) subalgebras of finite-dimensional matrix algebras.
//!
//! Two unital subalgebras are complementary when their traceless parts are
//! orthogonal under `<a, b> = tau(a* b)`. The crate constructs and checks the
//! standard examples: mutually unbiased bases from clock and shift operators,
//! useful block unitaries, the two-qubit Cartan classes, the Bell algebra, the
//! fermionic (CAR) example, and the entropic uncertainty bounds that motivate
//! the notion.

pub mod error;
pub mod matrix;
pub mod rng;
pub mod weyl;
pub mod algebra;
pub mod block;
pub mod cartan;
pub mod family;
pub mod entropy;
pub mod fermion;
pub mod bell;

pub use error::{Error, Result};
pub use matrix::{hs_inner, tensor, Matrix, Tolerance, C64};
