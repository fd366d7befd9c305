//! Katz middle convolution in exact arithmetic.
//!
//! The crate covers the multiplicative middle convolution `MC_λ` of matrix
//! tuples ([`mult`]), its additive counterpart `mc_μ` on Fuchsian systems
//! ([`fuchsian`]), the construction pipeline for rigid systems
//! ([`pipeline`]), p-curvature of Fuchsian and Okubo systems ([`pcurv`]), and
//! a floating-point monodromy harness ([`numeric`]) that checks
//! `Mon(D_{mc_{μ−1}(a)}) ≅ MC_λ(Mon(D_a))` for `λ = e^{2πiμ}`.

pub mod error;
pub mod field;
pub mod forms;
pub mod fuchsian;
pub mod lame;
pub mod matrix;
pub mod mult;
pub mod numeric;
pub mod pcurv;
pub mod pipeline;
pub mod poly;
pub mod subspace;
pub mod tuple;

pub use error::{Error, Result};
pub use field::{Cyclo, Field, Fp, Q};
pub use matrix::Matrix;
pub use subspace::{quotient_action, Subspace};
