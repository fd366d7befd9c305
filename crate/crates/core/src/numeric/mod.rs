//! Floating-point monodromy of Fuchsian systems.

pub mod linalg;
pub mod monodromy;
pub mod ode;
pub mod rh;

pub use linalg::CMatrix;
pub use monodromy::{abel_residual, monodromy_tuple, ComplexTuple, LoopConfig, Loops};
pub use ode::{integrate_along, ComplexSystem, Path, Segment};
pub use rh::{
    numeric_braid_act, numeric_conjugacy, numeric_mc, verify_rh, ConjugacyFit, RhConfig, RhHypotheses, RhReport,
    RhStatus,
};
