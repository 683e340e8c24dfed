//! Exact scalar, polynomial and linear-algebra substrate.

pub mod gcd;
pub mod geometry;
pub mod linsolve;
pub mod mpoly;
pub mod rat;
pub mod ratfun;
pub mod upoly;

use thiserror::Error;

pub use gcd::gcd_mpoly;
pub use geometry::{restrict_to_line, restrict_to_plane, AffineLine, PlaneDir};
pub use linsolve::{solve_linear, LinearSolution};
pub use mpoly::MPoly;
pub use rat::Rat;
pub use ratfun::{reduce_fraction, RatFun};
pub use upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("divisor is not monic in the last variable")]
    NotMonicInLastVar,
    #[error("zero input to {0}")]
    ZeroInput(&'static str),
}

/// `G = q*H + r` division in `K[x1..x(n-1)][xn]`; `H` must be monic in `xn`.
pub fn divmod_xn(g: &MPoly, h: &MPoly) -> Result<(MPoly, MPoly), AlgebraError> {
    g.divmod_last(h)
}

pub fn initial_form(f: &MPoly) -> Result<MPoly, AlgebraError> {
    f.initial_form()
}

pub fn homogeneous_component(f: &MPoly, d: u32) -> MPoly {
    f.homogeneous_component(d)
}

pub fn eval_mpoly(f: &MPoly, p: &[Rat]) -> Result<Rat, AlgebraError> {
    f.eval(p)
}
