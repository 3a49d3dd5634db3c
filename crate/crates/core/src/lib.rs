//! Newton polyhedra of multivariate polynomials and factorization in the
//! completion along loose edges.

pub mod coeffs;
pub mod completion;
pub mod expr;
pub mod grading;
pub mod lift;
mod lp;
pub mod newton;
pub mod par;
pub mod poly;
pub mod univariate;
pub mod weier;

pub use coeffs::{CoeffError, RingDescriptor, Scalar};
pub use expr::{parse, render, ExprError, VarTable};
pub use grading::{orthogonal_basis, GradingError, WeightSystem};
pub use lift::{lift_factorization, reducibility_witness, LiftError, SplitRequest, Verdict};
pub use newton::{Edge, NewtonError, NewtonPolyhedron};
pub use par::Exec;
pub use poly::{ExponentVec, PolyError, SparsePoly, WeightedBound};
pub use univariate::{FactorError, UniPoly};
pub use weier::{padic_newton_factor, weierstrass_factor, PadicPoly, WeierError, WeierstrassInput};

use thiserror::Error;

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Weier(#[from] WeierError),
}
