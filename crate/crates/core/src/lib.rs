//! Exact computations with linear reflection groups.
//!
//! Coxeter and Cartan data are validated and classified, reflection
//! representations are built and reduced to their irreducible quotient,
//! Zariski-closure verdicts and integrality certificates are produced, and
//! explicit non-symmetrizable integral Cartan matrices are constructed for
//! right-angled and more general Coxeter groups.
//!
//! Everything is exact: entries are arbitrary-precision rationals and every
//! verdict comes with a checkable witness. Indices are 0-based in the
//! library; the JSON wire format and the CLI are 1-based.

pub mod cartan;
pub mod corpus;
pub mod coxeter;
pub mod forge;
pub mod graph;
pub mod integral;
pub mod linalg;
pub mod poly;
pub mod represent;
pub mod wire;

pub use cartan::{CartanError, CartanMatrix, CartanType, Symmetrizability};
pub use coxeter::{CoxeterError, CoxeterMatrix, GroupClass, Kind, Label, SubgroupEmbedding};
pub use linalg::{Matrix, Rational};
pub use represent::{ClosureVerdict, RepError, ReflectionRep, VerdictKind};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Integral(#[from] integral::IntegralError),
    #[error(transparent)]
    Forge(#[from] forge::ForgeError),
    #[error(transparent)]
    Wire(#[from] wire::WireError),
}
