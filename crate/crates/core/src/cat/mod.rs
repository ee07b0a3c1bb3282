//! The structural layer: T-graphs, T-categories, T-functors, their derived
//! data, axiom validation, and functor enumeration.

mod category;
mod functor;
mod graph;
mod preorder;

use thiserror::Error;

use crate::finset::FinSetError;
use crate::monad::MonadError;

pub use category::{
    derived_maps, validate_category, CategoryReport, CompEntry, DerivedMaps, TCategory,
    Violation,
};
pub use functor::{
    enumerate_functors, mulcat_perfect_check, validate_functor, FunctorReport, TFunctor,
};
pub use graph::{ComposablePairs, ComposableTriples, PointedTGraph, TGraph};
pub use preorder::{monotone_to_functor, ord_perfect_check, Preorder};

#[derive(Debug, Error)]
pub enum CatError {
    #[error(transparent)]
    FinSet(#[from] FinSetError),
    #[error(transparent)]
    Monad(#[from] MonadError),
    #[error("structural error: {0}")]
    Structure(String),
    #[error("membership violation: {0}")]
    MembershipViolation(String),
    #[error("candidate cap of {cap} exceeded; raise --cap to search further")]
    CapExceeded { cap: u64 },
    #[error("cone mismatch: {0}")]
    ConeMismatch(String),
    #[error("not a preorder: {0}")]
    NotAPreorder(String),
    #[error("not a T-algebra: {0}")]
    NotAnAlgebra(String),
}
