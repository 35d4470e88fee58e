//! Independent brute-force oracles.
//!
//! Nothing here goes through the solver pipeline; these are slow reference
//! implementations used to cross-check it.

pub mod lasso;
pub mod model;
pub mod onestep;
pub mod random;
pub mod zielonka;

pub use model::{bounded_model_search, eval, Model, OracleError, SearchBounds};
