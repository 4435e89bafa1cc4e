//! Classification of regular languages by quantum query complexity.
//!
//! The pipeline runs minimal DFA → syntactic monoid → flattening →
//! per-component classification. A simulated membership algorithm for
//! star-free languages reports query costs under a classical and an
//! idealized Grover cost model.

pub mod automata;
pub mod cascade;
pub mod classify;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod exec;
pub mod flatten;
pub mod monoid;
pub mod query;
pub mod sensitivity;

pub use error::{Error, Result};

/// Size limits and scheduling shared by the pipeline stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub monoid_cap: usize,
    pub block_cap: usize,
    pub mask_cap: usize,
    pub strategy: exec::Strategy,
    pub charge: query::PredicateCharge,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            monoid_cap: monoid::DEFAULT_MONOID_CAP,
            block_cap: flatten::DEFAULT_BLOCK_CAP,
            mask_cap: sensitivity::DEFAULT_MASK_CAP,
            strategy: exec::Strategy::default(),
            charge: query::PredicateCharge::default(),
        }
    }
}
