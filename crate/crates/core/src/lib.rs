//! Exact computations for rank-2 parabolic bundles on the projective line.
//!
//! The crate covers sl2 conformal-block ranks and their path combinatorics
//! ([`conformal`]), stability of weighted point configurations and wall
//! bookkeeping ([`weights`]), effective cones of the blown-up moduli space
//! ([`cones`]), and wall crossings plus model classification ([`models`]).
//! All arithmetic is over arbitrary-precision rationals.

pub mod cones;
pub mod conformal;
pub mod linalg;
pub mod lp;
pub mod models;
pub mod rational;
pub mod sampling;
pub mod selftest;
pub mod weights;

use thiserror::Error;

pub use cones::{ConesError, DivisorClass, RationalCone};
pub use conformal::{BlockSpec, ConformalError, DoubleSequence};
pub use models::{ModelDescription, ModelsError};
pub use rational::Q;
pub use weights::{ParabolicWeight, Wall, WeightsError};

/// Resource bounds for exponential routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `Σ k_i` accepted by path enumeration and the section oracle.
    pub max_weight_sum: u64,
    /// Largest number of marked points accepted by subset scans.
    pub max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_weight_sum: 40,
            max_n: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Conformal(#[from] ConformalError),
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error(transparent)]
    Cones(#[from] ConesError),
    #[error(transparent)]
    Models(#[from] ModelsError),
}

impl Error {
    /// Name of the module the error originated in, looking through wrapped
    /// errors from other modules.
    pub fn tag(&self) -> &'static str {
        fn cones_tag(e: &ConesError) -> &'static str {
            match e {
                ConesError::Weights(_) => "weights",
                ConesError::Conformal(_) => "conformal",
                _ => "cones",
            }
        }
        match self {
            Error::Conformal(_) => "conformal",
            Error::Weights(_) => "weights",
            Error::Cones(e) => cones_tag(e),
            Error::Models(ModelsError::Weights(_)) => "weights",
            Error::Models(ModelsError::Cones(e)) => cones_tag(e),
            Error::Models(_) => "models",
        }
    }
}
