//! Graded contractions of affine Kac-Moody algebras.
//!
//! Exact rational arithmetic throughout. The main entry points are
//! [`lie::SimpleAlgebra`], [`affine::AffineAlgebra`], [`grading::Grading`],
//! the solvers in [`contraction`], [`weights::weight_system`] and
//! [`generators::minimal_generators`].

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod affine;
pub mod contraction;
pub mod error;
pub mod generators;
pub mod grading;
pub mod lie;
pub mod linalg;
pub mod rational;
pub mod solve;
pub mod weights;

pub use error::{Error, Result};
pub use rational::Q;
