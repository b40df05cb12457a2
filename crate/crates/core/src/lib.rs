//! Gaussian-process expected-improvement (GP-EI) Bayesian optimization on finite
//! candidate grids, together with the machinery needed to check its convergence
//! guarantees numerically: standard-normal analysis functions, error-bound
//! constants, and a Monte-Carlo verification harness.
//!
//! Module map:
//!
//! - [`stdnormal`]: φ, Φ, τ, EI(a, b) and the auxiliary functions τ̄, τ̃, θ.
//! - [`kernel`]: unit-variance stationary kernels (SE, Matérn 1/2, 3/2, 5/2).
//! - [`gp`]: prior sampling, posterior inference, information gain.
//! - [`eiopt`]: the EI acquisition and the GP-EI loop producing a [`eiopt::Trace`].
//! - [`bounds`]: δ-derived constants, error bounds, rate envelopes, RKHS bounds.
//! - [`harness`]: configuration, campaigns, lemma checks and figure data.

pub mod bounds;
pub mod eiopt;
mod error;
pub mod gp;
pub mod harness;
pub mod kernel;
pub mod points;
pub mod rng;
pub mod stdnormal;

pub use error::{Error, Result};
pub use points::PointSet;
