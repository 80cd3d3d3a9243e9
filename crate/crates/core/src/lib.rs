//! Determinant-based (D) and trace-based (T) classification of a new
//! observation into one of two populations sharing a covariance matrix,
//! together with the large-dimensional asymptotic misclassification
//! probabilities of both rules and a reproducible Monte Carlo harness.
//!
//! * [`model`] builds covariance structures, mean scenarios and samplers.
//! * [`classify`] holds the decision rules (D, T, naive Bayes, oracle Fisher).
//! * [`theory`] evaluates the asymptotic error formulas.
//! * [`harness`] runs replicated experiments and reproduction grids.
//! * [`cli`] contains config parsing, CSV ingestion and result emission.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cli;
pub mod dataset;
mod error;
pub mod harness;
pub mod model;
pub mod theory;

pub use error::{Error, Result};
