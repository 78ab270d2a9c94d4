//! Finite-dimensional simulation and certification of indirect quantum
//! measurement schemes.
//!
//! A measurement couples the system S (observable Q) to a probe P (read-out
//! observable R) through a joint unitary; an ideal detector then reads R and
//! the observer estimates Q from the outcome. This crate simulates that
//! process on dense desk-scale Hilbert spaces and certifies whether a scheme
//! is of the first kind / non-demolition:
//!
//! * [`measure`] — product pre-state, joint amplitudes, Born-rule outcome
//!   distribution, collapse, and the post-measurement ensemble.
//! * [`conditions`] — the weak / moderate / strong condition hierarchy,
//!   commutator conservation laws, and scheme classification.
//! * [`estimation`] — estimator tables, bias, squared error against a budget,
//!   and the mutual information obtained by the measurement.
//! * [`models`] — canonical interaction fixtures, one per hierarchy cell.
//! * [`search`] — state searches: worst-case measured states (response-range
//!   mapping) and best probe preparations (apparatus design).
//! * [`modelfile`] / [`report`] / [`cli`] — the JSON model format, lossless
//!   machine reports, and the command-line front end.
//!
//! The `examples/` directory walks through each capability; `qnd demo` prints
//! the condition-hierarchy table for the builtin gallery.

pub mod cli;
pub mod conditions;
mod error;
pub mod estimation;
pub mod linalg;
pub mod measure;
pub mod modelfile;
pub mod models;
pub mod random;
pub mod report;
pub mod search;

pub use error::{Error, Result};
