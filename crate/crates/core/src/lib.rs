//! Projected quantum kernel (PQK) pipeline for classifying CAR T-cell
//! constructs by cytotoxicity.
//!
//! The pipeline one-hot encodes motif combinations, embeds each sample into a
//! quantum feature-map circuit, projects the state back to classical features
//! through single-qubit Pauli expectations, and classifies with a kernel SVM.
//!
//! * [`motif`] - construct records, binarization, one-hot encoding, feature ordering
//! * [`circuit`] - gate-level IR and the ZZ / Heisenberg embedding builders
//! * [`sim`] - statevector and Pauli-backpropagation engines, feature projection
//! * [`kernel`] - kernel functions, Jacobi eigensolver, geometric difference and model complexity
//! * [`svm`] - SMO-trained kernel SVM, weighted F1, grid search
//! * [`harness`] - split protocol, experiments, Fisher analysis, screening

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments, clippy::needless_range_loop)]

pub mod circuit;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod motif;
pub mod sim;
pub mod svm;

pub use error::{PqkError, Result};
