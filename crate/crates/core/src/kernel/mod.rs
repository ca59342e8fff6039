//! Kernel functions, Gram matrices and kernel-geometry screening metrics.

mod functions;
mod linalg;
mod metrics;

pub use functions::{kernel_matrix, Gamma, KernelKind, KernelMatrix, KernelSpec, ResolvedKernel};
pub use linalg::{jacobi_eigen, psd_sqrt, Eigen, Matrix};
pub use metrics::{geometric_difference, model_complexity, trace_normalize};
