#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod bellman;
pub mod integrate;
pub mod kernels;
pub mod normlab;
pub mod report;
pub mod spectral;
pub mod suites;

pub use basis::{MultiIndex, QuadratureGrid};
pub use bellman::BellmanParams;
pub use kernels::KernelConfig;
pub use normlab::{NormGrid, Operator};
pub use report::{Report, ReportFormat};
pub use spectral::{SpectralFn, SpectralVecFn};
pub use suites::{run_suite, Suite, SuiteConfig, SuiteError};
