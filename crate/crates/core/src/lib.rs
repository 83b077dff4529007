//! Copula-linked parallel ICA (CLiP-ICA).
//!
//! Jointly estimates two unmixing matrices for two datasets whose sources are
//! coupled pairwise through a Gaussian copula over logistic marginals. The
//! crate also carries the surrounding pipeline: synthetic ground-truth
//! generation, multi-run stability analysis, dual-regression
//! back-reconstruction, functional network connectivity (FNC), structural
//! network covariation (SNC), and FDR-corrected group statistics.
//!
//! Numeric code is generic over the scalar type via [`Real`] (`f32` or
//! `f64`); the type aliases at the crate root fix `f64`, which is what the
//! file formats and the CLI use.

pub mod assignment;
pub mod copula;
pub mod error;
pub mod filter;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod pca;
pub mod postproc;
pub mod real;
pub mod simulation;
pub mod solver;
pub mod special;
pub mod stability;
pub mod stats;
pub mod svg;

pub use error::{Error, Result};
pub use real::Real;

/// Dense row-major `f64` matrix, the universal data carrier.
pub type Matrix = matrix::Mat<f64>;
/// Single-precision variant, for callers that want the generic core at `f32`.
pub type Matrix32 = matrix::Mat<f32>;

pub use copula::{CopulaSpec, MarginalModel, NllBreakdown};
pub use pca::PcaResult;
pub use simulation::{SimDataset, SimSpec};
pub use solver::{FitConfig, FitResult, UnmixingPair};
pub use stability::{ClusterReport, Modality, RunCollection};
