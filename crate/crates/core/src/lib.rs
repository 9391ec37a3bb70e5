//! Parametric density estimation from short data records by gradient flow
//! on the nonlinear subspace that a density family traces out in
//! histogram space, together with the classical Rayleigh estimators and a
//! seeded Monte-Carlo benchmark harness.
//!
//! ```
//! use nlsubspace::{
//!     distributions::{sample, ModelKind, ParamVector},
//!     measurement::{measure, GridPolicy},
//!     subspace::{estimate, SolverConfig},
//! };
//!
//! let truth = ParamVector::sigma(1.0).unwrap();
//! let record = sample(ModelKind::Rayleigh, &truth, 500, 7).unwrap();
//! let psi = measure(&record, &GridPolicy::data_max(15).unwrap(), ModelKind::Rayleigh).unwrap();
//! let fit = estimate(&psi, ModelKind::Rayleigh, &ParamVector::sigma(2.5).unwrap(), &SolverConfig::default())
//!     .unwrap();
//! assert!((fit.xi_final[0] - 1.0).abs() < 0.1);
//! ```

pub mod baselines;
pub mod bench;
pub mod distributions;
pub mod error;
pub mod measurement;
pub mod quadrature;
pub mod subspace;

pub use error::{Error, Result};
