//! Very-high-precision eigenvalues of one-dimensional Schrödinger equations
//!
//! ```text
//!     -s² ψ''(x) + (x^{2M} + v_{M-1} x^{2M-2} + … + v_0) ψ(x) = ε ψ(x)
//! ```
//!
//! The wavefunction is obtained by brute-force summation of its Taylor series
//! in multiprecision arithmetic; eigenvalues are located by driving a boundary
//! mismatch at a finite, a-priori planned point `x` to zero. Working precision
//! and evaluation point are chosen from WKB estimates of the obtainable
//! precision and of the roundoff loss inside the series.
//!
//! The crate is organised bottom-up:
//!
//! * [`bigreal`] — decimal-digit parameterised arbitrary precision reals
//! * [`potential`] — the even polynomial potential and its turning points
//! * [`series`] — Taylor recurrence and summation of ψ, ψ′
//! * [`estimator`] — P_est, ΔD, evaluation point and working precision
//! * [`eigensolver`] — bracketing, precision ladder, certification
//! * [`splitting`] — double-well level splitting vs. the instanton formula
//! * [`checkpoint`] — resumable ladder state
//! * [`cli`] — configuration, result documents and command drivers

pub mod bigreal;
pub mod checkpoint;
pub mod cli;
pub mod eigensolver;
pub mod estimator;
pub mod potential;
pub mod quadrature;
pub mod series;
pub mod splitting;

mod error;

pub use bigreal::{BigReal, PrecisionCtx};
pub use eigensolver::{BoundaryCondition, EigResult, EvalTelemetry, SolveOptions, Solver};
pub use error::{Error, Result};
pub use estimator::PrecisionPlan;
pub use potential::{PotentialSpec, StateIndex};
pub use series::SeriesEval;
pub use splitting::SplittingReport;
