//! Numerical laboratory for Hankel measures on the Hardy space.
//!
//! The crate is organised bottom-up:
//!
//! * [`measure`] holds the closed-form measures on `[0, 1)`, the analytic
//!   density measures on the disk, and their moment sequences.
//! * [`analytic`] evaluates truncated Taylor series and estimates Hardy,
//!   Dirichlet-type, Bloch and `Q_p` (semi)norms.
//! * [`hankel`] builds the finite sections `(μ[n+k])` of the Hankel matrix and
//!   estimates their operator norms on `H²` and `D_α`.
//! * [`criteria`] evaluates the measure-level boundedness criteria: the
//!   reproducing-kernel condition, the Carleson kernel supremum and the
//!   Carleson-box integral.
//! * [`harness`] turns the above into reproducible experiments with
//!   machine-readable verdicts.
//!
//! ```
//! use hankel_lab::measure::RadialMeasure;
//! use hankel_lab::hankel::{HankelOperator, PowerIteration};
//!
//! let hilbert = HankelOperator::build(&RadialMeasure::lebesgue(), 2).unwrap();
//! let norm = hilbert.operator_norm_h2(&PowerIteration::default()).unwrap();
//! assert!((norm.value - (4.0 + 13f64.sqrt()) / 6.0).abs() < 1e-9);
//! ```

pub mod analytic;
pub mod criteria;
mod error;
mod fft;
pub mod hankel;
pub mod harness;
pub mod measure;
pub mod quadrature;
pub mod special;
mod sum;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
