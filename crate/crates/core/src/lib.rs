//! Modified log-Sobolev inequalities and fractional edge boundaries on the
//! Hamming cube `{0,1}^n`.
//!
//! * [`special`]: the log-Sobolev constant `C(rho)` and the function chain
//!   it is built from.
//! * [`cube`], [`subset`], [`spectral`]: functions on the cube, vertex
//!   subsets, and the fundamental tone `lambda*(A)`.
//! * [`ball`]: the radial reduction for Hamming balls.
//! * [`series`]: exact rational power-series checks.
//! * [`codes`]: code-size bounds from Hamming balls.
//! * [`verify`]: inequality suites and reports.

pub mod ball;
pub mod codes;
pub mod cube;
pub mod eigen;
pub mod error;
pub mod series;
pub mod special;
pub mod spectral;
pub mod subset;
pub mod verify;

pub use ball::{ball_lambda_star, ball_minimizer, fk_rhs, RadialProfile, TridiagonalForm};
pub use codes::{asymptotic_rate_bound, code_size_bound, critical_radius, CodeBoundResult};
pub use cube::{CubeFunction, MAX_DIM};
pub use error::{Error, Result};
pub use special::{c_alpha, c_explicit, log_sobolev_constant, Tolerance, LN_2};
pub use spectral::{lambda_star, lambda_star_value, Method, SolverConfig, SpectralResult};
pub use subset::{parse_mask_file, SubsetSpec};
pub use verify::{CheckRecord, Status, VerificationReport};
