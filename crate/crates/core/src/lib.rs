//! Numerical estimates for the sharp constant in the fractional Morrey
//! inequality on `R^N`, its extremal functions, and the asymptotic laws it
//! satisfies near the admissibility boundary `s*p = N`, for `p -> inf` and
//! for `s -> 1`.
//!
//! The crate is organized around the quantities that appear in the two-sided
//! bracket
//!
//! ```text
//!     theta_{N,s,p} * Lambda_{s,p}(B_1)  <=  m_{s,p}(R^N)  <=  E(trial) / [trial]_{C^alpha}^p
//! ```
//!
//! * [`params`] — admissible parameter triples, geometric constants and the
//!   special kernels `Phi`/`Psi`, the explicit constant `theta`, the BBM
//!   constant `K_{p,N}`.
//! * [`quadrature`] — Gagliardo seminorms of radial profiles and of grid
//!   functions, Hölder seminorms, difference-quotient diagnostics.
//! * [`trial`] — trial functions giving upper bounds on the sharp constant.
//! * [`hardy`] — the sharp fractional Hardy constant of the punctured space.
//! * [`extremal`] — grid-discretized constrained minimization: pinned
//!   two-point extremals and the Poincaré constant `Lambda_{s,p}(B_1)`.
//! * [`asym`] — asymptotic sweeps and log-log rate fits.
//! * [`battery`] — the acceptance battery run by `morrey check` and by the
//!   `acceptance` integration test.

pub mod asym;
pub mod battery;
pub mod error;
pub mod extremal;
pub mod hardy;
pub mod integrate;
pub mod params;
pub(crate) mod power;
pub mod quadrature;
pub mod sum;
pub mod trial;

pub use error::CoreError;
pub use params::{FracParams, GeometryConstants, KernelEval};
pub use quadrature::{GridFunction, RadialProfile, SeminormResult};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
