//! Generalized Hamilton principle toolkit.
//!
//! Three physics modules plus plumbing:
//!
//! - [`mechanics`]: RK4 integration of conservative, dissipative, and
//!   heat-exchange systems with generalized-energy bookkeeping and discrete
//!   Euler–Lagrange residual checks.
//! - [`quantum`]: Crank–Nicolson propagation of 1D wavepackets under a
//!   Hamiltonian with a constant anti-Hermitian shift −iħDk/m, plus an exact
//!   factored propagator.
//! - [`thermoq`]: occupation entropies, the temperature eigenproblem
//!   T²∂φ/∂T = T₀φ, temperature-corrected hydrogen spectra, and T₀
//!   extraction from line shifts.
//! - [`scenario`]: declarative JSON scenarios, deterministic runs, CSV and
//!   plot-data output.
//! - [`validate`]: the invariant suite behind the `validate` CLI subcommand.

pub mod constants;
pub mod error;
pub mod field;
pub mod mechanics;
pub mod quantum;
pub mod scenario;
pub mod thermoq;
pub mod validate;

pub use error::{Error, Result};
