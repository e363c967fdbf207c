//! Periods of level-one modular forms along closed geodesics of the modular
//! surface, grouped by discriminant, and the statistics built from them.
//!
//! The crate is organized bottom-up:
//!
//! - [`qforms`]: indefinite binary quadratic forms, Pell units, class lists.
//! - [`geodesics`]: hyperbolic matrices, oriented geodesics, fundamental domain.
//! - [`specfun`]: Gamma, digamma, Beta, `K_{iR}`, Whittaker `W`, Mellin integrals.
//! - [`modforms`]: holomorphic eigenforms of level one and Maass form data.
//! - [`lfun`]: central values via approximate functional equations.
//! - [`periods`]: geodesic periods, the measures `μ_d` and a persistent table.
//! - [`variance`]: closed-form variances, ladder ratios, empirical variance runs.
//! - [`cli`]: the `gvlab` command line.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod geodesics;
pub mod highprec;
pub mod lfun;
pub mod modforms;
pub mod periods;
pub mod quad;
pub mod qforms;
pub mod specfun;
pub mod variance;

pub use error::{Error, Result};
