//! Bound states of the 1+1 dimensional Dirac equation with the Lorentz-scalar
//! potential `V(x) = g|x|`.
//!
//! On each half line the bispinor components are parabolic cylinder functions
//! `D_nu` of real order, and continuity at the kink `x = 0` gives a
//! transcendental condition on `nu`. The crate is organised bottom-up:
//!
//! * [`specfun`]: gamma, reciprocal gamma, Kummer `M`, Hermite polynomials and
//!   `D_nu(z)` with its derivative.
//! * [`quantize`]: the matching conditions as residuals in `nu`, bracketing
//!   scans, root refinement and the merged spectrum.
//! * [`model`]: physical parameters, coordinates, energies, coefficient
//!   assembly, sampling, normalization and Dirac residuals.
//! * [`oracle`]: an independent two-sided RK4 shooting solver of the
//!   first-order system. It never calls into [`specfun`].
//! * [`quad`]: adaptive Simpson quadrature.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod quantize;
pub mod specfun;

pub use error::{Error, Result};
