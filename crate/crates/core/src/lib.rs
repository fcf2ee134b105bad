//! Engineered periodic supersymmetric hierarchies of one-dimensional
//! potentials.
//!
//! * [`exactnum`]: exact rationals, polynomials and Gamma shift ratios.
//! * [`polyfactory`]: Hermite and generalized Laguerre polynomials by
//!   several independent routes, with their ODE and recursion residuals.
//! * [`hierarchy`]: closed-form superpotentials, spectra and exact
//!   quasi-polynomial eigenstates for periods 1 and 2.
//! * [`numverify`]: quadrature, finite-difference spectra, intertwining
//!   residuals and node counts.
//! * [`riccati`]: numerical solver for the periodic Riccati chain at any
//!   period.
//! * [`cli`]: the command-line front end used by the `periodic-susy` binary.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod hierarchy;
pub mod numverify;
pub mod polyfactory;
pub mod riccati;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{PolyQ, Rational};
pub use hierarchy::{HierarchySpec, QuasiState};
