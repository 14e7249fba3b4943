//! Fractional Gaussian perimeters of one-dimensional sets and the
//! quantitative isoperimetric inequality built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`gauss_core`]: special functions, Hermite polynomials, quadrature and
//!   the extension/trace constants.
//! - [`set_model`]: finite unions of open intervals under the standard
//!   Gaussian measure, Ehrhard symmetrization and Fraenkel asymmetry.
//! - [`spectral`]: Hermite coefficients of characteristic functions and the
//!   spectral series for the fractional perimeter.
//! - [`extension`]: the Ornstein–Uhlenbeck extension in spectral form, its
//!   level sets, and a finite-element energy solver used as a cross-check.
//! - [`inequality`]: deficit reports, the explicit constant, and the
//!   randomized verification suites.
//!
//! Everything is a pure function of its inputs; suite runners fan out over
//! rayon but collect results in input order, so output is reproducible.

pub mod error;
pub mod extension;
pub mod gauss_core;
pub mod inequality;
pub mod set_model;
pub mod spectral;
mod summation;

pub use error::{Error, Result};
pub use gauss_core::{ConstantsTable, FractionalOrder, QuadratureRule};
pub use set_model::{GaussianSet, Halfline, Orientation};
pub use spectral::{Convention, PerimeterValue, SpectralCoefficients};
