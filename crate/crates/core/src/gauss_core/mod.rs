//! Special functions, Hermite polynomials, quadrature rules and the scalar
//! constants of the extension problem.

mod constants;
mod hermite;
mod quadrature;
mod special;

pub use constants::{
    constants, extension_constant, trace_constant, ConstantsTable, FractionalOrder,
};
pub use hermite::{hermite_eval, hermite_values, weighted_hermite_values};
pub use quadrature::{gauss_hermite_rule, gauss_legendre_rule, integrate, QuadratureRule};
pub use special::{
    gamma_fn, gauss_density, gauss_mass, iso_function, phi, phi_ext, phi_inv, phi_upper,
};
