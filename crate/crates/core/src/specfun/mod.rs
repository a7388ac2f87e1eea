//! Special functions and quadrature engines.

mod bessel;
mod quadrature;

pub use bessel::{bessel_k_imag_order, BesselKiTable};
pub use quadrature::{
    gauss_legendre, integrate_double_semi_infinite, integrate_finite, integrate_real_line, integrate_semi_infinite,
    try_integrate_double_finite, try_integrate_double_semi_infinite, try_integrate_finite, try_integrate_real_line,
    try_integrate_semi_infinite, IntegralResult, QuadValue, QuadratureSpec,
};
