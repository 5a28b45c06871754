//! Integer-order Bessel functions of the first kind and adaptive quadrature.

mod bessel;
mod quad;

pub use bessel::{bessel_j, bessel_row, BesselRow, MAX_ABS_ARG, MAX_ABS_ORDER};
pub use quad::{integrate_adaptive, integrate_adaptive_panels, QuadEstimate, QuadValue, MAX_DEPTH};
