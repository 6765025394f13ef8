//! Gamma and Bessel functions of complex order.

pub(crate) mod bessel;
mod ddouble;
mod gamma;

pub use bessel::{
    asymptotic_coeffs, bessel_j, bessel_j_asymptotic, bessel_j_series, bessel_j_with_route, bessel_waves,
    crossover_radius, normalized_bessel_series, AsymptoticCoeffs, BesselOrder, BesselRoute, BesselWaves,
    RealBesselKernel, ASYMPTOTIC_THRESHOLD, DEFAULT_ASYMPTOTIC_TERMS, DEFAULT_SERIES_TERMS,
};
pub use gamma::{gamma_complex, near_nonpositive_integer, POLE_TOLERANCE};
