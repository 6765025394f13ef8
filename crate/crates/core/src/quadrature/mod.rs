//! Composite Gauss rules, oscillatory integration and radial `L^p` norms.

mod gauss;
mod grid;
mod oscillatory;

pub use gauss::{gauss_legendre, CompositeRule};
pub use grid::{lp_norm_radial, RadialGrid, RadialProfile};
pub use oscillatory::{integrate_oscillatory, panel_count, OscillatoryRule, QuadratureSpec, ROUNDOFF_FLOOR};
