use num_complex::Complex64;

use super::gauss::CompositeRule;
use crate::error::{Result, SmlError};
use crate::radial_fourier::sphere_area;

/// Radii with quadrature weights of a composite Gauss rule.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    radii: Vec<f64>,
    weights: Vec<f64>,
    start: f64,
    end: f64,
}

impl RadialGrid {
    /// Composite Gauss-Legendre rule over the panels `breaks[i]..breaks[i+1]`.
    pub fn from_breaks(breaks: &[f64], nodes_per_panel: usize) -> Result<Self> {
        if breaks.len() < 2 || breaks[0] < 0.0 || breaks.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(SmlError::InvalidInput("grid breakpoints must be nonnegative and strictly increasing".into()));
        }
        let rule = CompositeRule::from_breaks(breaks, nodes_per_panel);
        Self::new(rule.nodes, rule.weights, breaks[0], breaks[breaks.len() - 1])
    }

    /// Checks the invariants: strictly increasing radii inside `[start, end]`,
    /// positive weights summing to `end - start`.
    pub fn new(radii: Vec<f64>, weights: Vec<f64>, start: f64, end: f64) -> Result<Self> {
        if radii.len() != weights.len() || radii.is_empty() {
            return Err(SmlError::InvalidInput("radii and weights must be nonempty and equally long".into()));
        }
        if radii.windows(2).any(|p| !(p[0] < p[1])) || radii[0] < start || radii[radii.len() - 1] > end {
            return Err(SmlError::InvalidInput("radii must increase strictly within the interval".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(SmlError::InvalidInput("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        let len = end - start;
        if ((total - len) / len).abs() > 1e-12 {
            return Err(SmlError::InvalidInput(format!("weights sum to {total}, interval length is {len}")));
        }
        Ok(Self { radii, weights, start, end })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.start, self.end)
    }
}

/// Samples of a radial function on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub grid: RadialGrid,
    pub values: Vec<Complex64>,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(SmlError::InvalidInput("profile has the wrong number of samples".into()));
        }
        Ok(Self { grid, values })
    }

    /// Sample the function `f` on `grid`.
    pub fn sample(grid: RadialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.radii().iter().map(|&r| f(r)).collect();
        Self { grid, values }
    }

    /// `(radius, |value|)` of the largest sample.
    pub fn peak(&self) -> (f64, f64) {
        self.grid.radii().iter().zip(&self.values).map(|(r, v)| (*r, v.norm())).fold((0.0, -1.0), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
    }

    /// CSV with columns `radius,re,im,abs`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,re,im,abs\n");
        for (r, v) in self.grid.radii().iter().zip(&self.values) {
            out.push_str(&crate::output::csv_row(&[*r, v.re, v.im, v.norm()]));
        }
        out
    }
}

/// `‖f‖_{L^p(ℝⁿ)} = (ω_{n-1} ∫ |f(ρ)|^p ρ^{n-1} dρ)^{1/p}` for a radial `f`.
pub fn lp_norm_radial(profile: &RadialProfile, p: f64, n: u32) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(SmlError::InvalidInput(format!("p must be finite and >= 1, got {p}")));
    }
    let area = sphere_area(n)?;
    let dim = n as i32 - 1;
    let integral: f64 = profile
        .grid
        .radii()
        .iter()
        .zip(profile.grid.weights())
        .zip(&profile.values)
        .map(|((r, w), v)| w * v.norm().powf(p) * r.powi(dim))
        .sum();
    Ok((area * integral).powf(1.0 / p))
}
