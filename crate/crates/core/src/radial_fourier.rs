//! The Fourier transform of the sphere surface measure and the multiplier
//! `m^α` of the generalized spherical means, both as functions of `|ξ|`.
//!
//! * `ϑ(s) = d̂σ(s e₁) = 2π s^{(2-n)/2} J_{(n-2)/2}(2πs)`
//! * `m^α(s) = π^{1-α} s^{1-n/2-α} J_{n/2+α-1}(2πs)`
//!
//! Below [`S_MIN`] both use the normalized power series so that the
//! removable singularity at `s = 0` is evaluated without cancellation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SmlError};
use crate::special_functions::{
    bessel_j, bessel_waves, gamma_complex, near_nonpositive_integer, normalized_bessel_series, RealBesselKernel,
    DEFAULT_ASYMPTOTIC_TERMS, DEFAULT_SERIES_TERMS,
};

/// Switch to the series evaluation of the removable singularity below this `s`.
pub const S_MIN: f64 = 1e-3;

const MULTIPLIER_POLE_TOL: f64 = 1e-12;

/// Order α and dimension n of the means `A_t^α` on `ℝⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeansSpec {
    pub alpha: Complex64,
    pub n: u32,
}

impl MeansSpec {
    pub fn new(alpha: Complex64, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(SmlError::InvalidInput(format!("dimension must be at least 2, got {n}")));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(SmlError::InvalidInput(format!("α = {alpha} is not finite")));
        }
        Ok(Self { alpha, n })
    }

    pub fn real(alpha: f64, n: u32) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), n)
    }

    pub fn re_alpha(&self) -> f64 {
        self.alpha.re
    }

    pub fn im_alpha(&self) -> f64 {
        self.alpha.im
    }

    /// Order of the Bessel function in `m^α`: `n/2 + α - 1`.
    pub fn multiplier_order(&self) -> Complex64 {
        self.alpha + (self.n as f64 / 2.0 - 1.0)
    }

    /// Order of the Bessel function in `ϑ`: `(n - 2)/2`.
    pub fn sphere_order(&self) -> f64 {
        sphere_order(self.n)
    }
}

fn sphere_order(n: u32) -> f64 {
    (n as f64 - 2.0) / 2.0
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 2 {
        Err(SmlError::InvalidInput(format!("dimension must be at least 2, got {n}")))
    } else {
        Ok(())
    }
}

fn check_radius(s: f64) -> Result<()> {
    if !(s >= 0.0) || !s.is_finite() {
        Err(SmlError::Domain(format!("radial variable must be finite and >= 0, got {s}")))
    } else {
        Ok(())
    }
}

/// Surface area `ω_{n-1} = 2π^{n/2} / Γ(n/2)` of the unit sphere in `ℝⁿ`.
pub fn sphere_area(n: u32) -> Result<f64> {
    check_dimension(n)?;
    let g = gamma_complex(Complex64::new(n as f64 / 2.0, 0.0))?;
    Ok(2.0 * PI.powf(n as f64 / 2.0) / g.re)
}

/// `ϑ(s)`, the Fourier transform of the unit-sphere surface measure at `|ξ| = s`.
pub fn sphere_fourier(n: u32, s: f64) -> Result<Complex64> {
    Ok(Complex64::new(sphere_fourier_re(n, s)?, 0.0))
}

/// Real-valued form of [`sphere_fourier`] used in inner loops.
pub fn sphere_fourier_re(n: u32, s: f64) -> Result<f64> {
    check_dimension(n)?;
    check_radius(s)?;
    let beta = sphere_order(n);
    if s < S_MIN {
        let series = normalized_bessel_series(Complex64::new(beta, 0.0), 2.0 * PI * s, DEFAULT_SERIES_TERMS)?;
        return Ok(2.0 * PI.powf(n as f64 / 2.0) * series.re);
    }
    let j = crate::special_functions::bessel::bessel_j_real(beta, 2.0 * PI * s)?;
    Ok(2.0 * PI * s.powf(-beta) * j)
}

/// Precomputed evaluator of `ϑ` for inner loops.
#[derive(Debug, Clone)]
pub struct SphereFourierKernel {
    n: u32,
    bessel: RealBesselKernel,
}

impl SphereFourierKernel {
    pub fn new(n: u32) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { n, bessel: RealBesselKernel::new(sphere_order(n)) })
    }

    /// `ϑ(s)`; NaN outside `s >= 0`.
    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        if s < S_MIN {
            return sphere_fourier_re(self.n, s).unwrap_or(f64::NAN);
        }
        let radial = match self.n {
            2 => 1.0,
            3 => 1.0 / s.sqrt(),
            _ => s.powf(-self.bessel.order()),
        };
        2.0 * PI * radial * self.bessel.eval(2.0 * PI * s)
    }
}

/// Wave amplitudes of `ϑ(s) = A e^{2πis} + B e^{-2πis}` for `2πs >= 1`.
///
/// With `leading_only` the Bessel corrections are dropped, leaving the
/// leading-order two-wave form.
pub fn sphere_fourier_waves(n: u32, s: f64, leading_only: bool) -> Result<(Complex64, Complex64)> {
    check_dimension(n)?;
    let beta = sphere_order(n);
    let terms = if leading_only { 0 } else { DEFAULT_ASYMPTOTIC_TERMS };
    let w = bessel_waves(Complex64::new(beta, 0.0), 2.0 * PI * s, terms)?;
    let scale = 2.0 * PI * s.powf(-beta) / (2.0 * PI * s).sqrt();
    Ok((w.outgoing * scale, w.incoming * scale))
}

fn check_multiplier_pole(spec: &MeansSpec) -> Result<()> {
    let shifted = spec.alpha + spec.n as f64 / 2.0;
    if let Some(k) = near_nonpositive_integer(shifted, MULTIPLIER_POLE_TOL) {
        return Err(SmlError::Pole(format!("n/2 + α = {shifted} sits at the gamma pole {k}; m^α(0) is undefined")));
    }
    Ok(())
}

/// The multiplier `m^α(s)` of `A_1^α`.
pub fn multiplier_m(spec: &MeansSpec, s: f64) -> Result<Complex64> {
    check_radius(s)?;
    check_multiplier_pole(spec)?;
    let nu = spec.multiplier_order();
    if s < S_MIN {
        let series = normalized_bessel_series(nu, 2.0 * PI * s, DEFAULT_SERIES_TERMS)?;
        return Ok(series * PI.powf(spec.n as f64 / 2.0));
    }
    let j = bessel_j(nu, 2.0 * PI * s)?;
    Ok(pi_power(1.0 - spec.alpha) * real_power(s, -nu) * j)
}

/// Wave amplitudes of `m^α(s) = P e^{2πis} + Q e^{-2πis}` for `2πs >= 1`.
pub fn multiplier_waves(spec: &MeansSpec, s: f64, leading_only: bool) -> Result<(Complex64, Complex64)> {
    check_multiplier_pole(spec)?;
    let nu = spec.multiplier_order();
    let terms = if leading_only { 0 } else { DEFAULT_ASYMPTOTIC_TERMS };
    let w = bessel_waves(nu, 2.0 * PI * s, terms)?;
    let scale = pi_power(1.0 - spec.alpha) * real_power(s, -nu) / (2.0 * PI * s).sqrt();
    Ok((w.outgoing * scale, w.incoming * scale))
}

/// `m^α(0) = π^{n/2} / Γ(n/2 + α)`.
pub fn multiplier_at_origin(spec: &MeansSpec) -> Result<Complex64> {
    check_multiplier_pole(spec)?;
    Ok(PI.powf(spec.n as f64 / 2.0) / gamma_complex(spec.alpha + spec.n as f64 / 2.0)?)
}

/// `π^z` on the principal branch.
pub(crate) fn pi_power(z: Complex64) -> Complex64 {
    (z * PI.ln()).exp()
}

/// `x^z` for `x > 0` on the principal branch.
pub(crate) fn real_power(x: f64, z: Complex64) -> Complex64 {
    (z * x.ln()).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub s: f64,
    pub abs_m: f64,
    /// `|m^α(s)| s^{(n-1)/2 + Re α}`
    pub normalized: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayTable {
    pub rows: Vec<DecayRow>,
    pub median: f64,
}

impl DecayTable {
    pub fn any_flagged(&self) -> bool {
        self.rows.iter().any(|r| r.flagged)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,abs_m,normalized,flagged\n");
        for r in &self.rows {
            let mut line = crate::output::csv_row(&[r.s, r.abs_m, r.normalized]);
            line.pop();
            line.push_str(if r.flagged { ",1\n" } else { ",0\n" });
            out.push_str(&line);
        }
        out
    }
}

/// Tabulates `|m^α(s)| s^{(n-1)/2 + Re α}` and flags rows exceeding twice the median.
pub fn multiplier_decay_check(spec: &MeansSpec, s_grid: &[f64]) -> Result<DecayTable> {
    if s_grid.is_empty() || s_grid[0] <= 0.0 || s_grid.windows(2).any(|p| !(p[0] < p[1])) {
        return Err(SmlError::InvalidInput("s grid must be positive and strictly increasing".into()));
    }
    let power = (spec.n as f64 - 1.0) / 2.0 + spec.re_alpha();
    let mut rows = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let abs_m = multiplier_m(spec, s)?.norm();
        rows.push(DecayRow { s, abs_m, normalized: abs_m * s.powf(power), flagged: false });
    }
    let mut sorted: Vec<f64> = rows.iter().map(|r| r.normalized).collect();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 { sorted[mid] } else { 0.5 * (sorted[mid - 1] + sorted[mid]) };
    for r in &mut rows {
        r.flagged = r.normalized > 2.0 * median;
    }
    Ok(DecayTable { rows, median })
}
