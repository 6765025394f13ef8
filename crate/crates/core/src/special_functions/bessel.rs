//! Bessel functions of the first kind `J_β(r)` for complex order β and
//! real argument `r >= 0`.
//!
//! Two independent routes are provided:
//!
//! * the power series `Σ_j (-1)^j / (j! Γ(j+β+1)) (r/2)^{2j+β}`, summed in
//!   double-double arithmetic so that the cancellation for moderately large
//!   `r` does not destroy the result;
//! * the two-wave asymptotic form
//!   `J_β(r) = r^{-1/2} e^{ir} [b0 + E1(r)] + r^{-1/2} e^{-ir} [d0 + E2(r)]`
//!   with `b0 = (2π)^{-1/2} e^{-i(βπ/2 + π/4)}`, `d0 = (2π)^{-1/2} e^{+i(βπ/2 + π/4)}`
//!   and `E1`, `E2` the truncated Hankel correction series.
//!
//! [`bessel_j`] dispatches between them at [`crossover_radius`]. All complex
//! powers use the principal branch.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::ddouble::{ComplexDD, DoubleDouble};
use super::gamma::{gamma_complex, near_nonpositive_integer, POLE_TOLERANCE};
use crate::error::{Result, SmlError};

/// Smallest argument accepted by the asymptotic route.
pub const ASYMPTOTIC_THRESHOLD: f64 = 1.0;

pub const DEFAULT_SERIES_TERMS: usize = 600;
pub const DEFAULT_ASYMPTOTIC_TERMS: usize = 120;

const SERIES_STOP: f64 = 1e-16;
const ASYMPTOTIC_STOP: f64 = 1e-17;

/// A validated (finite) Bessel order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(Complex64);

impl BesselOrder {
    pub fn new(beta: Complex64) -> Result<Self> {
        if beta.re.is_finite() && beta.im.is_finite() {
            Ok(Self(beta))
        } else {
            Err(SmlError::InvalidInput(format!("Bessel order {beta} is not finite")))
        }
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    /// `Some(m)` when the order is the negative integer `-m`.
    fn negative_integer(self) -> Option<u32> {
        match near_nonpositive_integer(self.0, POLE_TOLERANCE) {
            Some(k) if k < 0 => Some((-k) as u32),
            _ => None,
        }
    }
}

/// Which evaluation route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselRoute {
    Auto,
    Series,
    Asymptotic,
}

/// Leading coefficients and correction coefficients of the two-wave form.
///
/// `E1(r) ≈ Σ_k b_k r^{-k}` and `E2(r) ≈ Σ_k d_k r^{-k}` where
/// `correction_terms[k-1] = (b_k, d_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticCoeffs {
    pub b0: Complex64,
    pub d0: Complex64,
    pub correction_terms: Vec<(Complex64, Complex64)>,
}

/// The two wave amplitudes at a given argument:
/// `J_β(r) = r^{-1/2} (e^{ir} outgoing + e^{-ir} incoming)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselWaves {
    /// `b0 + E1(r)`
    pub outgoing: Complex64,
    /// `d0 + E2(r)`
    pub incoming: Complex64,
}

impl BesselWaves {
    pub fn value(&self, r: f64) -> Complex64 {
        let e = Complex64::new(r.cos(), r.sin());
        (e * self.outgoing + e.conj() * self.incoming) / r.sqrt()
    }
}

/// Radius at which [`bessel_j`] switches from the series to the asymptotic route.
pub fn crossover_radius(beta: Complex64) -> f64 {
    12f64.max(beta.norm_sqr())
}

fn leading_pair(beta: Complex64) -> (Complex64, Complex64) {
    let phase = beta * FRAC_PI_2 + FRAC_PI_4;
    let scale = 1.0 / (2.0 * PI).sqrt();
    let i = Complex64::i();
    ((-i * phase).exp() * scale, (i * phase).exp() * scale)
}

/// `b0`, `d0` and the first `num_terms` correction coefficients.
pub fn asymptotic_coeffs(beta: Complex64, num_terms: usize) -> Result<AsymptoticCoeffs> {
    let beta = BesselOrder::new(beta)?.value();
    let (b0, d0) = leading_pair(beta);
    let mu = 4.0 * beta * beta;
    let mut a = Complex64::new(1.0, 0.0);
    let mut ik = Complex64::new(1.0, 0.0);
    let mut correction_terms = Vec::with_capacity(num_terms);
    for k in 1..=num_terms {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (8.0 * k as f64);
        ik *= Complex64::i();
        correction_terms.push((b0 * a * ik, d0 * a * ik.conj()));
    }
    Ok(AsymptoticCoeffs { b0, d0, correction_terms })
}

/// Sums `Σ_j (-x)^j / (j! (β+1)_j)` with `x = (z/2)^2`, in double-double arithmetic.
fn pochhammer_series(beta: Complex64, z: f64, max_terms: usize) -> Result<Complex64> {
    let half = DoubleDouble::from_f64(z / 2.0);
    let xm = half.mul(half);
    let mut term = ComplexDD::from_complex(Complex64::new(1.0, 0.0));
    let mut sum = term;
    let shift = ComplexDD::from_complex(beta);
    for j in 1..max_terms {
        let jj = DoubleDouble::from_f64(j as f64);
        let den = ComplexDD { re: shift.re.add(jj), im: shift.im }.scale(jj);
        term = term.scale(xm.neg()).div(den);
        sum = sum.add(term);
        let t = term.norm_f64();
        let s = sum.norm_f64();
        if t <= SERIES_STOP * s || t == 0.0 {
            return Ok(sum.to_complex());
        }
    }
    Err(SmlError::NonConvergence(format!(
        "Bessel series for order {beta} at r = {z} did not converge in {max_terms} terms"
    )))
}

/// The entire function `J_β(z) / (z/2)^β = Σ_j (-1)^j (z/2)^{2j} / (j! Γ(j+β+1))`.
///
/// Used where the removable singularity of `z^{-β} J_β(z)` at the origin has
/// to be evaluated.
pub fn normalized_bessel_series(beta: Complex64, z: f64, max_terms: usize) -> Result<Complex64> {
    let order = BesselOrder::new(beta)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(SmlError::Domain(format!("argument {z} must be finite and nonnegative")));
    }
    if let Some(m) = order.negative_integer() {
        // J_{-m} = (-1)^m J_m, so the normalized series picks up (z/2)^{2m}.
        let pos = Complex64::new(m as f64, 0.0);
        let inner = normalized_bessel_series(pos, z, max_terms)?;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(inner * sign * (z / 2.0).powi(2 * m as i32));
    }
    let sum = pochhammer_series(beta, z, max_terms)?;
    Ok(sum / gamma_complex(beta + 1.0)?)
}

/// Partial sum of the defining power series.
pub fn bessel_j_series(beta: Complex64, r: f64, max_terms: usize) -> Result<Complex64> {
    let order = BesselOrder::new(beta)?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(SmlError::Domain(format!("Bessel argument {r} must be finite and nonnegative")));
    }
    if let Some(m) = order.negative_integer() {
        let v = bessel_j_series(Complex64::new(m as f64, 0.0), r, max_terms)?;
        return Ok(if m % 2 == 0 { v } else { -v });
    }
    if r == 0.0 {
        if beta == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(1.0, 0.0));
        }
        if beta.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(SmlError::Domain(format!("J_β(0) diverges or is undefined for order {beta} with Re β <= 0")));
    }
    let normalized = normalized_bessel_series(beta, r, max_terms)?;
    let lead = Complex64::new(r / 2.0, 0.0).powc(beta);
    Ok(lead * normalized)
}

/// Sums the Hankel correction series, returning `(1 + Σ i^k a_k r^{-k}, 1 + Σ (-i)^k a_k r^{-k})`.
fn correction_sums(beta: Complex64, r: f64, num_terms: usize) -> (Complex64, Complex64) {
    let mu = 4.0 * beta * beta;
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev = 1.0;
    let mut ik = Complex64::new(1.0, 0.0);
    let mut p1 = Complex64::new(1.0, 0.0);
    let mut p2 = Complex64::new(1.0, 0.0);
    for k in 1..=num_terms {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (8.0 * k as f64 * r);
        let mag = next.norm();
        // Optimal truncation: stop before the terms start growing.
        if mag == 0.0 || mag > prev {
            break;
        }
        term = next;
        ik *= Complex64::i();
        p1 += term * ik;
        p2 += term * ik.conj();
        prev = mag;
        if mag < ASYMPTOTIC_STOP * p1.norm().min(p2.norm()) {
            break;
        }
    }
    (p1, p2)
}

/// Wave amplitudes `b0 + E1(r)` and `d0 + E2(r)` for `r >= 1`.
pub fn bessel_waves(beta: Complex64, r: f64, num_terms: usize) -> Result<BesselWaves> {
    let beta = BesselOrder::new(beta)?.value();
    if !(r >= ASYMPTOTIC_THRESHOLD) || !r.is_finite() {
        return Err(SmlError::Domain(format!("asymptotic Bessel form needs r >= {ASYMPTOTIC_THRESHOLD}, got {r}")));
    }
    let (b0, d0) = leading_pair(beta);
    let (p1, p2) = correction_sums(beta, r, num_terms);
    Ok(BesselWaves { outgoing: b0 * p1, incoming: d0 * p2 })
}

/// The two-wave asymptotic form truncated after at most `num_correction_terms`.
pub fn bessel_j_asymptotic(beta: Complex64, r: f64, num_correction_terms: usize) -> Result<Complex64> {
    Ok(bessel_waves(beta, r, num_correction_terms)?.value(r))
}

/// Real-order Bessel evaluator with the asymptotic ratios precomputed.
///
/// Above the crossover it evaluates `√(2/(πr)) (P cos ω − Q sin ω)`,
/// `ω = r − (ν/2 + 1/4)π`, with multiplications only; below it defers to
/// the double-double series.
#[derive(Debug, Clone)]
pub struct RealBesselKernel {
    nu: f64,
    ratios: Vec<f64>,
    crossover: f64,
    phase_shift: f64,
}

impl RealBesselKernel {
    pub fn new(nu: f64) -> Self {
        let mu = 4.0 * nu * nu;
        let ratios = (1..=DEFAULT_ASYMPTOTIC_TERMS)
            .map(|k| {
                let odd = (2 * k - 1) as f64;
                (mu - odd * odd) / (8.0 * k as f64)
            })
            .collect();
        Self { nu, ratios, crossover: crossover_radius(Complex64::new(nu, 0.0)), phase_shift: (nu * 0.5 + 0.25) * PI }
    }

    pub fn order(&self) -> f64 {
        self.nu
    }

    /// `J_ν(r)`; NaN for arguments outside the domain.
    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        if r >= self.crossover && r.is_finite() {
            self.asymptotic(r)
        } else {
            bessel_j_series(Complex64::new(self.nu, 0.0), r, DEFAULT_SERIES_TERMS).map(|v| v.re).unwrap_or(f64::NAN)
        }
    }

    #[inline]
    fn asymptotic(&self, r: f64) -> f64 {
        real_asymptotic_with(|k| self.ratios[k], self.ratios.len(), self.phase_shift, r)
    }
}

/// Sums the real Hankel expansion; `ratio(k)` is `a_{k+1} / a_k`.
#[inline]
fn real_asymptotic_with(ratio: impl Fn(usize) -> f64, terms: usize, phase_shift: f64, r: f64) -> f64 {
    let inv = 1.0 / r;
    let mut term = 1.0;
    let mut prev = 1.0;
    let mut p = 1.0;
    let mut q = 0.0;
    for k in 0..terms {
        let next = term * ratio(k) * inv;
        let mag = next.abs();
        if mag == 0.0 || mag > prev {
            break;
        }
        term = next;
        // i^k a_k r^{-k}: even k feed P with sign (-1)^{k/2}, odd k feed Q.
        match (k + 1) % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        prev = mag;
        if mag < ASYMPTOTIC_STOP * p.abs().max(q.abs()) {
            break;
        }
    }
    let (s, c) = (r - phase_shift).sin_cos();
    (2.0 * inv / PI).sqrt() * (p * c - q * s)
}

fn real_asymptotic(nu: f64, r: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let ratio = |k: usize| {
        let odd = (2 * k + 1) as f64;
        (mu - odd * odd) / (8.0 * (k + 1) as f64)
    };
    real_asymptotic_with(ratio, DEFAULT_ASYMPTOTIC_TERMS, (nu * 0.5 + 0.25) * PI, r)
}

/// `J_ν(r)` for real order; same routes as [`bessel_j`] but with real
/// arithmetic on the asymptotic side.
pub(crate) fn bessel_j_real(nu: f64, r: f64) -> Result<f64> {
    let beta = Complex64::new(nu, 0.0);
    if r >= crossover_radius(beta) && r.is_finite() {
        Ok(real_asymptotic(nu, r))
    } else {
        Ok(bessel_j(beta, r)?.re)
    }
}

/// Evaluates `J_β(r)` on an explicit route.
pub fn bessel_j_with_route(beta: Complex64, r: f64, route: BesselRoute) -> Result<Complex64> {
    match route {
        BesselRoute::Auto => bessel_j(beta, r),
        BesselRoute::Series => bessel_j_series(beta, r, DEFAULT_SERIES_TERMS),
        BesselRoute::Asymptotic => bessel_j_asymptotic(beta, r, DEFAULT_ASYMPTOTIC_TERMS),
    }
}

/// `J_β(r)` for `r >= 0`: series below [`crossover_radius`], asymptotic above.
pub fn bessel_j(beta: Complex64, r: f64) -> Result<Complex64> {
    let beta = BesselOrder::new(beta)?.value();
    if !(r >= 0.0) || !r.is_finite() {
        return Err(SmlError::Domain(format!("Bessel argument {r} must be finite and nonnegative")));
    }
    if r < crossover_radius(beta) {
        bessel_j_series(beta, r, DEFAULT_SERIES_TERMS)
    } else if beta.im == 0.0 {
        Ok(Complex64::new(real_asymptotic(beta.re, r), 0.0))
    } else {
        bessel_j_asymptotic(beta, r, DEFAULT_ASYMPTOTIC_TERMS)
    }
}
