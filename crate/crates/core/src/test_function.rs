//! The cutoff `χ` and the test functions
//! `f̂_λ(ξ) = e^{-2πi|ξ|} χ(|ξ|/λ) |ξ|^{i Im α}`, evaluated in physical space as
//! `f_λ(x) = λ^{n + i Im α} ∫ ϑ(λ|x|r) e^{-2πiλr} χ(r) r^{n-1+i Im α} dr`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SmlError};
use crate::quadrature::{
    integrate_oscillatory, lp_norm_radial, panel_count, OscillatoryRule, QuadratureSpec, RadialGrid, RadialProfile,
};
use crate::radial_fourier::{MeansSpec, SphereFourierKernel};

/// Gauss nodes per panel of the profile grid.
const GRID_NODES: usize = 16;
/// Half-width of the densely sampled shell around `|x| = 1`, in units of `1/λ`.
pub const DENSE_HALF_WIDTH: f64 = 20.0;
/// Growth ratio of the geometric panels between the dense shell and `||x|-1| = 1/2`.
const GEOMETRIC_RATIO: f64 = 1.25;
/// Relative `L^p` mass allowed beyond the truncation radius.
pub const TAIL_MASS: f64 = 1e-6;
/// Decay order of the envelope used to place the truncation radius.
const ENVELOPE_ORDER: f64 = 4.0;

/// A smooth plateau bump built from the `exp(-1/t)` step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub support: (f64, f64),
    pub plateau: (f64, f64),
}

impl Default for BumpSpec {
    fn default() -> Self {
        Self { support: (0.5, 2.0), plateau: (0.75, 1.25) }
    }
}

impl BumpSpec {
    pub fn new(support: (f64, f64), plateau: (f64, f64)) -> Result<Self> {
        let ok = support.0.is_finite()
            && support.1.is_finite()
            && support.0 >= 0.0
            && support.0 < plateau.0
            && plateau.0 <= plateau.1
            && plateau.1 < support.1;
        if !ok {
            return Err(SmlError::InvalidInput(format!(
                "plateau {plateau:?} must lie in the interior of the support {support:?}"
            )));
        }
        Ok(Self { support, plateau })
    }
}

/// `exp(-1/t) / (exp(-1/t) + exp(-1/(1-t)))`, clamped to 0 and 1 outside `(0, 1)`.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// The cutoff `χ`: 1 on the plateau, 0 off the support, smooth in between.
pub fn chi(bump: &BumpSpec, r: f64) -> f64 {
    let (a, b) = bump.support;
    let (p, q) = bump.plateau;
    if r <= a || r >= b {
        0.0
    } else if r < p {
        smooth_step((r - a) / (p - a))
    } else if r <= q {
        1.0
    } else {
        smooth_step((b - r) / (b - q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    pub means: MeansSpec,
    pub lambda: f64,
    pub bump: BumpSpec,
}

impl TestFunctionSpec {
    pub fn new(means: MeansSpec, lambda: f64) -> Result<Self> {
        Self::with_bump(means, lambda, BumpSpec::default())
    }

    pub fn with_bump(means: MeansSpec, lambda: f64, bump: BumpSpec) -> Result<Self> {
        if !(lambda >= 4.0) || !lambda.is_finite() {
            return Err(SmlError::InvalidInput(format!("λ must be finite and at least 4, got {lambda}")));
        }
        Ok(Self { means, lambda, bump })
    }

    pub fn n(&self) -> u32 {
        self.means.n
    }

    /// `λ^{n + i Im α}`
    pub fn prefactor(&self) -> Complex64 {
        let n = self.means.n as f64;
        let g = self.means.im_alpha();
        Complex64::from_polar(self.lambda.powf(n), g * self.lambda.ln())
    }

    /// `e^{-2πiλr} χ(r) r^{n-1+i Im α}`: the part of the integrand that does not depend on `|x|`.
    pub fn radial_weight(&self, r: f64) -> Complex64 {
        let c = chi(&self.bump, r);
        if c == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.means.n as f64;
        let g = self.means.im_alpha();
        let phase = -2.0 * PI * self.lambda * r + g * r.ln();
        Complex64::from_polar(c * r.powf(n - 1.0), phase)
    }
}

/// `f_λ^α(x)` at `|x| = radius`.
pub fn f_lambda(spec: &TestFunctionSpec, radius: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(SmlError::Domain(format!("radius must be finite and >= 0, got {radius}")));
    }
    let theta = SphereFourierKernel::new(spec.n())?;
    let lambda = spec.lambda;
    let integral = integrate_oscillatory(
        |r| spec.radial_weight(r) * theta.eval(lambda * radius * r),
        spec.bump.support,
        2.0 * PI * lambda * (radius + 1.0),
        quad,
    )?;
    Ok(spec.prefactor() * integral)
}

/// Smallest `R >= 3/2` beyond which the envelope `λ^{(n+1)/2} |x|^{(1-n)/2} (λ||x|-1|)^{-4+(1-n)/2}`
/// carries less than [`TAIL_MASS`] of the `L^p` mass of the peak shell, for every `p >= p_min`.
pub fn truncation_radius(n: u32, lambda: f64, p_min: f64) -> f64 {
    let p = p_min.max(1.0);
    let q = p * (ENVELOPE_ORDER + (n as f64 - 1.0) / 2.0);
    let e = (n as f64 - 1.0) * (1.0 - p / 2.0);
    // Upper bound of ∫_u^∞ (1 + v/λ)^e v^{-q} dv.
    let tail = |u: f64| {
        if e <= 0.0 {
            u.powf(1.0 - q) / (q - 1.0)
        } else {
            2f64.powf(e) * (u.powf(1.0 - q) / (q - 1.0) + u.powf(1.0 + e - q) / (q - e - 1.0))
        }
    };
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    while tail(hi) >= TAIL_MASS {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) >= TAIL_MASS {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (1.0 + hi / lambda).max(1.5)
}

/// The three-way graded grid: dense shell `||x|-1| <= 20/λ` (32 nodes per `1/λ`),
/// geometric panels out to `||x|-1| = 1/2`, coarse panels elsewhere up to `outer`.
pub fn profile_grid(lambda: f64, outer: f64) -> Result<RadialGrid> {
    let half = (DENSE_HALF_WIDTH / lambda).min(0.5);
    let mut distances = vec![half];
    while *distances.last().unwrap() < 0.5 {
        let next = (distances.last().unwrap() * GEOMETRIC_RATIO).min(0.5);
        distances.push(next);
    }
    let mut breaks = Vec::new();
    let inner_panels = 8;
    for i in 0..inner_panels {
        breaks.push(0.5 * i as f64 / inner_panels as f64);
    }
    for d in distances.iter().rev() {
        breaks.push(1.0 - d);
    }
    let dense_panels = (2.0 * half * 2.0 * lambda).ceil() as usize;
    for i in 1..dense_panels {
        breaks.push(1.0 - half + 2.0 * half * i as f64 / dense_panels as f64);
    }
    for d in &distances {
        breaks.push(1.0 + d);
    }
    if outer > 1.5 {
        let panels = ((outer - 1.5) * 8.0).ceil() as usize;
        for i in 1..=panels {
            breaks.push(1.5 + (outer - 1.5) * i as f64 / panels as f64);
        }
    }
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    RadialGrid::from_breaks(&breaks, GRID_NODES)
}

/// Rounds a panel count up onto a ladder with 16 rungs per octave, so that
/// nearby radii share one quadrature rule.
fn ladder(k: usize) -> usize {
    if k <= 64 {
        return k;
    }
    let step = 1usize << (usize::BITS - 1 - k.leading_zeros() - 4);
    k.div_ceil(step) * step
}

struct PreparedRule {
    rule: OscillatoryRule,
    coarse: Vec<(f64, Complex64)>,
    fine: Vec<(f64, Complex64)>,
}

impl PreparedRule {
    fn new(spec: &TestFunctionSpec, panels: usize, quad: &QuadratureSpec) -> Result<Self> {
        let rule = OscillatoryRule::with_panels(spec.bump.support, panels, quad)?;
        let weigh = |nodes: &[f64], weights: &[f64]| -> Vec<(f64, Complex64)> {
            nodes
                .iter()
                .zip(weights)
                .map(|(r, w)| (*r, spec.radial_weight(*r) * *w))
                .filter(|(_, b)| *b != Complex64::new(0.0, 0.0))
                .collect()
        };
        let coarse = weigh(&rule.coarse.nodes, &rule.coarse.weights);
        let fine = weigh(&rule.fine.nodes, &rule.fine.weights);
        Ok(Self { rule, coarse, fine })
    }

    fn integrate(&self, theta: &SphereFourierKernel, scale: f64) -> Result<Complex64> {
        let mut coarse = Complex64::new(0.0, 0.0);
        for (r, b) in &self.coarse {
            coarse += b * theta.eval(scale * r);
        }
        let mut fine = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (r, b) in &self.fine {
            let v = b * theta.eval(scale * r);
            mag += v.re.abs() + v.im.abs();
            fine += v;
        }
        self.rule.accept(coarse, fine, mag)
    }
}

/// `f_λ` sampled on [`profile_grid`] out to the truncation radius for `p >= 1`.
pub fn f_lambda_profile(spec: &TestFunctionSpec, quad: &QuadratureSpec) -> Result<RadialProfile> {
    f_lambda_profile_for(spec, 1.0, quad)
}

/// As [`f_lambda_profile`], with the truncation radius placed for exponents `p >= p_min`.
pub fn f_lambda_profile_for(spec: &TestFunctionSpec, p_min: f64, quad: &QuadratureSpec) -> Result<RadialProfile> {
    quad.validate()?;
    let n = spec.n();
    let lambda = spec.lambda;
    let grid = profile_grid(lambda, truncation_radius(n, lambda, p_min))?;
    let len = spec.bump.support.1 - spec.bump.support.0;
    let cache: Mutex<HashMap<usize, Arc<PreparedRule>>> = Mutex::new(HashMap::new());
    let rule_for = |radius: f64| -> Result<Arc<PreparedRule>> {
        let panels = ladder(panel_count(len, 2.0 * PI * lambda * (radius + 1.0), quad));
        if let Some(r) = cache.lock().unwrap().get(&panels) {
            return Ok(Arc::clone(r));
        }
        let prepared = Arc::new(PreparedRule::new(spec, panels, quad)?);
        Ok(Arc::clone(cache.lock().unwrap().entry(panels).or_insert(prepared)))
    };
    let prefactor = spec.prefactor();
    let theta = SphereFourierKernel::new(n)?;
    let values = grid
        .radii()
        .par_iter()
        .map(|&radius| {
            let rule = rule_for(radius)?;
            Ok(prefactor * rule.integrate(&theta, lambda * radius)?)
        })
        .collect::<Result<Vec<_>>>()?;
    RadialProfile::new(grid, values)
}

/// `‖f_λ^α‖_{L^p(ℝⁿ)}`.
pub fn f_lambda_lp_norm(spec: &TestFunctionSpec, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(SmlError::InvalidInput(format!("p must be at least 1, got {p}")));
    }
    let profile = f_lambda_profile_for(spec, p, quad)?;
    lp_norm_radial(&profile, p, spec.n())
}
