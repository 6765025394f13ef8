//! λ-sweeps, log-log exponent fits and the assembly of the two necessary
//! conditions on `Re α`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SmlError};
use crate::output::{csv_row, fmt_f64};
use crate::quadrature::{lp_norm_radial, CompositeRule, QuadratureSpec, RadialProfile};
use crate::radial_fourier::{sphere_area, MeansSpec};
use crate::spherical_means::mean_multiplier_route;
use crate::test_function::{f_lambda_profile_for, TestFunctionSpec};

pub const LAMBDA_MIN: f64 = 64.0;
pub const LAMBDA_MAX: f64 = 4096.0;
pub const MIN_R_SQUARED: f64 = 0.99;
pub const DEFAULT_C0: f64 = 0.05;
pub const DEFAULT_FAR_RADIUS: f64 = 2.0;
/// Gauss nodes on `[0, c₀/λ]`; the mean is nearly constant there.
const NEAR_ORIGIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Quantity {
    TestfnLpNorm,
    MeanAtOrigin,
    MeanTunedFar,
    MeanLpNearOrigin,
}

impl Quantity {
    pub const ALL: [Quantity; 4] =
        [Quantity::TestfnLpNorm, Quantity::MeanAtOrigin, Quantity::MeanTunedFar, Quantity::MeanLpNearOrigin];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::TestfnLpNorm => "TESTFN_LP_NORM",
            Quantity::MeanAtOrigin => "MEAN_AT_ORIGIN",
            Quantity::MeanTunedFar => "MEAN_TUNED_FAR",
            Quantity::MeanLpNearOrigin => "MEAN_LP_NEAR_ORIGIN",
        }
    }

    pub fn needs_p(self) -> bool {
        matches!(self, Quantity::TestfnLpNorm | Quantity::MeanLpNearOrigin)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = SmlError;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == norm)
            .ok_or_else(|| SmlError::InvalidInput(format!("unknown quantity {s:?}")))
    }
}

/// Geometry of the sweeps. `t = None` means the tuned time `radius + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGeometry {
    pub far_radius: f64,
    pub t: Option<f64>,
    pub c0: f64,
}

impl Default for SweepGeometry {
    fn default() -> Self {
        Self { far_radius: DEFAULT_FAR_RADIUS, t: None, c0: DEFAULT_C0 }
    }
}

impl SweepGeometry {
    pub fn far_time(&self) -> f64 {
        self.t.unwrap_or(self.far_radius + 1.0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.far_radius > 0.0 && self.far_radius.is_finite()) {
            return Err(SmlError::InvalidInput(format!("radius must be positive, got {}", self.far_radius)));
        }
        if !(self.far_time() > 0.0 && self.far_time().is_finite()) {
            return Err(SmlError::InvalidInput(format!("t must be positive, got {}", self.far_time())));
        }
        if !(self.c0 > 0.0 && self.c0.is_finite()) {
            return Err(SmlError::InvalidInput(format!("c0 must be positive, got {}", self.c0)));
        }
        Ok(())
    }
}

/// Least-squares line through `(ln λ, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_power_law(lambdas: &[f64], values: &[f64]) -> Result<PowerLaw> {
    if lambdas.len() != values.len() {
        return Err(SmlError::InvalidInput("lambdas and values differ in length".into()));
    }
    if lambdas.len() < 2 {
        return Err(SmlError::InvalidInput(format!("a fit needs at least 2 points, got {}", lambdas.len())));
    }
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) || lambdas[0] <= 0.0 {
        return Err(SmlError::InvalidInput("lambdas must be positive and strictly increasing".into()));
    }
    if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(SmlError::FitRejected(format!("values must be finite and positive: {values:?}")));
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    // A perfectly flat series is a perfect fit.
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) };
    Ok(PowerLaw { slope, intercept, r_squared })
}

/// A fitted growth exponent next to its predicted value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub quantity: Quantity,
    pub n: u32,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub p: Option<f64>,
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub predicted: f64,
    pub delta: f64,
    pub r_squared: f64,
}

pub const FIT_CSV_HEADER: &str = "quantity,n,alpha_re,alpha_im,p,lambda,value,slope,predicted,delta,r_squared\n";

impl ScalingFit {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit serializes") + "\n"
    }

    /// One row per λ; the fit columns repeat.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(FIT_CSV_HEADER);
        let p = self.p.map(fmt_f64).unwrap_or_default();
        for (l, v) in self.lambdas.iter().zip(&self.values) {
            out.push_str(&format!("{},{},", self.quantity, self.n));
            out.push_str(&format!("{},{},{},", fmt_f64(self.alpha_re), fmt_f64(self.alpha_im), p));
            out.push_str(&csv_row(&[*l, *v, self.slope, self.predicted, self.delta, self.r_squared]));
        }
        out
    }
}

fn require_p(quantity: Quantity, p: Option<f64>) -> Result<Option<f64>> {
    if !quantity.needs_p() {
        return Ok(p);
    }
    let p = p.ok_or(SmlError::MissingParameter("p"))?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(SmlError::InvalidInput(format!("p must be finite and >= 1, got {p}")));
    }
    Ok(Some(p))
}

/// The exponent each quantity is predicted to grow with.
pub fn predicted_exponent(quantity: Quantity, spec: &MeansSpec, p: Option<f64>) -> Result<f64> {
    let p = require_p(quantity, p)?;
    let n = spec.n as f64;
    let a = spec.re_alpha();
    Ok(match quantity {
        Quantity::TestfnLpNorm => (n + 1.0) / 2.0 - 1.0 / p.unwrap(),
        Quantity::MeanAtOrigin => (n + 1.0) / 2.0 - a,
        Quantity::MeanTunedFar => 1.0 - a,
        Quantity::MeanLpNearOrigin => (n + 1.0) / 2.0 - a - n / p.unwrap(),
    })
}

fn validate_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.len() < 2 {
        return Err(SmlError::InvalidInput(format!("a sweep needs at least 2 lambdas, got {}", lambdas.len())));
    }
    if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SmlError::InvalidInput("lambdas must be strictly increasing".into()));
    }
    if let Some(bad) = lambdas.iter().find(|l| !(**l >= LAMBDA_MIN && **l <= LAMBDA_MAX)) {
        return Err(SmlError::InvalidInput(format!("lambda {bad} outside [{LAMBDA_MIN}, {LAMBDA_MAX}]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct ProfileKey {
    n: u32,
    gamma: u64,
    lambda: u64,
    p_min: u64,
}

/// Runs sweeps with a fixed quadrature spec, caching `f_λ` profiles so that
/// several exponents `p` share one expensive evaluation.
pub struct ScalingLab {
    quad: QuadratureSpec,
    geometry: SweepGeometry,
    profiles: Mutex<HashMap<ProfileKey, Arc<RadialProfile>>>,
}

impl ScalingLab {
    pub fn new(quad: QuadratureSpec, geometry: SweepGeometry) -> Result<Self> {
        quad.validate()?;
        geometry.validate()?;
        Ok(Self { quad, geometry, profiles: Mutex::new(HashMap::new()) })
    }

    pub fn quad(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn geometry(&self) -> &SweepGeometry {
        &self.geometry
    }

    fn profile(&self, spec: &MeansSpec, lambda: f64, p: f64) -> Result<Arc<RadialProfile>> {
        // Truncation only depends on the smallest exponent used; 2 covers the
        // usual sweeps and keeps one profile per (n, γ, λ).
        let p_min = p.min(2.0);
        let key = ProfileKey {
            n: spec.n,
            gamma: spec.im_alpha().to_bits(),
            lambda: lambda.to_bits(),
            p_min: p_min.to_bits(),
        };
        if let Some(hit) = self.profiles.lock().unwrap().get(&key) {
            return Ok(Arc::clone(hit));
        }
        let tf = TestFunctionSpec::new(*spec, lambda)?;
        let profile = Arc::new(f_lambda_profile_for(&tf, p_min, &self.quad)?);
        Ok(Arc::clone(self.profiles.lock().unwrap().entry(key).or_insert(profile)))
    }

    /// `(∫_{|x| ≤ c₀/λ} |A_1^α f_λ|^p dx)^{1/p}`.
    fn near_origin_norm(&self, spec: &MeansSpec, lambda: f64, p: f64) -> Result<f64> {
        let tf = TestFunctionSpec::new(*spec, lambda)?;
        let rule = CompositeRule::uniform(0.0, self.geometry.c0 / lambda, 1, NEAR_ORIGIN_NODES);
        let dim = spec.n as i32 - 1;
        let terms = rule
            .nodes
            .par_iter()
            .zip(&rule.weights)
            .map(|(&rho, &w)| {
                let v = mean_multiplier_route(spec, 1.0, &tf, rho, &self.quad)?;
                Ok(w * v.norm().powf(p) * rho.powi(dim))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((sphere_area(spec.n)? * terms.iter().sum::<f64>()).powf(1.0 / p))
    }

    /// The quantity at one λ.
    pub fn measure(&self, quantity: Quantity, spec: &MeansSpec, p: Option<f64>, lambda: f64) -> Result<f64> {
        let p = require_p(quantity, p)?;
        match quantity {
            Quantity::TestfnLpNorm => {
                let p = p.unwrap();
                lp_norm_radial(&*self.profile(spec, lambda, p)?, p, spec.n)
            }
            Quantity::MeanAtOrigin => {
                let tf = TestFunctionSpec::new(*spec, lambda)?;
                Ok(mean_multiplier_route(spec, 1.0, &tf, 0.0, &self.quad)?.norm())
            }
            Quantity::MeanTunedFar => {
                let tf = TestFunctionSpec::new(*spec, lambda)?;
                let g = &self.geometry;
                Ok(mean_multiplier_route(spec, g.far_time(), &tf, g.far_radius, &self.quad)?.norm())
            }
            Quantity::MeanLpNearOrigin => self.near_origin_norm(spec, lambda, p.unwrap()),
        }
    }

    pub fn run(&self, quantity: Quantity, spec: &MeansSpec, p: Option<f64>, lambdas: &[f64]) -> Result<ScalingFit> {
        let predicted = predicted_exponent(quantity, spec, p)?;
        validate_lambdas(lambdas)?;
        // Profiles parallelize internally; the cheap mean sweeps parallelize over λ.
        let values = if quantity == Quantity::TestfnLpNorm {
            lambdas.iter().map(|&l| self.measure(quantity, spec, p, l)).collect::<Result<Vec<_>>>()?
        } else {
            lambdas.par_iter().map(|&l| self.measure(quantity, spec, p, l)).collect::<Result<Vec<_>>>()?
        };
        let law = fit_power_law(lambdas, &values)?;
        if law.r_squared < MIN_R_SQUARED {
            return Err(SmlError::FitRejected(format!(
                "{quantity}: r² = {} below {MIN_R_SQUARED} (slope {})",
                law.r_squared, law.slope
            )));
        }
        Ok(ScalingFit {
            quantity,
            n: spec.n,
            alpha_re: spec.re_alpha(),
            alpha_im: spec.im_alpha(),
            p: if quantity.needs_p() { p } else { None },
            lambdas: lambdas.to_vec(),
            values,
            slope: law.slope,
            intercept: law.intercept,
            predicted,
            delta: law.slope - predicted,
            r_squared: law.r_squared,
        })
    }

    pub fn necessity_report(&self, spec: &MeansSpec, p: f64, lambdas: &[f64]) -> Result<NecessityReport> {
        if !(p >= 2.0) || !p.is_finite() {
            return Err(SmlError::InvalidInput(format!("the necessary conditions need p >= 2, got {p}")));
        }
        let testfn = self.run(Quantity::TestfnLpNorm, spec, Some(p), lambdas)?;
        let near = self.run(Quantity::MeanLpNearOrigin, spec, Some(p), lambdas)?;
        let far = self.run(Quantity::MeanTunedFar, spec, None, lambdas)?;
        let n = spec.n as f64;
        let a = spec.re_alpha();
        // Boundedness forces slope(mean) ≤ slope(f_λ); the mean slope moves
        // one-for-one with Re α, which turns the comparison into a bound.
        let origin = ImpliedBound::new("origin", a + near.slope - testfn.slope, (1.0 - n) / p);
        let tuned = ImpliedBound::new("tuned", a + far.slope - testfn.slope, (1.0 - n) / 2.0 + 1.0 / p);
        let required = origin.measured.max(tuned.measured);
        let predicted_required = origin.predicted.max(tuned.predicted);
        Ok(NecessityReport {
            n: spec.n,
            alpha_re: a,
            alpha_im: spec.im_alpha(),
            p,
            lambdas: lambdas.to_vec(),
            fits: vec![testfn, near, far],
            bounds: [origin, tuned],
            required,
            predicted_required,
            violated: a < required,
        })
    }
}

/// A lower bound on `Re α` obtained by comparing two slopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImpliedBound {
    pub route: &'static str,
    pub measured: f64,
    pub predicted: f64,
    pub slack: f64,
}

impl ImpliedBound {
    fn new(route: &'static str, measured: f64, predicted: f64) -> Self {
        Self { route, measured, predicted, slack: (measured - predicted).abs() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessityReport {
    pub n: u32,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub p: f64,
    pub lambdas: Vec<f64>,
    pub fits: Vec<ScalingFit>,
    /// Near-origin route first, tuned-time route second.
    pub bounds: [ImpliedBound; 2],
    pub required: f64,
    pub predicted_required: f64,
    /// `Re α` is below the measured necessary threshold.
    pub violated: bool,
}

impl NecessityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for b in &self.bounds {
            out.push_str(&format!(
                "{}: Re α >= {:.6} (predicted {:.6}, slack {:.2e})\n",
                b.route, b.measured, b.predicted, b.slack
            ));
        }
        if self.violated {
            out.push_str(&format!("necessary condition violated: Re α = {} < {:.6}\n", self.alpha_re, self.required));
        } else {
            out.push_str("necessary conditions hold\n");
        }
        out
    }
}

/// [`ScalingLab::run`] with a fresh lab and the default geometry.
pub fn run_scaling(
    quantity: Quantity,
    spec: &MeansSpec,
    p: Option<f64>,
    lambdas: &[f64],
    quad: &QuadratureSpec,
) -> Result<ScalingFit> {
    ScalingLab::new(*quad, SweepGeometry::default())?.run(quantity, spec, p, lambdas)
}

/// [`ScalingLab::necessity_report`] with a fresh lab and the default geometry.
pub fn necessity_report(spec: &MeansSpec, p: f64, lambdas: &[f64], quad: &QuadratureSpec) -> Result<NecessityReport> {
    ScalingLab::new(*quad, SweepGeometry::default())?.necessity_report(spec, p, lambdas)
}

/// Dyadic λ grid `2^lo, …, 2^hi`.
pub fn dyadic_lambdas(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}
