//! Composite Gauss quadrature for smooth amplitudes against oscillatory
//! factors. Panel widths are tied to a caller-supplied bound on the phase
//! derivative and every result is checked against one panel-doubling step.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gauss::CompositeRule;
use crate::error::{Result, SmlError};

/// Differences below this multiple of `Σ w |g|` are rounding noise, not a
/// failure to converge. For large total phase the floor grows to
/// `8 ε Φ`, where `Φ` bounds the phase of the integrand over the support.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Panel refinement limit; beyond this a request is treated as unresolvable.
const MAX_PANELS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_panel: usize,
    /// Largest phase increment (radians) allowed across one panel.
    pub max_phase_per_panel: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes_per_panel: 16, max_phase_per_panel: FRAC_PI_2, abs_tol: 1e-15, rel_tol: 1e-9 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_panel < 8 {
            return Err(SmlError::InvalidInput(format!(
                "nodes_per_panel must be at least 8, got {}",
                self.nodes_per_panel
            )));
        }
        if !(self.max_phase_per_panel > 0.0 && self.max_phase_per_panel <= std::f64::consts::PI) {
            return Err(SmlError::InvalidInput(format!(
                "max_phase_per_panel must lie in (0, π], got {}",
                self.max_phase_per_panel
            )));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(SmlError::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// The cheapest admissible spec, used for λ-sweeps. The doubling check
    /// still runs, so accuracy is verified rather than assumed.
    pub fn sweep() -> Self {
        Self { nodes_per_panel: 8, max_phase_per_panel: std::f64::consts::PI, ..Self::default() }
    }

    /// Same spec with the phase budget per panel halved.
    pub fn refined(&self) -> Self {
        Self { max_phase_per_panel: self.max_phase_per_panel / 2.0, ..*self }
    }
}

/// Number of panels `spec` requires on an interval of length `len`.
pub fn panel_count(len: f64, freq_bound: f64, spec: &QuadratureSpec) -> usize {
    let n = (len * freq_bound.max(1.0) / spec.max_phase_per_panel).ceil();
    (n as usize).max(1)
}

/// A coarse composite rule together with its panel-doubled refinement.
#[derive(Debug, Clone)]
pub struct OscillatoryRule {
    pub coarse: CompositeRule,
    pub fine: CompositeRule,
    spec: QuadratureSpec,
    phase_span: f64,
}

impl OscillatoryRule {
    pub fn new(support: (f64, f64), freq_bound: f64, spec: &QuadratureSpec) -> Result<Self> {
        let panels = panel_count(support.1 - support.0, freq_bound, spec);
        Self::with_panels(support, panels, spec)
    }

    pub fn with_panels(support: (f64, f64), panels: usize, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let (a, b) = support;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(SmlError::InvalidInput(format!("bad support [{a}, {b}]")));
        }
        if panels > MAX_PANELS {
            return Err(SmlError::InvalidInput(format!(
                "{panels} panels requested; frequency too high for composite Gauss rules"
            )));
        }
        Ok(Self {
            coarse: CompositeRule::uniform(a, b, panels, spec.nodes_per_panel),
            fine: CompositeRule::uniform(a, b, 2 * panels, spec.nodes_per_panel),
            spec: *spec,
            phase_span: panels as f64 * spec.max_phase_per_panel / (b - a) * a.abs().max(b.abs()),
        })
    }

    pub fn panels(&self) -> usize {
        self.coarse.len() / self.spec.nodes_per_panel
    }

    /// Accepts the refined value unless the two levels disagree beyond tolerance.
    ///
    /// `magnitude` is `Σ w |g|` on the fine level (any comparable bound will do).
    pub fn accept(&self, coarse: Complex64, fine: Complex64, magnitude: f64) -> Result<Complex64> {
        let diff = (fine - coarse).norm();
        let tol = self
            .spec
            .abs_tol
            .max(self.spec.rel_tol * fine.norm())
            .max(magnitude * ROUNDOFF_FLOOR.max(8.0 * f64::EPSILON * self.phase_span));
        if diff <= tol && diff.is_finite() {
            Ok(fine)
        } else {
            Err(SmlError::NonConvergence(format!(
                "panel doubling changed the integral by {diff:e} (tolerance {tol:e}, {} panels)",
                self.panels()
            )))
        }
    }

    pub fn integrate<F>(&self, amplitude: F) -> Result<Complex64>
    where
        F: Fn(f64) -> Complex64,
    {
        let coarse = sum_rule(&self.coarse, &amplitude).0;
        let (fine, magnitude) = sum_rule(&self.fine, &amplitude);
        self.accept(coarse, fine, magnitude)
    }
}

fn sum_rule<F: Fn(f64) -> Complex64>(rule: &CompositeRule, f: &F) -> (Complex64, f64) {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(*x) * *w;
        mag += v.norm();
        acc += v;
    }
    (acc, mag)
}

/// `∫_support amplitude(r) dr` where `amplitude` may oscillate with total
/// phase derivative at most `freq_bound` (radians per unit length).
pub fn integrate_oscillatory<F>(
    amplitude: F,
    support: (f64, f64),
    freq_bound: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(freq_bound >= 0.0) || !freq_bound.is_finite() {
        return Err(SmlError::InvalidInput(format!("frequency bound {freq_bound} must be finite and >= 0")));
    }
    OscillatoryRule::new(support, freq_bound, spec)?.integrate(amplitude)
}
