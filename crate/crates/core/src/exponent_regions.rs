//! The `(1/p, Re α)` plane: necessary conditions for `L^p` boundedness of the
//! maximal operator against the recorded sufficiency ranges.
//!
//! Sufficiency is strict and necessity non-strict, exactly as stated in the
//! literature, so a point on a shared boundary classifies as open.

use serde::Serialize;

use crate::error::{Result, SmlError};
use crate::output::fmt_f64;

/// Points within this distance of a threshold count as on it, so that rounding
/// in `1/p` does not decide strict inequalities.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    SufficientKnown,
    NecessaryViolated,
    Open,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::SufficientKnown => "SUFFICIENT_KNOWN",
            Verdict::NecessaryViolated => "NECESSARY_VIOLATED",
            Verdict::Open => "OPEN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub n: u32,
    pub p: f64,
    pub re_alpha: f64,
    pub verdict: Verdict,
    pub triggering_condition: String,
}

/// A recorded sufficient condition `Re α > threshold` on its range of `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficientCondition {
    pub name: &'static str,
    pub threshold: f64,
}

fn check(n: u32, p: f64) -> Result<()> {
    if n < 2 {
        return Err(SmlError::Domain(format!("dimension must be at least 2, got {n}")));
    }
    if !(p > 1.0) || p.is_nan() {
        return Err(SmlError::Domain(format!("p must exceed 1, got {p}")));
    }
    Ok(())
}

/// `2n/(n-1)`, where the two necessary conditions meet.
pub fn crossover_p(n: u32) -> f64 {
    let n = n as f64;
    2.0 * n / (n - 1.0)
}

/// `2(n+1)/(n-1)`, the split point of the decoupling ranges.
pub fn decoupling_p(n: u32) -> f64 {
    let n = n as f64;
    2.0 * (n + 1.0) / (n - 1.0)
}

/// Both necessary expressions, `((1-n)/2 + 1/p, (1-n)/p)`.
pub fn necessary_expressions(n: u32, p: f64) -> (f64, f64) {
    let nf = n as f64;
    ((1.0 - nf) / 2.0 + 1.0 / p, (1.0 - nf) / p)
}

/// `Re α` must be at least this for boundedness; `None` for `p < 2`.
pub fn necessary_threshold(n: u32, p: f64) -> Result<Option<f64>> {
    check(n, p)?;
    if p < 2.0 {
        return Ok(None);
    }
    let (small_p, large_p) = necessary_expressions(n, p);
    Ok(Some(small_p.max(large_p)))
}

/// Every recorded sufficient condition applicable at `p`.
pub fn sufficient_conditions(n: u32, p: f64) -> Result<Vec<SufficientCondition>> {
    check(n, p)?;
    let nf = n as f64;
    let inv = 1.0 / p;
    let mut out = Vec::new();
    if p <= 2.0 {
        out.push(SufficientCondition { name: "stein_p_le_2", threshold: 1.0 - nf + nf * inv });
    }
    if p >= 2.0 {
        out.push(SufficientCondition { name: "stein_p_ge_2", threshold: (2.0 - nf) * inv });
        if p <= decoupling_p(n) {
            out.push(SufficientCondition {
                name: "decoupling_low_p",
                threshold: (1.0 - nf) / 4.0 + (3.0 - nf) / 2.0 * inv,
            });
        }
        if p >= decoupling_p(n) {
            out.push(SufficientCondition { name: "decoupling_high_p", threshold: (1.0 - nf) * inv });
        }
    }
    Ok(out)
}

/// The lowest recorded sufficient threshold at `p`.
pub fn sufficient_threshold(n: u32, p: f64) -> Result<SufficientCondition> {
    let conds = sufficient_conditions(n, p)?;
    Ok(conds
        .into_iter()
        .reduce(|best, c| if c.threshold < best.threshold { c } else { best })
        .expect("every p > 1 has a recorded range"))
}

pub fn classify(n: u32, p: f64, re_alpha: f64) -> Result<RegionVerdict> {
    check(n, p)?;
    if !re_alpha.is_finite() {
        return Err(SmlError::Domain(format!("Re α must be finite, got {re_alpha}")));
    }
    let verdict = |verdict, cond: String| RegionVerdict { n, p, re_alpha, verdict, triggering_condition: cond };
    let best = sufficient_threshold(n, p)?;
    if re_alpha > best.threshold + BOUNDARY_TOL {
        return Ok(verdict(Verdict::SufficientKnown, format!("{}: Re α > {}", best.name, best.threshold)));
    }
    if let Some(nec) = necessary_threshold(n, p)? {
        if re_alpha < nec - BOUNDARY_TOL {
            let (small_p, _) = necessary_expressions(n, p);
            let which = if p <= crossover_p(n) && nec == small_p { "necessary_small_p" } else { "necessary_large_p" };
            return Ok(verdict(Verdict::NecessaryViolated, format!("{which}: Re α >= {nec} fails")));
        }
    }
    Ok(verdict(Verdict::Open, "none".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryRow {
    pub n: u32,
    pub p: f64,
    pub inv_p: f64,
    /// NaN below `p = 2`, where nothing is recorded.
    pub necessary_threshold: f64,
    pub sufficient_threshold: f64,
    pub sufficient_source: &'static str,
    pub gap: f64,
}

pub fn boundary_table(n: u32, p_grid: &[f64]) -> Result<Vec<BoundaryRow>> {
    p_grid
        .iter()
        .map(|&p| {
            let nec = necessary_threshold(n, p)?.unwrap_or(f64::NAN);
            let suf = sufficient_threshold(n, p)?;
            Ok(BoundaryRow {
                n,
                p,
                inv_p: 1.0 / p,
                necessary_threshold: nec,
                sufficient_threshold: suf.threshold,
                sufficient_source: suf.name,
                gap: suf.threshold - nec,
            })
        })
        .collect()
}

/// Offset used for the example verdicts on either side of the thresholds.
pub const VERDICT_OFFSET: f64 = 0.01;

pub const BOUNDARY_CSV_HEADER: &str = "n,p,inv_p,necessary_threshold,sufficient_threshold,gap,sufficient_source,\
verdict_below_necessary,verdict_at_necessary,verdict_above_sufficient\n";

/// CSV with example verdicts just below the necessary threshold, on it, and
/// just above the sufficient threshold.
pub fn boundary_table_csv(rows: &[BoundaryRow]) -> Result<String> {
    let mut out = String::from(BOUNDARY_CSV_HEADER);
    for r in rows {
        let probe = |a: f64| -> Result<&'static str> {
            if a.is_nan() {
                Ok("")
            } else {
                Ok(classify(r.n, r.p, a)?.verdict.name())
            }
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            fmt_f64(r.p),
            fmt_f64(r.inv_p),
            fmt_f64(r.necessary_threshold),
            fmt_f64(r.sufficient_threshold),
            fmt_f64(r.gap),
            r.sufficient_source,
            probe(r.necessary_threshold - VERDICT_OFFSET)?,
            probe(r.necessary_threshold)?,
            probe(r.sufficient_threshold + VERDICT_OFFSET)?,
        ));
    }
    Ok(out)
}

/// Inclusive grid `start, start + step, …` up to `stop` (with a small
/// allowance for accumulated rounding at the end point).
pub fn p_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(SmlError::InvalidInput(format!("step must be positive, got {step}")));
    }
    if !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(SmlError::InvalidInput(format!("empty range [{start}, {stop}]")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(SmlError::InvalidInput(format!("range has {count} points; limit is 1000000")));
    }
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}
