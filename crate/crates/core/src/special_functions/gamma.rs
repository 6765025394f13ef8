//! Complex gamma function by the Lanczos approximation (g = 7, nine
//! coefficients) with the reflection formula on the left half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SmlError};

const LANCZOS_G: f64 = 7.0;

const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance to a nonpositive integer below which `gamma_complex` reports a pole.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// Returns the nonpositive integer `z` lies within `tol` of, if any.
pub fn near_nonpositive_integer(z: Complex64, tol: f64) -> Option<i64> {
    if z.re > tol {
        return None;
    }
    let k = z.re.round();
    if (z - Complex64::new(k, 0.0)).norm() < tol {
        Some(k as i64)
    } else {
        None
    }
}

/// Gamma function of a complex argument.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(SmlError::Domain(format!("non-finite gamma argument {z}")));
    }
    if let Some(k) = near_nonpositive_integer(z, POLE_TOLERANCE) {
        return Err(SmlError::Pole(format!("gamma has a pole at {k} (argument {z})")));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        return pi / ((pi * z).sin() * gamma_unchecked(1.0 - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * acc
}
