//! Fixed-format numeric output shared by the CSV writers.

/// 17 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// One CSV line (LF terminated) of numbers.
pub fn csv_row(values: &[f64]) -> String {
    let mut line = values.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}
