//! Deterministic CSV number formatting: nine significant digits, `.` decimal
//! separator, scientific notation only outside the fixed-point range.

pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..=8).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.8e}")
    }
}
