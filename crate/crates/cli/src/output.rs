//! Number formatting for the CSV rows and the human-readable reports.

/// Scientific form with 17 significant digits: enough to round-trip any
/// f64 exactly, and byte-stable across runs, platforms, and thread
/// counts. Every float in a scan file goes through this.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `digits` significant digits for reading: plain decimal while the
/// exponent stays reasonable, scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.clamp(1, 17);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..digits as i32).contains(&mag) {
        let dec = (digits as i32 - 1 - mag).max(0) as usize;
        format!("{x:.dec$}")
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}
