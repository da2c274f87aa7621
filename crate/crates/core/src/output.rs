//! Number formatting shared by every text output.

/// Shortest decimal string that parses back to exactly `x`.
///
/// Plain notation for moderate magnitudes, exponent notation otherwise.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
