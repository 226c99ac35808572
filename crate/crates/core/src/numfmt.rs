//! Fixed significant-digit decimal formatting.

/// Formats `x` in plain decimal notation with `digits` significant digits.
///
/// Zero prints as `0`. With `digits >= 17` every finite `f64` round-trips
/// through `str::parse` bit-exactly.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let digits = digits.max(1);
    // `{:.Ne}` rounds first, so its exponent already accounts for carries
    // like 9.99 -> 1.00e1.
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}
