//! Number formatting shared by CSV writers.

/// Scientific notation with `digits` significant digits.
pub(crate) fn sci_digits(v: f64, digits: usize) -> String {
    format!("{v:.*e}", digits.max(1) - 1)
}

/// Nine significant digits.
pub(crate) fn sci(v: f64) -> String {
    sci_digits(v, 9)
}
