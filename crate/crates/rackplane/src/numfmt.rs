//! Numeric formatting shared by the file writers.

/// Rounds to the given number of significant digits. All numbers in data
/// files carry six significant digits so that re-runs diff cleanly.
pub fn round_sig(value: f64, digits: i32) -> f64 {
    if value == 0.0 || !value.is_finite() {
        return if value == 0.0 { 0.0 } else { value };
    }
    let magnitude = value.abs().log10().floor() as i32;
    let factor = 10f64.powi(digits - 1 - magnitude);
    (value * factor).round() / factor
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_six_significant_digits() {
        assert_eq!(round_sig(312.0600001, 6), 312.06);
        assert_eq!(round_sig(0.059999999, 6), 0.06);
        assert_eq!(round_sig(449.885750001, 6), 449.886);
        assert_eq!(round_sig(1400.0, 6), 1400.0);
        assert_eq!(round_sig(-137.825750001, 6), -137.826);
        assert_eq!(round_sig(0.0, 6), 0.0);
        assert_eq!(round_sig(1.4e-9, 6), 1.4e-9);
    }

    #[test]
    fn small_values_keep_their_scale() {
        assert_eq!(round_sig(2.8000000001e-14, 6), 2.8e-14);
    }
}
