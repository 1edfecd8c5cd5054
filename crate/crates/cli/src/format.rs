//! Deterministic numeric formatting: 12 significant digits everywhere, so
//! identical configs produce byte-identical files.

/// 12 significant digits in scientific notation.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.25), "2.50000000000e-1");
        assert_eq!(sig12(-1.0 / 3.0), "-3.33333333333e-1");
        assert_eq!(sig12(0.0), "0.00000000000e0");
    }
}
