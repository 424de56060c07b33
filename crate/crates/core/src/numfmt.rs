//! Fixed 9-significant-digit formatting shared by the reports.

use num_complex::Complex64;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Decimal for moderate magnitudes, scientific otherwise; trailing zeros
/// trimmed. `-0` prints as `0`.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Round to 9 significant digits, for JSON numbers.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// `a`, `a+bi` or `a-bi`.
pub fn complex9(z: Complex64) -> String {
    let re = sig9(z.re);
    if z.im == 0.0 {
        return re;
    }
    let im = sig9(z.im.abs());
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{re}{sign}{im}i")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(sig9(-std::f64::consts::SQRT_2), "-1.41421356");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(-0.0), "0");
        assert_eq!(sig9(5.0), "5");
        assert_eq!(sig9(-0.38196601125), "-0.381966011");
        assert_eq!(sig9(9.84e-6), "9.84e-6");
        assert_eq!(sig9(9.84e-5), "0.0000984");
        assert_eq!(sig9(1.5e-7), "1.5e-7");
        assert_eq!(sig9(123456789012.0), "1.23456789e11");
        assert_eq!(sig9(f64::INFINITY), "inf");
        assert_eq!(complex9(Complex64::new(1.0, -2.5)), "1-2.5i");
        assert_eq!(complex9(Complex64::new(0.0, 2.0)), "0+2i");
        assert_eq!(round9(0.1 + 0.2), 0.3);
    }
}
