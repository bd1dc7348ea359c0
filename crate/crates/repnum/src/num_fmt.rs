//! Number formatting for CSV output.

/// `v` with 12 significant digits, shortest form, like C's `%.12g`.
pub fn real(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..12).contains(&exp) {
        let m = trim(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim(&format!("{v:.*}", (11 - exp) as usize)).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::real;

    #[test]
    fn matches_printf() {
        assert_eq!(real(0.0), "0");
        assert_eq!(real(785_398.163_397_448_3), "785398.163397");
        assert_eq!(real(1.0), "1");
        assert_eq!(real(-0.2170157), "-0.2170157");
        assert_eq!(real(1e-5), "1e-05");
        assert_eq!(real(123_456_789_012_345.0), "1.23456789012e+14");
        assert_eq!(real(999_999_999_999.5), "1e+12");
        assert_eq!(real(0.000_123_456_789_012_34), "0.000123456789012");
        assert_eq!(real(2.0 / 3.0), "0.666666666667");
    }
}
