//! Locale-independent numeric lexing: `.` is the only decimal separator and
//! grouping separators are never accepted.

/// Parses `[+-]?[0-9]+` into an `i64`; surrounding ASCII whitespace is ignored.
pub fn parse_integer(raw: &str) -> Option<i64> {
    let s = raw.trim_ascii();
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses a finite decimal number with optional exponent. `inf`, `NaN` and
/// hexadecimal forms are rejected even though `f64::from_str` accepts some.
pub fn parse_number(raw: &str) -> Option<f64> {
    let s = raw.trim_ascii();
    if !is_decimal_lexeme(s.as_bytes()) {
        return None;
    }
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}

fn is_decimal_lexeme(b: &[u8]) -> bool {
    let mut i = 0;
    if matches!(b.first(), Some(b'+' | b'-')) {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut mantissa_digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        mantissa_digits += i - frac_start;
    }
    if mantissa_digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if matches!(b.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers() {
        assert_eq!(parse_integer("42"), Some(42));
        assert_eq!(parse_integer(" -7 "), Some(-7));
        assert_eq!(parse_integer("+3"), Some(3));
        assert_eq!(parse_integer("1.0"), None);
        assert_eq!(parse_integer("1,000"), None);
        assert_eq!(parse_integer("-"), None);
        assert_eq!(parse_integer("99999999999999999999"), None);
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_number("1.50000"), Some(1.5));
        assert_eq!(parse_number(".5"), Some(0.5));
        assert_eq!(parse_number("5."), Some(5.0));
        assert_eq!(parse_number("1e3"), Some(1000.0));
        assert_eq!(parse_number("-2.5E-1"), Some(-0.25));
        for bad in [
            "inf", "NaN", "infinity", "1,5", "1 000", "0x10", "e5", ".", "1e", "1e400",
        ] {
            assert_eq!(parse_number(bad), None, "{bad}");
        }
    }
}
