//! Bit-stable number formatting for CSV/JSON artifacts.
//!
//! Every float in every table goes through [`fmt_sig`], which implements
//! C's `%.12g`: 12 significant digits, trailing zeros trimmed, scientific
//! notation only when the decimal exponent leaves [−4, 12). The same value
//! therefore always prints the same bytes — identical configs diff clean
//! regardless of platform, locale, or thread count — and 12 digits are
//! enough to round-trip any value these simulations distinguish.

/// Significant digits carried by [`fmt_sig`].
const SIG: usize = 12;

/// Formats `x` with [`SIG`] significant digits, `%.12g`-style.
///
/// The rounding is done once by the standard formatter (correctly rounded
/// scientific form); this function only re-arranges digits, so no
/// double-rounding can creep in. The output is valid JSON number syntax.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string(); // folds −0 into 0
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG - 1, x);
    let (mant, exp) = sci.split_once('e').expect("{:e} always carries an exponent");
    let exp: i32 = exp.parse().expect("{:e} exponent is an integer");
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    debug_assert_eq!(digits.len(), SIG);
    let body = if (0..SIG as i32).contains(&exp) {
        // plain notation, point inside or just after the digit run
        let split = (exp + 1) as usize;
        let frac = digits[split..].trim_end_matches('0');
        if frac.is_empty() {
            digits[..split].to_string()
        } else {
            format!("{}.{}", &digits[..split], frac)
        }
    } else if (-4..0).contains(&exp) {
        // plain notation with leading zeros: 0.000dddd…
        let frac = format!("{}{}", "0".repeat((-exp - 1) as usize), digits);
        format!("0.{}", frac.trim_end_matches('0'))
    } else {
        // scientific notation
        let rest = digits[1..].trim_end_matches('0');
        if rest.is_empty() {
            format!("{}e{exp}", &digits[..1])
        } else {
            format!("{}.{rest}e{exp}", &digits[..1])
        }
    };
    if mant.starts_with('-') {
        format!("-{body}")
    } else {
        body
    }
}

/// One CSV cell for an optional value; absent prints as the empty cell.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_notation_inside_the_g_window() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-1.0), "-1");
        assert_eq!(fmt_sig(0.5), "0.5");
        assert_eq!(fmt_sig(0.003), "0.003");
        assert_eq!(fmt_sig(0.1), "0.1");
        assert_eq!(fmt_sig(152.76), "152.76");
        assert_eq!(fmt_sig(8885.7658763094), "8885.76587631");
        assert_eq!(fmt_sig(123456789012.0), "123456789012");
    }

    #[test]
    fn scientific_notation_outside_the_g_window() {
        assert_eq!(fmt_sig(1e-5), "1e-5");
        assert_eq!(fmt_sig(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt_sig(1.2345678901234e13), "1.23456789012e13");
        assert_eq!(fmt_sig(1e12), "1e12");
        // exponent −4 is the last plain one
        assert_eq!(fmt_sig(1e-4), "0.0001");
    }

    #[test]
    fn rounding_happens_at_twelve_digits() {
        assert_eq!(fmt_sig(1.0256789012349e-3), "0.00102567890123");
        assert_eq!(fmt_sig(0.30000000000000004), "0.3"); // 0.1 + 0.2
        assert_eq!(fmt_sig(2.0 + 1.0 / 152.76), "2.00654621629");
        // carry across the exponent boundary
        assert_eq!(fmt_sig(0.99999999999999), "1");
    }

    #[test]
    fn round_trips_within_half_ulp_of_twelve_digits() {
        for &x in &[
            8885.7658763094,
            27.874877,
            -1.0e-3,
            std::f64::consts::PI,
            1.0 / 3.0,
        ] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!(
                ((back - x) / x).abs() < 5e-12,
                "{x} printed as {} re-read as {back}",
                fmt_sig(x)
            );
        }
    }
}
