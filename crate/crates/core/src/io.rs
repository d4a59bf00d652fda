//! Text output helpers shared by the CSV writers.

/// Nine significant digits, plain notation for moderate magnitudes and
/// exponent notation otherwise. Trailing zeros are dropped.
pub fn fmt_sig(x: f64) -> String {
    fmt_sig_n(x, 9)
}

pub fn fmt_sig_n(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding may carry into a new leading digit; that is still <= digits
        trim_zeros(s)
    } else {
        let s = format!("{x:.*e}", digits - 1);
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim_zeros(mantissa.to_string()), e)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s
    }
}
