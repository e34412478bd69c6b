//! Deterministic rendering of reals for reports and model files.

/// `x` with 17 significant digits in scientific notation, which round-trips
/// every finite `f64` exactly.
pub(crate) fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// `x` rounded to 6 significant digits, rendered like `%g` but always with a
/// decimal point (`1.0`, `0.0123457`, `1.5e-7`).
pub(crate) fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let rounded: f64 = sci.parse().expect("round trip");
    if (-5..15).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let mut s = format!("{rounded:.decimals$}");
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.push('0');
            }
        } else {
            s.push_str(".0");
        }
        s
    } else {
        let (mantissa, _) = sci.split_once('e').unwrap();
        let mut m = mantissa.to_string();
        while m.ends_with('0') {
            m.pop();
        }
        if m.ends_with('.') {
            m.push('0');
        }
        format!("{m}e{exp}")
    }
}
