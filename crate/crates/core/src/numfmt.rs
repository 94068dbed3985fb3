//! Report number formatting. Reports carry values rounded to 12 decimal
//! places; Werner thresholds are rounded to 7 significant digits.

use serde::Serializer;

pub const REPORT_DECIMALS: i32 = 12;
pub const THRESHOLD_SIG_DIGITS: usize = 7;

/// Rounds to `decimals` places. Non-finite values pass through.
pub fn round_decimals(x: f64, decimals: i32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let formatted = format!("{:.*}", decimals.max(0) as usize, x);
    let y: f64 = formatted.parse().unwrap_or(x);
    // avoid "-0" in outputs
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let formatted = format!("{:.*e}", digits.saturating_sub(1), x);
    formatted.parse().unwrap_or(x)
}

pub fn round12(x: f64) -> f64 {
    round_decimals(x, REPORT_DECIMALS)
}

/// Fixed 12-decimal text for CSV cells.
pub fn fixed12(x: f64) -> String {
    format!("{:.12}", round12(x))
}

/// Fixed text at 7 significant digits, trailing zeros kept ("0.8090170").
pub fn sig7_text(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (THRESHOLD_SIG_DIGITS as i32 - 1 - magnitude).max(0) as usize;
    format!("{:.*}", decimals, round_sig(x, THRESHOLD_SIG_DIGITS))
}

pub fn ser12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round12(*x))
}

pub fn ser12_vec<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| round12(x)))
}

pub fn ser12_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round12(*v)),
        None => s.serialize_none(),
    }
}

pub fn ser_sig7<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x, THRESHOLD_SIG_DIGITS))
}

pub fn ser_sig7_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig(*v, THRESHOLD_SIG_DIGITS)),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_decimals() {
        assert_eq!(fixed12(1.0 + std::f64::consts::FRAC_1_SQRT_2), "1.707106781187");
        assert_eq!(fixed12((3.0 + 5f64.sqrt()) / 2.0), "2.618033988750");
        assert_eq!(round12(-1e-15), 0.0);
        assert_eq!(serde_json::to_string(&round12(3.0)).unwrap(), "3.0");
    }

    #[test]
    fn seven_significant() {
        assert_eq!(sig7_text(std::f64::consts::FRAC_1_SQRT_2), "0.7071068");
        assert_eq!(sig7_text((5f64.sqrt() + 1.0) / 4.0), "0.8090170");
        assert_eq!(sig7_text(2.0 - 2f64.sqrt()), "0.5857864");
        assert_eq!(round_sig(3.0 - 5f64.sqrt(), 7), 0.763932);
    }
}
