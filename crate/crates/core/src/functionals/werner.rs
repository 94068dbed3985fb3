use serde::Serialize;

use super::witness::{witness_with, WitnessBounds, WitnessReport};
use super::{quantum_functional, Pairing};
use crate::error::{Error, Result};
use crate::quantum::builtin::werner_sets;
use crate::quantum::{conditional_assemblage, werner_state, WernerFamily};

/// Width of the final bisection bracket.
pub const BISECTION_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Serialize)]
pub struct WernerThresholds {
    pub family: WernerFamily,
    /// `None` when the witness never fires for `p ≤ 1`.
    #[serde(serialize_with = "crate::numfmt::ser_sig7_opt")]
    pub steering_p: Option<f64>,
    #[serde(serialize_with = "crate::numfmt::ser_sig7_opt")]
    pub entanglement_p: Option<f64>,
    #[serde(serialize_with = "crate::numfmt::ser_sig7_opt")]
    pub rutkowski_p: Option<f64>,
    #[serde(serialize_with = "crate::numfmt::ser_sig7_opt")]
    pub bisection_steering_p: Option<f64>,
    #[serde(serialize_with = "crate::numfmt::ser_sig7_opt")]
    pub bisection_entanglement_p: Option<f64>,
    pub bounds: WitnessBounds,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub s_q_at_0: f64,
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub s_q_at_1: f64,
}

fn s_q(family: WernerFamily, p: f64) -> Result<f64> {
    let (a, b) = werner_sets(family);
    let asm = conditional_assemblage(&werner_state(family, p)?, &a)?;
    quantum_functional(&asm, &b)
}

/// `S_Q` is affine in `p`, so `p* = (bound − S_Q(0)) / (S_Q(1) − S_Q(0))`.
fn crossing(bound: f64, s0: f64, s1: f64) -> Option<f64> {
    let p = (bound - s0) / (s1 - s0);
    (p < 1.0 - 1e-12).then_some(p.max(0.0))
}

fn bisect(mut flag: impl FnMut(f64) -> Result<bool>) -> Result<Option<f64>> {
    if !flag(1.0)? {
        return Ok(None);
    }
    if flag(0.0)? {
        return Ok(Some(0.0));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if flag(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

pub fn werner_thresholds(family: WernerFamily) -> Result<WernerThresholds> {
    let (a, b) = werner_sets(family);
    let bounds = WitnessBounds::compute(&a, &b)?;
    let s0 = s_q(family, 0.0)?;
    let s1 = s_q(family, 1.0)?;
    if s1.is_nan() || s0.is_nan() || s1 <= s0 {
        return Err(Error::PreconditionFailed("S_Q does not increase along the Werner family".into()));
    }
    let report = |p: f64| witness_with(&werner_state(family, p)?, &a, &b, &bounds, Pairing::AsGiven);
    Ok(WernerThresholds {
        family,
        steering_p: crossing(bounds.steering, s0, s1),
        entanglement_p: crossing(bounds.entanglement, s0, s1),
        rutkowski_p: bounds.rutkowski.and_then(|r| crossing(r, s0, s1)),
        bisection_steering_p: bisect(|p| Ok(report(p)?.steerable))?,
        bisection_entanglement_p: bisect(|p| Ok(report(p)?.entangled))?,
        bounds,
        s_q_at_0: s0,
        s_q_at_1: s1,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WernerPoint {
    #[serde(serialize_with = "crate::numfmt::ser12")]
    pub p: f64,
    #[serde(flatten)]
    pub report: WitnessReport,
}

pub fn werner_sweep(family: WernerFamily, ps: &[f64]) -> Result<Vec<WernerPoint>> {
    let (a, b) = werner_sets(family);
    let bounds = WitnessBounds::compute(&a, &b)?;
    ps.iter()
        .map(|&p| {
            let report = witness_with(&werner_state(family, p)?, &a, &b, &bounds, Pairing::AsGiven)?;
            Ok(WernerPoint { p, report })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfmt::sig7_text;

    #[test]
    fn qubit_thresholds() {
        let t = werner_thresholds(WernerFamily::Qubit).unwrap();
        assert_eq!(sig7_text(t.steering_p.unwrap()), "0.7071068");
        assert_eq!(sig7_text(t.entanglement_p.unwrap()), "0.5857864");
        assert!((t.bisection_steering_p.unwrap() - t.steering_p.unwrap()).abs() < 1e-6);
        assert!((t.bisection_entanglement_p.unwrap() - t.entanglement_p.unwrap()).abs() < 1e-6);
    }

    #[test]
    fn qutrit_thresholds() {
        let t = werner_thresholds(WernerFamily::Qutrit).unwrap();
        assert_eq!(sig7_text(t.steering_p.unwrap()), "0.8090170");
        assert_eq!(sig7_text(t.entanglement_p.unwrap()), "0.7639320");
        assert_eq!(t.rutkowski_p, None);
    }

    #[test]
    fn sweep_flags_are_monotone() {
        let ps: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        for family in [WernerFamily::Qubit, WernerFamily::Qutrit] {
            let pts = werner_sweep(family, &ps).unwrap();
            for w in pts.windows(2) {
                assert!(!w[0].report.steerable || w[1].report.steerable);
                assert!(!w[0].report.entangled || w[1].report.entangled);
            }
        }
    }
}
