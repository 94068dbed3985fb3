//! Named measurement sets used by the worked examples.

use std::f64::consts::FRAC_1_SQRT_2 as H;

use super::measurement::{Measurement, MeasurementSet};
use super::state::WernerFamily;
use crate::error::{Error, Result};

pub fn sigma_z() -> Measurement {
    Measurement::projective_real("sigma_z", &[&[1.0, 0.0], &[0.0, 1.0]]).expect("valid basis")
}

pub fn sigma_x() -> Measurement {
    Measurement::projective_real("sigma_x", &[&[H, H], &[H, -H]]).expect("valid basis")
}

/// {σ_z, σ_x} in the natural outcome order.
pub fn pauli_zx() -> MeasurementSet {
    MeasurementSet::new(vec![sigma_z(), sigma_x()]).expect("valid set")
}

/// {σ_z, σ_x} with each basis listed in reverse ({|1⟩,|0⟩}, {|−⟩,|+⟩}), so
/// outcome `a` of [`pauli_zx`] pairs with the orthogonal vector. This is the
/// pairing under which the singlet correlates perfectly.
pub fn pauli_zx_anti() -> MeasurementSet {
    let z = sigma_z().reordered(&[1, 0]).expect("permutation");
    let x = sigma_x().reordered(&[1, 0]).expect("permutation");
    MeasurementSet::new(vec![z, x]).expect("valid set")
}

/// Eigenbases of the Gell-Mann matrices λ_1, λ_4, λ_8. λ_8 is degenerate, so its
/// basis is fixed to the computational basis.
pub fn gellmann_148() -> MeasurementSet {
    let l1 = Measurement::projective_real(
        "lambda_1",
        &[&[H, H, 0.0], &[H, -H, 0.0], &[0.0, 0.0, 1.0]],
    )
    .expect("valid basis");
    let l4 = Measurement::projective_real(
        "lambda_4",
        &[&[H, 0.0, H], &[H, 0.0, -H], &[0.0, 1.0, 0.0]],
    )
    .expect("valid basis");
    let l8 = Measurement::projective_real(
        "lambda_8",
        &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]],
    )
    .expect("valid basis");
    MeasurementSet::new(vec![l1, l4, l8]).expect("valid set")
}

/// The three-basis qutrit family M_1, M_2, M_3(θ).
pub fn fig2_family(theta: f64) -> MeasurementSet {
    let (s, c) = theta.sin_cos();
    let m1 = Measurement::projective_real(
        "M1",
        &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]],
    )
    .expect("valid basis");
    let m2 = Measurement::projective_real(
        "M2",
        &[&[1.0, 0.0, 0.0], &[0.0, H, H], &[0.0, H, -H]],
    )
    .expect("valid basis");
    let m3 = Measurement::projective_real("M3", &[&[c, 0.0, s], &[0.0, 1.0, 0.0], &[-s, 0.0, c]])
        .expect("valid basis");
    MeasurementSet::new(vec![m1, m2, m3]).expect("valid set")
}

/// Alice's and Bob's sets for a Werner family, paired so that the entangled
/// component correlates outcome `a` with outcome `a`.
pub fn werner_sets(family: WernerFamily) -> (MeasurementSet, MeasurementSet) {
    match family {
        WernerFamily::Qubit => (pauli_zx(), pauli_zx_anti()),
        WernerFamily::Qutrit => (gellmann_148(), gellmann_148()),
    }
}

pub const BUILTIN_NAMES: &[&str] = &["pauli-zx", "pauli-zx-anti", "gellmann-148", "fig2:<theta>"];

/// Resolves a builtin set by name.
pub fn builtin_set(name: &str) -> Result<MeasurementSet> {
    if let Some(theta) = name.strip_prefix("fig2:") {
        let theta: f64 = theta
            .trim()
            .parse()
            .map_err(|_| Error::BadParameter(format!("bad fig2 angle '{theta}'")))?;
        if !theta.is_finite() {
            return Err(Error::BadParameter(format!("bad fig2 angle '{theta}'")));
        }
        return Ok(fig2_family(theta));
    }
    match name {
        "pauli-zx" => Ok(pauli_zx()),
        "pauli-zx-anti" => Ok(pauli_zx_anti()),
        "gellmann-148" => Ok(gellmann_148()),
        other => Err(Error::BadParameter(format!(
            "unknown builtin '{other}' (expected one of {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolves_names() {
        assert_eq!(builtin_set("pauli-zx").unwrap().len(), 2);
        assert_eq!(builtin_set("gellmann-148").unwrap().dim(), 3);
        assert_eq!(builtin_set("fig2:0.3").unwrap().len(), 3);
        assert!(builtin_set("fig2:abc").is_err());
        assert!(builtin_set("nope").is_err());
    }

    #[test]
    fn fig2_family_is_valid_for_any_angle() {
        for i in 0..50 {
            let set = fig2_family(i as f64 * 0.13);
            assert!(set.is_projective());
        }
    }
}
